# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the deterministic random substrate.

Statement-for-statement twin of ``_pure``: same MT19937 core, same
53-bit uniform mapping, same distribution transforms with the same
draw accounting.  Compiled with -ffp-contract=off so double arithmetic
is bit-identical to the pure backend.  See ``_pure`` for the draw
accounting table.
"""

from libc.math cimport M_PI, cos, exp, fabs, floor, lgamma, log, pow, sin, sqrt
from libc.stdint cimport uint32_t, uint64_t

from operator import index as _as_index

import numpy as np

cdef double _TAU = 2.0 * M_PI
cdef double _U53_HI = 67108864.0
cdef double _U53_SCALE = 1.0 / 9007199254740992.0

cdef uint32_t _MATRIX_A = 0x9908B0DFu
cdef uint32_t _UPPER = 0x80000000u
cdef uint32_t _LOWER = 0x7FFFFFFFu


cdef class Mt19937:
    """MT19937 generator state plus distribution transforms."""

    cdef uint32_t _mt[624]
    cdef int _mti
    cdef readonly unsigned long seed
    cdef readonly unsigned long long draw_count
    cdef double _cached_normal
    cdef bint _has_cached

    def __init__(self, seed):
        seed = _as_index(seed)
        if seed < 0 or seed > 0xFFFFFFFF:
            raise ValueError("seed must be a 32-bit unsigned integer")
        self.seed = seed
        cdef int i
        self._mt[0] = <uint32_t>seed
        for i in range(1, 624):
            self._mt[i] = <uint32_t>(1812433253u * (self._mt[i - 1] ^ (self._mt[i - 1] >> 30)) + <uint32_t>i)
        self._mti = 624
        self.draw_count = 0
        self._cached_normal = 0.0
        self._has_cached = False

    @property
    def state_words(self):
        cdef int i
        return tuple([self._mt[i] for i in range(624)])

    @property
    def index(self):
        return self._mti

    @property
    def has_cached_normal(self):
        return self._has_cached

    cdef void _twist(self):
        cdef int kk
        cdef uint32_t y
        for kk in range(624 - 397):
            y = (self._mt[kk] & _UPPER) | (self._mt[kk + 1] & _LOWER)
            self._mt[kk] = self._mt[kk + 397] ^ (y >> 1) ^ (_MATRIX_A if y & 1u else 0u)
        for kk in range(624 - 397, 623):
            y = (self._mt[kk] & _UPPER) | (self._mt[kk + 1] & _LOWER)
            self._mt[kk] = self._mt[kk + (397 - 624)] ^ (y >> 1) ^ (_MATRIX_A if y & 1u else 0u)
        y = (self._mt[623] & _UPPER) | (self._mt[0] & _LOWER)
        self._mt[623] = self._mt[396] ^ (y >> 1) ^ (_MATRIX_A if y & 1u else 0u)
        self._mti = 0

    cdef uint32_t _next(self):
        cdef uint32_t y
        if self._mti >= 624:
            self._twist()
        y = self._mt[self._mti]
        self._mti += 1
        self.draw_count += 1
        # Tempering.
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680u
        y ^= (y << 15) & 0xEFC60000u
        y ^= y >> 18
        return y

    cdef double _uniform53(self):
        cdef uint32_t a = self._next() >> 5
        cdef uint32_t b = self._next() >> 6
        return (a * _U53_HI + b) * _U53_SCALE

    def next_u32(self):
        return self._next()

    def next_uniform53(self):
        return self._uniform53()

    def sample_uniform(self, double low=0.0, double high=1.0):
        """Uniform draw on the half-open interval [low, high)."""
        if not high >= low:
            raise ValueError("high must be >= low")
        return low + (high - low) * self._uniform53()

    cdef double _standard_normal(self):
        cdef double u1, u2, r, a, z
        if self._has_cached:
            self._has_cached = False
            return self._cached_normal
        u1 = self._uniform53()
        u2 = self._uniform53()
        r = sqrt(-2.0 * log(1.0 - u1))
        a = _TAU * u2
        self._cached_normal = r * sin(a)
        self._has_cached = True
        return r * cos(a)

    def sample_normal(self, double mean, double std):
        if not std >= 0.0:
            raise ValueError("std must be >= 0")
        return mean + std * self._standard_normal()

    def sample_lognormal(self, double mu_log, double sigma_log):
        if not sigma_log >= 0.0:
            raise ValueError("sigma_log must be >= 0")
        return exp(mu_log + sigma_log * self._standard_normal())

    def sample_exponential(self, double mean):
        if not mean > 0.0:
            raise ValueError("mean must be > 0")
        return -mean * log(1.0 - self._uniform53())

    def sample_poisson(self, double rate):
        if not rate >= 0.0:
            raise ValueError("rate must be >= 0")
        if rate < 30.0:
            return self._poisson_knuth(rate)
        return self._poisson_ptrs(rate)

    cdef long _poisson_knuth(self, double lam):
        cdef double enlam = exp(-lam)
        cdef long k = 0
        cdef double p = 1.0
        while True:
            k += 1
            p *= self._uniform53()
            if p <= enlam:
                return k - 1

    cdef long _poisson_ptrs(self, double lam):
        cdef double slam = sqrt(lam)
        cdef double loglam = log(lam)
        cdef double b = 0.931 + 2.53 * slam
        cdef double a = -0.059 + 0.02483 * b
        cdef double invalpha = 1.1239 + 1.1328 / (b - 3.4)
        cdef double vr = 0.9277 - 3.6224 / (b - 2.0)
        cdef double u, v, us, k
        while True:
            u = self._uniform53() - 0.5
            v = self._uniform53()
            us = 0.5 - fabs(u)
            if us == 0.0 or v == 0.0:
                continue
            k = floor((2.0 * a / us + b) * u + lam + 0.43)
            if us >= 0.07 and v <= vr:
                return <long>k
            if k < 0.0:
                continue
            if us < 0.013 and v > us:
                continue
            if (log(v) + log(invalpha) - log(a / (us * us) + b)
                    <= k * loglam - lam - lgamma(k + 1.0)):
                return <long>k

    def sample_gamma(self, double shape, double scale):
        if not shape > 0.0:
            raise ValueError("shape must be > 0")
        if not scale > 0.0:
            raise ValueError("scale must be > 0")
        if shape < 1.0:
            g = self.sample_gamma(shape + 1.0, scale)
            return g * pow(1.0 - self._uniform53(), 1.0 / shape)
        return self._gamma_mt(shape, scale)

    cdef double _gamma_mt(self, double shape, double scale):
        # Marsaglia-Tsang squeeze method, own Box-Muller pair (cache untouched).
        cdef double d = shape - 1.0 / 3.0
        cdef double c = 1.0 / sqrt(9.0 * d)
        cdef double u1, u2, x, t, v, u, xx
        while True:
            u1 = self._uniform53()
            u2 = self._uniform53()
            x = sqrt(-2.0 * log(1.0 - u1)) * cos(_TAU * u2)
            t = 1.0 + c * x
            v = t * t * t
            if v <= 0.0:
                continue
            u = self._uniform53()
            xx = x * x
            if u < 1.0 - 0.0331 * xx * xx:
                return d * v * scale
            if u > 0.0 and log(u) < 0.5 * xx + d * (1.0 - v + log(v)):
                return d * v * scale

    # Batch helpers: each is sequence-equivalent to n scalar calls.

    def u32s(self, Py_ssize_t n):
        out = np.empty(n, dtype=np.uint32)
        cdef uint32_t[::1] v = out
        cdef Py_ssize_t i
        for i in range(n):
            v[i] = self._next()
        return out

    def uniforms(self, Py_ssize_t n):
        out = np.empty(n)
        cdef double[::1] v = out
        cdef Py_ssize_t i
        for i in range(n):
            v[i] = self._uniform53()
        return out

    def normals(self, Py_ssize_t n, double mean=0.0, double std=1.0):
        if not std >= 0.0:
            raise ValueError("std must be >= 0")
        out = np.empty(n)
        cdef double[::1] v = out
        cdef Py_ssize_t i
        for i in range(n):
            v[i] = mean + std * self._standard_normal()
        return out

    def exponentials(self, Py_ssize_t n, double mean):
        if not mean > 0.0:
            raise ValueError("mean must be > 0")
        out = np.empty(n)
        cdef double[::1] v = out
        cdef Py_ssize_t i
        for i in range(n):
            v[i] = -mean * log(1.0 - self._uniform53())
        return out

"""Pure-Python backend for the deterministic random substrate.

Reference implementation of the classic 32-bit Mersenne Twister
(MT19937) plus the distribution transforms used throughout the
simulator.  The compiled backend (``_mtcore``, Cython) implements the
same algorithms statement for statement; for any seed the two backends
produce bit-identical draw sequences, which the test suite verifies.

Draw accounting (32-bit words consumed per call):

* ``next_u32``           : 1
* ``next_uniform53``     : 2
* ``sample_uniform``     : 2
* ``sample_normal``      : 4, then 0 (Box-Muller pair, second deviate cached)
* ``sample_lognormal``   : same pattern as ``sample_normal``
* ``sample_exponential`` : 2
* ``sample_poisson``     : rate < 30 uses Knuth multiplication, 2*(k+1)
  words where k is the returned count; rate >= 30 uses transformed
  rejection (PTRS), 4 words per rejection iteration
* ``sample_gamma``       : shape >= 1 uses Marsaglia-Tsang; each
  iteration consumes 4 words for the normal candidate plus 2 for the
  acceptance uniform when the cubed candidate is positive; shape < 1
  first draws gamma(shape+1) and then one boost uniform (2 words)

The cached Box-Muller deviate is part of the generator state: the next
``sample_normal``/``sample_lognormal`` call consumes it even when other
transforms run in between.  ``sample_gamma`` uses its own Box-Muller
pair internally and leaves the cache untouched.
"""

from __future__ import annotations

import math
from operator import index as _as_index

import numpy as np

_N = 624
_M = 397
_MATRIX_A = 0x9908B0DF
_UPPER = 0x80000000
_LOWER = 0x7FFFFFFF
_TAU = math.tau

# 53-bit mapping constants: (a >> 5) * 2**26 + (b >> 6), scaled by 2**-53.
_U53_HI = 67108864.0
_U53_SCALE = 1.0 / 9007199254740992.0


def _check_seed(seed):
    seed = _as_index(seed)
    if seed < 0 or seed > 0xFFFFFFFF:
        raise ValueError("seed must be a 32-bit unsigned integer")
    return seed


class Mt19937:
    """MT19937 generator state plus distribution transforms."""

    __slots__ = ("_mt", "_mti", "seed", "draw_count", "_cached_normal", "_has_cached")

    def __init__(self, seed):
        seed = _check_seed(seed)
        self.seed = seed
        mt = [0] * _N
        mt[0] = seed
        for i in range(1, _N):
            mt[i] = (1812433253 * (mt[i - 1] ^ (mt[i - 1] >> 30)) + i) & 0xFFFFFFFF
        self._mt = mt
        self._mti = _N
        self.draw_count = 0
        self._cached_normal = 0.0
        self._has_cached = False

    @property
    def state_words(self):
        return tuple(self._mt)

    @property
    def index(self):
        return self._mti

    @property
    def has_cached_normal(self):
        return self._has_cached

    def _twist(self):
        mt = self._mt
        for kk in range(_N - _M):
            y = (mt[kk] & _UPPER) | (mt[kk + 1] & _LOWER)
            mt[kk] = mt[kk + _M] ^ (y >> 1) ^ (_MATRIX_A if y & 1 else 0)
        for kk in range(_N - _M, _N - 1):
            y = (mt[kk] & _UPPER) | (mt[kk + 1] & _LOWER)
            mt[kk] = mt[kk + (_M - _N)] ^ (y >> 1) ^ (_MATRIX_A if y & 1 else 0)
        y = (mt[_N - 1] & _UPPER) | (mt[0] & _LOWER)
        mt[_N - 1] = mt[_M - 1] ^ (y >> 1) ^ (_MATRIX_A if y & 1 else 0)
        self._mti = 0

    def next_u32(self):
        if self._mti >= _N:
            self._twist()
        y = self._mt[self._mti]
        self._mti += 1
        self.draw_count += 1
        # Tempering.
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680
        y ^= (y << 15) & 0xEFC60000
        y ^= y >> 18
        return y

    def next_uniform53(self):
        a = self.next_u32() >> 5
        b = self.next_u32() >> 6
        return (a * _U53_HI + b) * _U53_SCALE

    def sample_uniform(self, low=0.0, high=1.0):
        """Uniform draw on the half-open interval [low, high)."""
        if not high >= low:
            raise ValueError("high must be >= low")
        return low + (high - low) * self.next_uniform53()

    def sample_normal(self, mean, std):
        if not std >= 0.0:
            raise ValueError("std must be >= 0")
        return mean + std * self._standard_normal()

    def _standard_normal(self):
        if self._has_cached:
            self._has_cached = False
            return self._cached_normal
        u1 = self.next_uniform53()
        u2 = self.next_uniform53()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        a = _TAU * u2
        self._cached_normal = r * math.sin(a)
        self._has_cached = True
        return r * math.cos(a)

    def sample_lognormal(self, mu_log, sigma_log):
        if not sigma_log >= 0.0:
            raise ValueError("sigma_log must be >= 0")
        return math.exp(mu_log + sigma_log * self._standard_normal())

    def sample_exponential(self, mean):
        if not mean > 0.0:
            raise ValueError("mean must be > 0")
        return -mean * math.log(1.0 - self.next_uniform53())

    def sample_poisson(self, rate):
        if not rate >= 0.0:
            raise ValueError("rate must be >= 0")
        if rate < 30.0:
            return self._poisson_knuth(rate)
        return self._poisson_ptrs(rate)

    def _poisson_knuth(self, lam):
        enlam = math.exp(-lam)
        k = 0
        p = 1.0
        while True:
            k += 1
            p *= self.next_uniform53()
            if p <= enlam:
                return k - 1

    def _poisson_ptrs(self, lam):
        slam = math.sqrt(lam)
        loglam = math.log(lam)
        b = 0.931 + 2.53 * slam
        a = -0.059 + 0.02483 * b
        invalpha = 1.1239 + 1.1328 / (b - 3.4)
        vr = 0.9277 - 3.6224 / (b - 2.0)
        while True:
            u = self.next_uniform53() - 0.5
            v = self.next_uniform53()
            us = 0.5 - abs(u)
            if us == 0.0 or v == 0.0:
                continue
            k = math.floor((2.0 * a / us + b) * u + lam + 0.43)
            if us >= 0.07 and v <= vr:
                return int(k)
            if k < 0:
                continue
            if us < 0.013 and v > us:
                continue
            if (math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
                    <= k * loglam - lam - math.lgamma(k + 1.0)):
                return int(k)

    def sample_gamma(self, shape, scale):
        if not shape > 0.0:
            raise ValueError("shape must be > 0")
        if not scale > 0.0:
            raise ValueError("scale must be > 0")
        if shape < 1.0:
            g = self.sample_gamma(shape + 1.0, scale)
            return g * math.pow(1.0 - self.next_uniform53(), 1.0 / shape)
        return self._gamma_mt(shape, scale)

    def _gamma_mt(self, shape, scale):
        # Marsaglia-Tsang squeeze method, own Box-Muller pair (cache untouched).
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            u1 = self.next_uniform53()
            u2 = self.next_uniform53()
            x = math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(_TAU * u2)
            t = 1.0 + c * x
            v = t * t * t
            if v <= 0.0:
                continue
            u = self.next_uniform53()
            xx = x * x
            if u < 1.0 - 0.0331 * xx * xx:
                return d * v * scale
            if u > 0.0 and math.log(u) < 0.5 * xx + d * (1.0 - v + math.log(v)):
                return d * v * scale

    # Batch helpers: each is sequence-equivalent to n scalar calls.

    def u32s(self, n):
        out = np.empty(n, dtype=np.uint32)
        for i in range(n):
            out[i] = self.next_u32()
        return out

    def uniforms(self, n):
        out = np.empty(n)
        for i in range(n):
            out[i] = self.next_uniform53()
        return out

    def normals(self, n, mean=0.0, std=1.0):
        if not std >= 0.0:
            raise ValueError("std must be >= 0")
        out = np.empty(n)
        for i in range(n):
            out[i] = mean + std * self._standard_normal()
        return out

    def exponentials(self, n, mean):
        if not mean > 0.0:
            raise ValueError("mean must be > 0")
        out = np.empty(n)
        for i in range(n):
            out[i] = -mean * math.log(1.0 - self.next_uniform53())
        return out

"""Statistical validation: two-sample K-S test, moment comparison, log10
delay-spread summaries, empirical CDF export.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SampleSet:
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim != 1:
            raise ValueError("sample values must form a 1-D array")
        if vals.size and not np.isfinite(vals).all():
            raise ValueError(f"sample set {self.label!r} contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def require_nonempty(self):
        if self.n == 0:
            raise ValueError(f"sample set {self.label!r} is empty")


def _as_sample_set(values, label: str) -> SampleSet:
    if isinstance(values, SampleSet):
        return values
    return SampleSet(values=np.asarray(values, dtype=np.float64), label=label)


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution, Q(lam) = 2 sum
    (-1)^(k-1) exp(-2 k^2 lam^2), clipped to [0, 1]."""
    if lam <= 0.0:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
        total += term
        if abs(term) < 1e-16:
            break
    return min(max(total, 0.0), 1.0)


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.

    D is the supremum distance between the two empirical CDFs over the
    pooled values; the p-value uses the asymptotic Kolmogorov law at the
    effective size n_a*n_b/(n_a+n_b).
    """
    sa = _as_sample_set(a, "a")
    sb = _as_sample_set(b, "b")
    sa.require_nonempty()
    sb.require_nonempty()
    xa = np.sort(sa.values)
    xb = np.sort(sb.values)
    pooled = np.concatenate([xa, xb])
    cdf_a = np.searchsorted(xa, pooled, side="right") / xa.size
    cdf_b = np.searchsorted(xb, pooled, side="right") / xb.size
    d = float(np.abs(cdf_a - cdf_b).max())
    en = xa.size * xb.size / (xa.size + xb.size)
    p = kolmogorov_sf(math.sqrt(en) * d)
    return d, p


@dataclass(frozen=True)
class MomentReport:
    passed: bool
    mean_ok: bool
    var_ok: bool
    mean_a: float
    mean_b: float
    var_a: float
    var_b: float

    def __bool__(self) -> bool:
        return self.passed


def moments_compare(a, b, rel_tol: float, zero_mean_abs_tol: float = 1e-9) -> MomentReport:
    """Compare means and variances of a against reference b.

    Both must agree within rel_tol relative to b's moments.  When the
    reference mean is smaller in magnitude than zero_mean_abs_tol the
    mean check switches to an absolute comparison at zero_mean_abs_tol.
    """
    sa = _as_sample_set(a, "a")
    sb = _as_sample_set(b, "b")
    sa.require_nonempty()
    sb.require_nonempty()
    mean_a = float(sa.values.mean())
    mean_b = float(sb.values.mean())
    var_a = float(sa.values.var(ddof=1)) if sa.n > 1 else 0.0
    var_b = float(sb.values.var(ddof=1)) if sb.n > 1 else 0.0

    if abs(mean_b) < zero_mean_abs_tol:
        mean_ok = abs(mean_a - mean_b) <= zero_mean_abs_tol
    else:
        mean_ok = abs(mean_a - mean_b) <= rel_tol * abs(mean_b)
    # a constant reference array rounds to a variance near eps^2, not 0
    var_floor = (16.0 * np.finfo(np.float64).eps * max(abs(mean_b), 1.0)) ** 2
    if var_b <= var_floor:
        var_ok = var_a <= var_floor
    else:
        var_ok = abs(var_a - var_b) <= rel_tol * abs(var_b)
    return MomentReport(
        passed=mean_ok and var_ok,
        mean_ok=mean_ok,
        var_ok=var_ok,
        mean_a=mean_a,
        mean_b=mean_b,
        var_a=var_a,
        var_b=var_b,
    )


@dataclass(frozen=True)
class DelaySpreadStats:
    mu_log10: float
    sigma_log10: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("delay-spread statistics need at least 2 samples")
        if self.sigma_log10 < 0.0:
            raise ValueError("sigma_log10 must be non-negative")


def exclude_nonpositive(samples) -> tuple[np.ndarray, int]:
    """Drop non-positive values (undetectable or single-tap pointings).

    Returns (kept values, number excluded)."""
    vals = np.asarray(samples, dtype=np.float64)
    kept = vals[vals > 0.0]
    return kept, int(vals.size - kept.size)


def log10_ds_stats(samples_ns) -> DelaySpreadStats:
    """Mean and sample std (n-1 denominator) of log10 of each value, in ns."""
    sa = _as_sample_set(samples_ns, "delay spreads")
    sa.require_nonempty()
    if sa.values.min() <= 0.0:
        raise ValueError(
            "delay-spread samples must be positive; exclude zero-DS pointings first"
        )
    logs = np.log10(sa.values)
    if logs.size < 2:
        raise ValueError("delay-spread statistics need at least 2 samples")
    return DelaySpreadStats(
        mu_log10=float(logs.mean()),
        sigma_log10=float(logs.std(ddof=1)),
        n=int(logs.size),
    )


def empirical_cdf(samples) -> list:
    """Sorted (value, probability) step points, probability i/n at the
    i-th order statistic."""
    sa = _as_sample_set(samples, "cdf")
    sa.require_nonempty()
    xs = np.sort(sa.values)
    n = xs.size
    probs = np.arange(1, n + 1) / n
    return list(zip(xs.tolist(), probs.tolist()))


def write_cdf_csv(samples, path) -> int:
    """Two-column ``value,probability`` export; returns the point count."""
    points = empirical_cdf(samples)
    with open(path, "w") as fh:
        fh.write("value,probability\n")
        for value, prob in points:
            fh.write(f"{value!r},{prob!r}\n")
    return len(points)

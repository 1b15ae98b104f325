"""Directional spatial filtering, power delay profiles, RMS delay spread.

A directional query points the TX and RX patterns (azimuth, zenith) and
weights every multipath component by the product of the two pattern
gains evaluated at the component's departure and arrival directions.
Powers combine incoherently: the PDP sums magnitude-squared amplitudes,
and the RMS delay spread is the power-weighted second central moment of
the tap delays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .antenna.pattern import AntennaPattern, OrientedPattern, apply_orientation
from .channel import ChannelRealization, MultipathComponent

# Taps closer than this ride the same delay bin (anchor = earliest tap).
MERGE_TOLERANCE_NS = 0.1

# Pointings weaker than the strongest pointing of the same realization by
# more than this are treated as undetectable and excluded from sweeps.
DEFAULT_POWER_THRESHOLD_DB = 40.0


def _oriented_for_pointing(pattern, azimuth_deg: float, zenith_deg: float) -> OrientedPattern:
    if not 0.0 <= zenith_deg <= 180.0:
        raise ValueError("pointing zenith must lie in [0, 180] degrees")
    return apply_orientation(pattern, azimuth_deg, 90.0 - zenith_deg)


@dataclass(frozen=True)
class DirectionalQuery:
    """TX/RX pointing plus the patterns to evaluate, one filter invocation."""

    tx_pointing: tuple  # (azimuth_deg, zenith_deg)
    rx_pointing: tuple
    tx_pattern: AntennaPattern
    rx_pattern: AntennaPattern

    def __post_init__(self):
        for name, (_, zen) in (("tx", self.tx_pointing), ("rx", self.rx_pointing)):
            if not 0.0 <= zen <= 180.0:
                raise ValueError(f"{name} pointing zenith must lie in [0, 180] degrees")


@dataclass(frozen=True)
class FilteredComponents:
    """Component set after directional weighting; delays and phases intact."""

    delays_ns: np.ndarray
    powers: np.ndarray
    phases_rad: np.ndarray

    @property
    def total_power(self) -> float:
        return float(self.powers.sum())

    @property
    def components(self) -> list:
        return list(zip(self.delays_ns.tolist(), self.powers.tolist()))


def directional_filter(
    realization: ChannelRealization, query: DirectionalQuery
) -> FilteredComponents:
    """Weight each component by TX gain at (AOD, ZOD) and RX gain at (AOA, ZOA).

    The patterns are oriented so their boresights align with the query
    pointings (pattern elevation = 90 - zenith); delays and phases pass
    through unchanged.
    """
    tx = _oriented_for_pointing(query.tx_pattern, *query.tx_pointing)
    rx = _oriented_for_pointing(query.rx_pattern, *query.rx_pointing)
    gt_db = tx.gain_at(90.0 - realization.zod_deg, realization.aod_deg)
    gr_db = rx.gain_at(90.0 - realization.zoa_deg, realization.aoa_deg)
    gain_linear = 10.0 ** ((np.asarray(gt_db) + np.asarray(gr_db)) / 10.0)
    return FilteredComponents(
        delays_ns=realization.delays_ns,
        powers=realization.powers * gain_linear,
        phases_rad=realization.phases_rad,
    )


@dataclass(frozen=True)
class PowerDelayProfile:
    delays_ns: np.ndarray
    powers: np.ndarray
    total_power: float

    def __post_init__(self):
        d, p = self.delays_ns, self.powers
        if d.shape != p.shape or d.ndim != 1:
            raise ValueError("PDP delays and powers must be matching 1-D arrays")
        if d.size > 1 and np.diff(d).min() < 0:
            raise ValueError("PDP taps must be sorted by delay")
        if p.size and p.min() < 0:
            raise ValueError("PDP powers must be non-negative")
        total = float(p.sum())
        if abs(self.total_power - total) > 1e-12 * max(total, 1.0):
            raise ValueError("total_power does not match the tap sum")

    @property
    def taps(self) -> list:
        return list(zip(self.delays_ns.tolist(), self.powers.tolist()))

    @property
    def n_taps(self) -> int:
        return int(self.delays_ns.size)


def merge_tap_groups(delays_ns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Group sorted delays into taps: a group spans while tap - anchor <= tol.

    Returns (group_index_per_tap, anchor_delay_per_group).  Grouping
    depends only on delays, so one realization shares its structure
    across every pointing.
    """
    n = delays_ns.size
    group_of = np.empty(n, dtype=np.int64)
    anchors = []
    current = -1
    anchor = -np.inf
    for i, d in enumerate(delays_ns):
        if d - anchor > MERGE_TOLERANCE_NS:
            current += 1
            anchor = d
            anchors.append(d)
        group_of[i] = current
    return group_of, np.array(anchors)


def power_delay_profile(source) -> PowerDelayProfile:
    """Build a PDP from components: tap (delay, amplitude^2), merged and sorted.

    Accepts a ChannelRealization, a FilteredComponents, or an iterable of
    MultipathComponent.  Taps whose delays coincide within 0.1 ns merge
    into one tap at the earliest delay with summed power.
    """
    if isinstance(source, (ChannelRealization, FilteredComponents)):
        delays = np.asarray(source.delays_ns, dtype=np.float64)
        powers = np.asarray(source.powers, dtype=np.float64)
    else:
        pairs = [
            (c.delay_ns, c.amplitude**2) if isinstance(c, MultipathComponent) else tuple(c)
            for c in source
        ]
        delays = np.array([d for d, _ in pairs], dtype=np.float64)
        powers = np.array([p for _, p in pairs], dtype=np.float64)
    if delays.size == 0:
        empty = np.empty(0)
        return PowerDelayProfile(delays_ns=empty, powers=empty.copy(), total_power=0.0)

    order = np.argsort(delays, kind="stable")
    delays, powers = delays[order], powers[order]
    group_of, anchors = merge_tap_groups(delays)
    merged = np.zeros(anchors.size)
    np.add.at(merged, group_of, powers)
    return PowerDelayProfile(
        delays_ns=anchors, powers=merged, total_power=float(merged.sum())
    )


def rms_delay_spread(pdp: PowerDelayProfile) -> float:
    """sqrt of the power-weighted variance of the tap delays, in ns."""
    if pdp.n_taps == 0 or not pdp.total_power > 0.0:
        raise ValueError("RMS delay spread needs a PDP with positive total power")
    p = pdp.powers / pdp.total_power
    mean = float((p * pdp.delays_ns).sum())
    second = float((p * pdp.delays_ns**2).sum())
    return math.sqrt(max(second - mean * mean, 0.0))


def omnidirectional_rms_ds(realization: ChannelRealization) -> float:
    return rms_delay_spread(power_delay_profile(realization))


def default_pointing_grid(hpbw_deg: float, include_elevation_rings: bool = True) -> list:
    """Sounder-style pointing set: HPBW-spaced azimuths at the horizon,
    plus rings one HPBW above and below when requested."""
    if not 0.0 < hpbw_deg <= 120.0:
        raise ValueError("hpbw_deg must lie in (0, 120]")
    azimuths = np.arange(0.0, 360.0, hpbw_deg)
    zeniths = [90.0]
    if include_elevation_rings:
        zeniths = [90.0 - hpbw_deg, 90.0, 90.0 + hpbw_deg]
    return [(float(az), float(zen)) for zen in zeniths for az in azimuths]


def pointing_pairs(tx_grid, rx_grid) -> list:
    return list(product(tx_grid, rx_grid))


@dataclass(frozen=True)
class SweepSample:
    tx_pointing: tuple
    rx_pointing: tuple
    rms_ds_ns: float
    total_power: float


def _tap_cut(powers: np.ndarray, dynamic_range_db: float) -> np.ndarray:
    floor = powers.max() * 10.0 ** (-dynamic_range_db / 10.0)
    return powers >= floor


def directional_ds_sweep(
    realization: ChannelRealization,
    tx_pattern,
    rx_pattern,
    pairs,
    *,
    power_threshold_db: float = DEFAULT_POWER_THRESHOLD_DB,
    tap_dynamic_range_db: float | None = None,
) -> list:
    """RMS delay spread per pointing pair, with undetectable pointings dropped.

    Pointings whose filtered total power sits more than power_threshold_db
    below the strongest pointing of this realization are excluded.  When
    tap_dynamic_range_db is set, merged taps weaker than the strongest tap
    of the same pointing by more than that margin are discarded before the
    delay spread is computed (sounder dynamic-range emulation); by default
    no tap cut is applied, which keeps isotropic sweeps exactly equal to
    the omnidirectional delay spread.

    The per-pair gain product factorizes over TX and RX pointings, so each
    unique pointing is evaluated once and pairs reuse the cached vectors.
    """
    pairs = [(tuple(tx), tuple(rx)) for tx, rx in pairs]
    if not pairs:
        raise ValueError("pointing grid must be non-empty")

    def gain_weights(pattern, pointings, el_deg, az_deg):
        table = {}
        for pt in pointings:
            if pt not in table:
                oriented = _oriented_for_pointing(pattern, *pt)
                g_db = np.asarray(oriented.gain_at(el_deg, az_deg), dtype=np.float64)
                table[pt] = 10.0 ** (g_db / 10.0)
        return table

    tx_table = gain_weights(
        tx_pattern, (tx for tx, _ in pairs), 90.0 - realization.zod_deg, realization.aod_deg
    )
    rx_table = gain_weights(
        rx_pattern, (rx for _, rx in pairs), 90.0 - realization.zoa_deg, realization.aoa_deg
    )

    tx_w = np.stack([tx_table[tx] for tx, _ in pairs])  # (n_pairs, C)
    rx_w = np.stack([rx_table[rx] for _, rx in pairs])
    weighted = tx_w * rx_w * realization.powers[None, :]
    totals = weighted.sum(axis=1)

    keep_floor = totals.max() * 10.0 ** (-power_threshold_db / 10.0)
    kept = np.flatnonzero((totals >= keep_floor) & (totals > 0.0))
    if kept.size == 0:
        return []

    # merge in delay-sorted component order, accumulating row-major so every
    # pair reproduces the omnidirectional merge bit for bit
    order = np.argsort(realization.delays_ns, kind="stable")
    group_of, anchors = merge_tap_groups(realization.delays_ns[order])
    w_sorted = weighted[kept][:, order]
    taps = np.zeros((kept.size, anchors.size))
    np.add.at(taps, (np.arange(kept.size)[:, None], group_of[None, :]), w_sorted)

    if tap_dynamic_range_db is not None:
        floor = taps.max(axis=1, keepdims=True) * 10.0 ** (-tap_dynamic_range_db / 10.0)
        taps = np.where(taps >= floor, taps, 0.0)

    tot = taps.sum(axis=1)
    frac = taps / tot[:, None]
    mean = (frac * anchors).sum(axis=1)
    second = (frac * anchors**2).sum(axis=1)
    ds = np.sqrt(np.maximum(second - mean * mean, 0.0))

    return [
        SweepSample(
            tx_pointing=pairs[pair_idx][0],
            rx_pointing=pairs[pair_idx][1],
            rms_ds_ns=float(ds[row]),
            total_power=float(totals[pair_idx]),
        )
        for row, pair_idx in enumerate(kept)
    ]


def _weighted_direction(az_deg, zen_deg, weights) -> tuple:
    """Power-weighted mean direction: circular in azimuth, linear in zenith."""
    w = np.asarray(weights, dtype=np.float64)
    rad = np.deg2rad(np.asarray(az_deg, dtype=np.float64))
    az = math.degrees(
        math.atan2(float((w * np.sin(rad)).sum()), float((w * np.cos(rad)).sum()))
    ) % 360.0
    if az == 360.0:  # float mod can round -eps up to the excluded endpoint
        az = 0.0
    zen = float((w * np.asarray(zen_deg, dtype=np.float64)).sum() / w.sum())
    return (az, min(max(zen, 0.0), 180.0))


def lobe_pointing_centers(realization: ChannelRealization) -> list:
    """Per-lobe boresight targets: (tx_pointing, rx_pointing) per spatial lobe.

    Each entry is the power-weighted center of the lobe's member
    components at the departure end and at the arrival end.  Entries
    follow the lobe index order; lobes without members are skipped.
    """
    centers = []
    n_lobes = int(realization.lobe_indices.max()) + 1 if realization.lobe_indices.size else 0
    for m in range(n_lobes):
        members = np.flatnonzero(realization.lobe_indices == m)
        if members.size == 0:
            continue
        w = realization.powers[members]
        tx = _weighted_direction(
            realization.aod_deg[members], realization.zod_deg[members], w
        )
        rx = _weighted_direction(
            realization.aoa_deg[members], realization.zoa_deg[members], w
        )
        centers.append((tx, rx))
    return centers


DEFAULT_TAP_DYNAMIC_RANGE_DB = 30.0


def lobe_directional_ds(
    realization: ChannelRealization,
    tx_pattern,
    rx_pattern,
    *,
    tap_dynamic_range_db: float = DEFAULT_TAP_DYNAMIC_RANGE_DB,
) -> np.ndarray:
    """Directional RMS delay spreads measured one spatial lobe at a time.

    Emulates a sounder that detects each spatial lobe and records one
    directional profile per lobe: both patterns point at the lobe's
    power-weighted centers, every component is weighted by the two-sided
    pattern gains, merged taps weaker than the strongest tap by more than
    tap_dynamic_range_db are discarded, and the RMS delay spread of the
    remainder is one sample.  Lobes whose filtered profile collapses to a
    single tap carry no delay-spread information and are dropped, so the
    result holds only strictly positive values.
    """
    if not tap_dynamic_range_db > 0.0:
        raise ValueError("tap_dynamic_range_db must be positive")
    samples = []
    for tx_pointing, rx_pointing in lobe_pointing_centers(realization):
        query = DirectionalQuery(
            tx_pointing=tx_pointing,
            rx_pointing=rx_pointing,
            tx_pattern=tx_pattern,
            rx_pattern=rx_pattern,
        )
        pdp = power_delay_profile(directional_filter(realization, query))
        keep = _tap_cut(pdp.powers, tap_dynamic_range_db)
        delays, powers = pdp.delays_ns[keep], pdp.powers[keep]
        frac = powers / powers.sum()
        mean = float((frac * delays).sum())
        second = float((frac * delays**2).sum())
        ds = math.sqrt(max(second - mean * mean, 0.0))
        if ds > 0.0:
            samples.append(ds)
    return np.asarray(samples, dtype=np.float64)

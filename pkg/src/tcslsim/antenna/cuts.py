"""Full-sphere reconstruction from a pair of orthogonal plane cuts.

Vendors commonly publish two principal-plane cuts instead of a full 3D
grid: a vertical cut (gain versus elevation at azimuth 0) and a
horizontal cut (gain versus azimuth at elevation 0).  The cross-cut
multiplication method fills the sphere as

    G(el, az) [dBi] = G_h(az) + G_v(el) - G_max

which keeps the linear gain non-negative and bounded by the peak.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .pattern import AntennaPattern, Polarization, make_grids

PEAK_SLACK_DB = 0.01


class CutPlane(enum.Enum):
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class PlaneCut:
    """One principal-plane cut, deduplicated and sorted by angle."""

    angles_deg: np.ndarray
    gains_dbi: np.ndarray
    plane: CutPlane

    def __post_init__(self):
        ang = np.ascontiguousarray(self.angles_deg, dtype=np.float64)
        gain = np.ascontiguousarray(self.gains_dbi, dtype=np.float64)
        if ang.size == 0:
            raise ValueError("plane cut is empty")
        if ang.shape != gain.shape or ang.ndim != 1:
            raise ValueError("cut angles and gains must be matching 1-D arrays")
        if not np.isfinite(ang).all():
            raise ValueError("cut contains non-finite angles")
        if not np.isfinite(gain).all():
            raise ValueError("cut contains non-finite gain values")
        if np.diff(ang).min(initial=np.inf) <= 0:
            raise ValueError("cut angles must be strictly increasing after ingestion")
        ang.setflags(write=False)
        gain.setflags(write=False)
        object.__setattr__(self, "angles_deg", ang)
        object.__setattr__(self, "gains_dbi", gain)

    @classmethod
    def from_samples(cls, samples, plane: CutPlane) -> "PlaneCut":
        """Build a cut from (angle_deg, gain_dbi) pairs.

        Angles are stably sorted; among duplicates the first occurrence
        in the input wins.
        """
        pairs = list(samples)
        if not pairs:
            raise ValueError("plane cut is empty")
        angles = np.array([float(a) for a, _ in pairs])
        gains = np.array([float(g) for _, g in pairs])
        order = np.argsort(angles, kind="stable")
        angles, gains = angles[order], gains[order]
        keep = np.ones(angles.size, dtype=bool)
        keep[1:] = angles[1:] != angles[:-1]
        return cls(angles_deg=angles[keep], gains_dbi=gains[keep], plane=plane)


def read_plane_cut_csv(path, plane: CutPlane) -> PlaneCut:
    """Read a two-column ``angle_deg,gain_dbi`` CSV.

    Blank lines and ``#`` comments are skipped; one optional non-numeric
    header row is tolerated.  Parse failures report the line number.
    """
    samples = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if row[0].lstrip().startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(
                    f"{path}, line {lineno}: expected 2 columns, found {len(row)}"
                )
            try:
                angle, gain = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1:
                    continue
                raise ValueError(
                    f"{path}, line {lineno}: could not parse {','.join(row)!r}"
                ) from None
            if not (math.isfinite(angle) and math.isfinite(gain)):
                raise ValueError(f"{path}, line {lineno}: non-finite value")
            samples.append((angle, gain))
    if not samples:
        raise ValueError(f"{path}: no cut samples found")
    return PlaneCut.from_samples(samples, plane)


def _check_below_peak(cut: PlaneCut, peak_gain_dbi: float, label: str):
    excess = cut.gains_dbi.max() - peak_gain_dbi
    if excess > PEAK_SLACK_DB:
        raise ValueError(
            f"{label} cut gain exceeds the declared peak by {excess:.4f} dB"
        )


def reconstruct_from_cuts(
    vcut: PlaneCut,
    hcut: PlaneCut,
    peak_gain_dbi: float,
    grid_step_deg: float = 1.0,
    *,
    polarization: Polarization = Polarization.VERTICAL,
    frequency_ghz: float | None = None,
    source: str = "cross-cut",
) -> AntennaPattern:
    """Fill a full-sphere pattern from a vertical and a horizontal cut.

    The vertical cut is resampled onto the elevation grid by linear
    interpolation in dB, holding the nearest endpoint outside its range;
    the horizontal cut is resampled onto the azimuth grid periodically
    (wrapping modulo 360).
    """
    if vcut.plane is not CutPlane.VERTICAL or hcut.plane is not CutPlane.HORIZONTAL:
        raise ValueError("expected one vertical and one horizontal cut, in that order")
    if not math.isfinite(peak_gain_dbi):
        raise ValueError("peak_gain_dbi must be finite")
    _check_below_peak(vcut, peak_gain_dbi, "vertical")
    _check_below_peak(hcut, peak_gain_dbi, "horizontal")

    el, az = make_grids(grid_step_deg)
    g_v = np.interp(el, vcut.angles_deg, vcut.gains_dbi)
    h_angles = np.mod(hcut.angles_deg, 360.0)
    order = np.argsort(h_angles, kind="stable")
    g_h = np.interp(az, h_angles[order], hcut.gains_dbi[order], period=360.0)

    abs_db = g_h[None, :] + g_v[:, None] - peak_gain_dbi
    return AntennaPattern.from_absolute_gain(
        el,
        az,
        abs_db,
        polarization=polarization,
        frequency_ghz=frequency_ghz,
        source=source,
    )

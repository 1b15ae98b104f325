"""Full-sphere antenna patterns: storage, interpolation, orientation, normalization.

A pattern is a gain matrix over a uniform (elevation, azimuth) grid that
covers the whole sphere: elevation spans [-90, +90] inclusive, azimuth
spans [0, 360) without the wrap duplicate.  Gains are stored normalized
(peak cell at exactly 0 dB) with the absolute peak carried separately,
so absolute gain in dBi at any cell is ``gain_db + peak_gain_dbi``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

_GRID_TOL = 1e-9


class Polarization(enum.Enum):
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"
    DUAL = "dual"

    @classmethod
    def parse(cls, text: str) -> "Polarization":
        key = text.strip().lower()
        aliases = {"v": cls.VERTICAL, "h": cls.HORIZONTAL}
        if key in aliases:
            return aliases[key]
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown polarization {text!r}")


def _as_readonly(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    out.setflags(write=False)
    return out


def _check_uniform_grid(grid: np.ndarray, name: str) -> float:
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError(f"{name} grid must be a 1-D array with at least 2 nodes")
    steps = np.diff(grid)
    if steps.min() <= 0:
        raise ValueError(f"{name} grid must be strictly increasing")
    step = (grid[-1] - grid[0]) / (grid.size - 1)
    if np.abs(steps - step).max() > _GRID_TOL:
        raise ValueError(f"{name} grid spacing is not uniform")
    return float(step)


@dataclass(frozen=True)
class AntennaPattern:
    """Immutable full-sphere gain pattern; safe to share across workers."""

    elevation_deg: np.ndarray
    azimuth_deg: np.ndarray
    gain_db: np.ndarray
    peak_gain_dbi: float
    polarization: Polarization = Polarization.VERTICAL
    frequency_ghz: float | None = None
    orientation: tuple[float, float] = (0.0, 0.0)
    source: str = "synthesized"

    def __post_init__(self):
        object.__setattr__(self, "elevation_deg", _as_readonly(self.elevation_deg))
        object.__setattr__(self, "azimuth_deg", _as_readonly(self.azimuth_deg))
        object.__setattr__(self, "gain_db", _as_readonly(self.gain_db))
        el, az, g = self.elevation_deg, self.azimuth_deg, self.gain_db

        el_step = _check_uniform_grid(el, "elevation")
        az_step = _check_uniform_grid(az, "azimuth")
        if abs(el[0] + 90.0) > _GRID_TOL or abs(el[-1] - 90.0) > _GRID_TOL:
            raise ValueError("elevation grid must span [-90, +90] inclusive")
        if abs(az[0]) > _GRID_TOL or abs(az[-1] - (360.0 - az_step)) > _GRID_TOL:
            raise ValueError("azimuth grid must span [0, 360) without the wrap duplicate")
        if g.shape != (el.size, az.size):
            raise ValueError(
                f"gain_db shape {g.shape} does not match grid ({el.size}, {az.size})"
            )
        if not np.isfinite(g).all():
            raise ValueError("gain_db contains non-finite values")
        if g.max() != 0.0:
            raise ValueError("gain_db must be normalized so its maximum is exactly 0 dB")
        if not math.isfinite(self.peak_gain_dbi):
            raise ValueError("peak_gain_dbi must be finite")
        if self.frequency_ghz is not None and not self.frequency_ghz > 0:
            raise ValueError("frequency_ghz must be positive when given")
        object.__setattr__(self, "_el_step", el_step)
        object.__setattr__(self, "_az_step", az_step)

    @classmethod
    def from_absolute_gain(
        cls,
        elevation_deg,
        azimuth_deg,
        absolute_gain_dbi,
        *,
        polarization: Polarization = Polarization.VERTICAL,
        frequency_ghz: float | None = None,
        orientation: tuple[float, float] = (0.0, 0.0),
        source: str = "synthesized",
    ) -> "AntennaPattern":
        """Split an absolute-dBi matrix into a normalized grid plus its peak."""
        abs_db = np.asarray(absolute_gain_dbi, dtype=np.float64)
        if not np.isfinite(abs_db).all():
            raise ValueError("absolute gain contains non-finite values")
        peak = float(abs_db.max())
        return cls(
            elevation_deg=elevation_deg,
            azimuth_deg=azimuth_deg,
            gain_db=abs_db - peak,
            peak_gain_dbi=peak,
            polarization=polarization,
            frequency_ghz=frequency_ghz,
            orientation=orientation,
            source=source,
        )

    @property
    def elevation_step_deg(self) -> float:
        return self._el_step

    @property
    def azimuth_step_deg(self) -> float:
        return self._az_step

    def absolute_gain_dbi(self) -> np.ndarray:
        return self.gain_db + self.peak_gain_dbi

    def linear_gain(self) -> np.ndarray:
        return 10.0 ** (self.absolute_gain_dbi() / 10.0)

    def gain_at(self, elevation_deg, azimuth_deg):
        """Bilinear absolute-gain lookup in dBi.

        Interpolation runs on the dB grid with azimuth wraparound between
        the last and first columns; elevation queries are clamped to the
        poles.  Queries landing exactly on a node return the stored value.
        """
        el = np.clip(np.asarray(elevation_deg, dtype=np.float64), -90.0, 90.0)
        az = np.mod(np.asarray(azimuth_deg, dtype=np.float64), 360.0)

        fe = (el + 90.0) / self._el_step
        ie = np.minimum(fe.astype(np.int64), self.elevation_deg.size - 2)
        we = fe - ie

        fa = az / self._az_step
        n_az = self.azimuth_deg.size
        ia = np.minimum(fa.astype(np.int64), n_az - 1)
        wa = fa - ia
        ia1 = (ia + 1) % n_az

        g = self.gain_db
        top = g[ie, ia] * (1.0 - wa) + g[ie, ia1] * wa
        bot = g[ie + 1, ia] * (1.0 - wa) + g[ie + 1, ia1] * wa
        out = top * (1.0 - we) + bot * we + self.peak_gain_dbi
        if np.ndim(elevation_deg) == 0 and np.ndim(azimuth_deg) == 0:
            return float(out)
        return out

    def with_metadata(self, **changes) -> "AntennaPattern":
        return replace(self, **changes)


def isotropic_pattern(
    grid_step_deg: float = 1.0,
    peak_gain_dbi: float = 0.0,
    polarization: Polarization = Polarization.VERTICAL,
) -> AntennaPattern:
    el, az = make_grids(grid_step_deg)
    return AntennaPattern(
        elevation_deg=el,
        azimuth_deg=az,
        gain_db=np.zeros((el.size, az.size)),
        peak_gain_dbi=peak_gain_dbi,
        polarization=polarization,
        source="isotropic",
    )


def make_grids(grid_step_deg: float) -> tuple[np.ndarray, np.ndarray]:
    """Uniform full-sphere grids; the step must divide both 180 and 360."""
    if not grid_step_deg > 0:
        raise ValueError("grid_step_deg must be positive")
    n_el = 180.0 / grid_step_deg
    n_az = 360.0 / grid_step_deg
    if abs(n_el - round(n_el)) > _GRID_TOL or abs(n_az - round(n_az)) > _GRID_TOL:
        raise ValueError("grid_step_deg must divide both 180 and 360 evenly")
    el = -90.0 + grid_step_deg * np.arange(round(n_el) + 1)
    az = grid_step_deg * np.arange(round(n_az))
    return el, az


def spherical_integral(pattern: AntennaPattern) -> float:
    """Quadrature of the absolute linear gain over the sphere.

    Cell-centered rule with the exact integral of sin(zenith) over each
    cell as the weight, so a constant pattern integrates to 4*pi up to
    rounding rather than up to midpoint-rule truncation error.
    """
    zen = np.radians(90.0 - pattern.elevation_deg)
    half = math.radians(pattern.elevation_step_deg) / 2.0
    lo = np.clip(zen - half, 0.0, math.pi)
    hi = np.clip(zen + half, 0.0, math.pi)
    w_el = np.abs(np.cos(lo) - np.cos(hi))
    d_az = math.radians(pattern.azimuth_step_deg)
    row_sums = pattern.linear_gain().sum(axis=1)
    return float((row_sums * w_el).sum() * d_az)


def normalize_to_4pi(pattern: AntennaPattern) -> AntennaPattern:
    """Rescale so the spherical quadrature of the linear gain equals 4*pi.

    A single multiplicative constant is applied, which in dB is a shift
    of peak_gain_dbi; the normalized shape matrix is untouched.
    """
    total = spherical_integral(pattern)
    if not total > 0.0:
        raise ValueError("cannot normalize a pattern with zero radiated power")
    shift_db = 10.0 * math.log10(4.0 * math.pi / total)
    return replace(pattern, peak_gain_dbi=pattern.peak_gain_dbi + shift_db)


def _rot_z(angle_deg: float) -> np.ndarray:
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_y(angle_deg: float) -> np.ndarray:
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def local_from_global_matrix(yaw_deg: float, pitch_deg: float) -> np.ndarray:
    """Rotation taking global direction vectors into the antenna frame.

    The mount is yawed about the vertical axis, then pitched about the
    yawed horizontal axis; positive pitch tilts the boresight upward.
    A global direction at (elevation=pitch, azimuth=yaw) therefore maps
    to the local boresight (elevation 0, azimuth 0).
    """
    return _rot_y(pitch_deg) @ _rot_z(-yaw_deg)


_IDENTITY = np.eye(3)


@dataclass(frozen=True)
class OrientedPattern:
    """Lookup context that evaluates a pattern in a rotated mount frame."""

    pattern: AntennaPattern
    matrix: np.ndarray = field(default_factory=lambda: _IDENTITY.copy())

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.float64)
        if m.shape != (3, 3):
            raise ValueError("orientation matrix must be 3x3")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def gain_at(self, elevation_deg, azimuth_deg):
        if np.array_equal(self.matrix, _IDENTITY):
            return self.pattern.gain_at(elevation_deg, azimuth_deg)
        el = np.radians(np.asarray(elevation_deg, dtype=np.float64))
        az = np.radians(np.asarray(azimuth_deg, dtype=np.float64))
        ce = np.cos(el)
        v = np.stack(
            [ce * np.cos(az), ce * np.sin(az), np.sin(el) * np.ones_like(az)], axis=0
        )
        u = self.matrix @ v.reshape(3, -1)
        local_el = np.degrees(np.arcsin(np.clip(u[2], -1.0, 1.0)))
        local_az = np.degrees(np.arctan2(u[1], u[0])) % 360.0
        out = self.pattern.gain_at(local_el, local_az)
        out = np.reshape(out, np.broadcast(el, az).shape)
        if np.ndim(elevation_deg) == 0 and np.ndim(azimuth_deg) == 0:
            return float(out)
        return out


def apply_orientation(target, yaw_deg: float, pitch_deg: float) -> OrientedPattern:
    """Orient a pattern, or compose a further rotation onto an oriented one."""
    m = local_from_global_matrix(yaw_deg, pitch_deg)
    if isinstance(target, OrientedPattern):
        return OrientedPattern(pattern=target.pattern, matrix=m @ target.matrix)
    return OrientedPattern(pattern=target, matrix=m)

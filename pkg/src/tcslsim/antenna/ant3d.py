"""Ant3D text format: field-component export and full-sphere pattern I/O.

The file is self-describing: ``#``-prefixed ``key: value`` header lines
followed by comma-separated data rows

    phi_rad,theta_rad,E_phi_re,E_phi_im,E_theta_re,E_theta_im

in row-major order, theta (zenith, ascending from 0 to pi) outer and
phi (ascending from 0) inner.  Power and gain are linked per cell by
|E_theta|^2 + |E_phi|^2 = absolute linear gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pattern import AntennaPattern, Polarization, make_grids

ANT3D_FORMAT_VERSION = 1

_COLUMNS = "phi_rad,theta_rad,E_phi_re,E_phi_im,E_theta_re,E_theta_im"
_REQUIRED_KEYS = (
    "ant3d_format_version",
    "frequency_ghz",
    "peak_gain_dbi",
    "polarization",
    "grid_step_deg",
)


class Ant3dFormatError(ValueError):
    """Raised for malformed Ant3D files; messages carry line numbers."""


@dataclass(frozen=True)
class FieldGrid:
    """Far-field components on the spherical basis, zenith rows ascending."""

    theta_rad: np.ndarray
    phi_rad: np.ndarray
    e_theta: np.ndarray
    e_phi: np.ndarray

    def __post_init__(self):
        for name in ("theta_rad", "phi_rad"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("e_theta", "e_phi"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.complex128)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        shape = (self.theta_rad.size, self.phi_rad.size)
        if self.e_theta.shape != shape or self.e_phi.shape != shape:
            raise ValueError("field component shape does not match the angle grids")

    def linear_gain(self) -> np.ndarray:
        return np.abs(self.e_theta) ** 2 + np.abs(self.e_phi) ** 2


def to_field_components(pattern: AntennaPattern) -> FieldGrid:
    """Map absolute gain onto field components per the declared polarization.

    Single polarizations put all power in the matching component with
    zero phase; dual splits power equally between the two.
    """
    amp = np.sqrt(pattern.linear_gain())[::-1, :]  # rows flipped: zenith ascending
    zeros = np.zeros_like(amp)
    if pattern.polarization is Polarization.VERTICAL:
        e_theta, e_phi = amp, zeros
    elif pattern.polarization is Polarization.HORIZONTAL:
        e_theta, e_phi = zeros, amp
    else:
        half = amp / math.sqrt(2.0)
        e_theta, e_phi = half, half.copy()
    return FieldGrid(
        theta_rad=np.radians(90.0 - pattern.elevation_deg[::-1]),
        phi_rad=np.radians(pattern.azimuth_deg),
        e_theta=e_theta,
        e_phi=e_phi,
    )


def _format_frequency(frequency_ghz) -> str:
    return "none" if frequency_ghz is None else repr(float(frequency_ghz))


def write_ant3d(pattern: AntennaPattern, path) -> None:
    """Serialize a pattern; requires equal grid steps on both axes."""
    if abs(pattern.elevation_step_deg - pattern.azimuth_step_deg) > 1e-9:
        raise ValueError("Ant3D files require equal elevation and azimuth grid steps")
    grid = to_field_components(pattern)
    yaw, pitch = pattern.orientation
    header = [
        f"# ant3d_format_version: {ANT3D_FORMAT_VERSION}",
        f"# frequency_ghz: {_format_frequency(pattern.frequency_ghz)}",
        f"# peak_gain_dbi: {float(pattern.peak_gain_dbi)!r}",
        f"# polarization: {pattern.polarization.value}",
        f"# grid_step_deg: {float(pattern.azimuth_step_deg)!r}",
        f"# orientation_yaw_deg: {float(yaw)!r}",
        f"# orientation_pitch_deg: {float(pitch)!r}",
        f"# source: {pattern.source}",
        f"# columns: {_COLUMNS}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(header) + "\n")
        for i, theta in enumerate(grid.theta_rad.tolist()):
            e_theta = grid.e_theta[i]
            e_phi = grid.e_phi[i]
            for j, phi in enumerate(grid.phi_rad.tolist()):
                et, ep = complex(e_theta[j]), complex(e_phi[j])
                fh.write(
                    f"{phi!r},{theta!r},{ep.real!r},{ep.imag!r},{et.real!r},{et.imag!r}\n"
                )


def _parse_header_value(key: str, raw: str, path, lineno: int):
    try:
        if key == "ant3d_format_version":
            return int(raw)
        if key == "frequency_ghz":
            return None if raw == "none" else float(raw)
        if key in ("peak_gain_dbi", "grid_step_deg", "orientation_yaw_deg", "orientation_pitch_deg"):
            return float(raw)
        if key == "polarization":
            return Polarization.parse(raw)
    except ValueError:
        raise Ant3dFormatError(
            f"{path}, line {lineno}: bad value {raw!r} for header key {key!r}"
        ) from None
    return raw


def read_ant3d(path) -> AntennaPattern:
    """Parse an Ant3D file back into a pattern.

    The grid is rebuilt from the declared step; every row's angle pair
    is checked against it, the sphere must be complete, and malformed
    content is reported with its line number.
    """
    header: dict = {}
    rows_seen = 0
    data_start = None
    with open(path) as fh:
        lines = fh.read().splitlines()

    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        if not text.startswith("#"):
            data_start = lineno
            break
        body = text.lstrip("#").strip()
        if ":" not in body:
            raise Ant3dFormatError(
                f"{path}, line {lineno}: malformed header line {line!r}"
            )
        key, raw = (part.strip() for part in body.split(":", 1))
        header[key] = _parse_header_value(key, raw, path, lineno)

    for key in _REQUIRED_KEYS:
        if key not in header:
            raise Ant3dFormatError(f"{path}: missing required header key {key!r}")
    if header["ant3d_format_version"] != ANT3D_FORMAT_VERSION:
        raise Ant3dFormatError(
            f"{path}: unsupported ant3d_format_version {header['ant3d_format_version']}"
        )
    if "columns" in header and header["columns"].replace(" ", "") != _COLUMNS:
        raise Ant3dFormatError(f"{path}: unexpected column declaration {header['columns']!r}")

    step = header["grid_step_deg"]
    try:
        el, az = make_grids(step)
    except ValueError as exc:
        raise Ant3dFormatError(f"{path}: bad grid_step_deg {step!r}: {exc}") from None
    n_el, n_az = el.size, az.size
    theta_expect = np.radians(90.0 - el[::-1])
    phi_expect = np.radians(az)

    linear = np.empty((n_el, n_az))
    if data_start is None:
        raise Ant3dFormatError(f"{path}: no data rows found (incomplete sphere)")

    for lineno, line in enumerate(lines[data_start - 1 :], start=data_start):
        text = line.strip()
        if not text:
            continue
        if rows_seen >= n_el * n_az:
            raise Ant3dFormatError(
                f"{path}, line {lineno}: trailing data beyond the declared grid"
            )
        fields = text.split(",")
        if len(fields) != 6:
            raise Ant3dFormatError(
                f"{path}, line {lineno}: expected 6 columns, found {len(fields)}"
            )
        try:
            phi, theta, ep_re, ep_im, et_re, et_im = (float(f) for f in fields)
        except ValueError:
            raise Ant3dFormatError(
                f"{path}, line {lineno}: could not parse data row"
            ) from None
        if not all(map(math.isfinite, (phi, theta, ep_re, ep_im, et_re, et_im))):
            raise Ant3dFormatError(f"{path}, line {lineno}: non-finite field value")
        i, j = divmod(rows_seen, n_az)
        if abs(theta - theta_expect[i]) > 1e-9 or abs(phi - phi_expect[j]) > 1e-9:
            raise Ant3dFormatError(
                f"{path}, line {lineno}: angle ({phi}, {theta}) does not lie on the "
                f"uniform {step} deg grid (non-uniform or misordered grid)"
            )
        cell = ep_re * ep_re + ep_im * ep_im + et_re * et_re + et_im * et_im
        if cell <= 0.0:
            raise Ant3dFormatError(
                f"{path}, line {lineno}: zero field power gives non-finite gain"
            )
        linear[i, j] = cell
        rows_seen += 1

    if rows_seen < n_el * n_az:
        raise Ant3dFormatError(
            f"{path}: incomplete sphere: expected {n_el * n_az} data rows for a "
            f"{step} deg grid, found {rows_seen}"
        )

    raw_db = 10.0 * np.log10(linear)[::-1, :]  # back to elevation-ascending rows
    peak = header["peak_gain_dbi"]
    if abs(raw_db.max() - peak) > 1e-6:
        raise Ant3dFormatError(
            f"{path}: peak_gain_dbi header {peak!r} disagrees with the field data "
            f"maximum {raw_db.max()!r}"
        )
    return AntennaPattern(
        elevation_deg=el,
        azimuth_deg=az,
        gain_db=raw_db - raw_db.max(),
        peak_gain_dbi=peak,
        polarization=header["polarization"],
        frequency_ghz=header["frequency_ghz"],
        orientation=(
            header.get("orientation_yaw_deg", 0.0),
            header.get("orientation_pitch_deg", 0.0),
        ),
        source=str(header.get("source", "ant3d")),
    )

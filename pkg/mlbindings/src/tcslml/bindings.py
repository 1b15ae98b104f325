"""Buffer-oriented access to the channel simulator for ML data pipelines.

The binding talks to the simulator exclusively through its public
surfaces: batches are produced by running the ``tcslsim`` command-line
tool and parsing its CSV export back into one contiguous float64 matrix,
and antenna grids are read from the documented Ant3D text format.  The
simulator package itself is never imported, so any installation that
provides the executable and the formats will do.

Every call owns its temporary directory, subprocess, and output buffers;
there is no shared mutable state, so calls may run concurrently from
multiple threads.
"""

from __future__ import annotations

import math
import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

#: Columns of the component matrix, matching the simulator's cir.csv export.
CIR_COLUMNS = (
    "realization",
    "cluster",
    "lobe",
    "delay_ns",
    "power_db",
    "phase_rad",
    "aod_deg",
    "zod_deg",
    "aoa_deg",
    "zoa_deg",
)

ANT3D_FORMAT_VERSION = 1
_ANT3D_COLUMNS = "phi_rad,theta_rad,E_phi_re,E_phi_im,E_theta_re,E_theta_im"
_ANT3D_REQUIRED = (
    "ant3d_format_version",
    "frequency_ghz",
    "peak_gain_dbi",
    "polarization",
    "grid_step_deg",
)

#: Environment variable naming the simulator executable, for installations
#: where it is not on PATH.
SIMULATOR_ENV = "TCSLML_SIMULATOR"


class ConfigError(ValueError):
    """A rejected configuration; the message comes from the simulator."""


class Ant3dFormatError(ValueError):
    """Raised for malformed Ant3D files; messages carry line numbers."""


class SimulatorError(RuntimeError):
    """The simulator executable is missing or failed unexpectedly."""


@dataclass(frozen=True)
class RealizationBatchView:
    """One generated batch as flat numeric buffers.

    ``component_matrix`` holds one multipath component per row with the
    columns of :data:`CIR_COLUMNS`; ``realization_offsets`` delimits the
    realizations as half-open row ranges, so realization ``k`` occupies
    rows ``offsets[k]:offsets[k + 1]``.  Both buffers are C-contiguous
    and read-only; framework tensors wrap them in one call.
    """

    component_matrix: np.ndarray
    realization_offsets: np.ndarray
    config: dict
    columns: tuple = field(default=CIR_COLUMNS)

    def __post_init__(self):
        matrix = np.ascontiguousarray(self.component_matrix, dtype=np.float64)
        offsets = np.ascontiguousarray(self.realization_offsets, dtype=np.int64)
        matrix.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "component_matrix", matrix)
        object.__setattr__(self, "realization_offsets", offsets)
        if matrix.ndim != 2 or matrix.shape[1] != len(self.columns):
            raise ValueError(
                f"component matrix must have {len(self.columns)} columns, "
                f"got shape {matrix.shape}"
            )
        if not np.isfinite(matrix).all():
            raise ValueError("component matrix contains non-finite values")
        if offsets.ndim != 1 or offsets.size < 1 or offsets[0] != 0:
            raise ValueError("realization offsets must start at 0")
        if offsets.size > 1 and np.diff(offsets).min() <= 0:
            raise ValueError("realization offsets must be strictly increasing")
        if offsets[-1] != matrix.shape[0]:
            raise ValueError("last realization offset must equal the row count")

    @property
    def n_realizations(self) -> int:
        return int(self.realization_offsets.size - 1)

    def realization(self, index: int) -> np.ndarray:
        """Rows of one realization as a zero-copy view."""
        lo = int(self.realization_offsets[index])
        hi = int(self.realization_offsets[index + 1])
        return self.component_matrix[lo:hi]


def _simulator_command() -> list:
    override = os.environ.get(SIMULATOR_ENV)
    if override:
        return [override]
    exe = shutil.which("tcslsim")
    if exe is None:
        raise SimulatorError(
            "tcslsim executable not found on PATH; install the simulator or "
            f"point {SIMULATOR_ENV} at it"
        )
    return [exe]


def _run_simulator(args: list) -> None:
    cmd = _simulator_command() + args
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode == 0:
        return
    message = proc.stderr.strip().splitlines()
    detail = message[-1] if message else f"exit code {proc.returncode}"
    if proc.returncode == 2:
        prefix = "config error: "
        raise ConfigError(
            detail[len(prefix):] if detail.startswith(prefix) else detail
        )
    raise SimulatorError(f"{cmd[0]} {args[0]} failed ({proc.returncode}): {detail}")


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_config(items: dict) -> str:
    return "".join(f"{key} = {_format_value(value)}\n" for key, value in items.items())


def _parse_config_echo(path: Path) -> dict:
    echo = {}
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        echo[key.strip()] = value.strip()
    return echo


def _parse_cir_csv(path: Path) -> np.ndarray:
    lines = path.read_text().splitlines()
    if not lines or lines[0] != ",".join(CIR_COLUMNS):
        raise SimulatorError(f"{path}: unexpected export header")
    rows = np.empty((len(lines) - 1, len(CIR_COLUMNS)))
    for i, line in enumerate(lines[1:]):
        fields = line.split(",")
        if len(fields) != len(CIR_COLUMNS):
            raise SimulatorError(f"{path}, row {i}: malformed export row")
        rows[i] = [float(f) for f in fields]
    return rows


def _offsets_from_ids(realization_ids: np.ndarray) -> np.ndarray:
    if realization_ids.size == 0:
        return np.zeros(1, dtype=np.int64)
    breaks = np.flatnonzero(np.diff(realization_ids) != 0) + 1
    return np.concatenate(
        ([0], breaks, [realization_ids.size])
    ).astype(np.int64)


def generate_batch(config, base_seed: int, n: int) -> RealizationBatchView:
    """Run one simulation batch and return its export as flat buffers.

    ``config`` maps simulator configuration keys to values (the same
    ``key = value`` schema the command line accepts); ``base_seed`` and
    ``n`` override the seed and realization count.  The returned matrix
    is numerically identical, column for column, to the CSV export the
    command line writes for the same configuration.
    """
    items = dict(config)
    items["seed"] = base_seed
    items["n_realizations"] = n
    with tempfile.TemporaryDirectory(prefix="tcslml-") as tmp:
        config_path = Path(tmp) / "config.txt"
        config_path.write_text(_render_config(items))
        out_dir = Path(tmp) / "out"
        _run_simulator(
            ["generate", "--config", str(config_path), "--out", str(out_dir)]
        )
        matrix = _parse_cir_csv(out_dir / "cir.csv")
        echo = _parse_config_echo(out_dir / "config.txt")
    offsets = _offsets_from_ids(matrix[:, 0] if matrix.size else np.empty(0))
    return RealizationBatchView(matrix, offsets, echo)


def _parse_ant3d_header_value(key: str, raw: str, path, lineno: int):
    try:
        if key == "ant3d_format_version":
            return int(raw)
        if key == "frequency_ghz":
            return None if raw == "none" else float(raw)
        if key in (
            "peak_gain_dbi",
            "grid_step_deg",
            "orientation_yaw_deg",
            "orientation_pitch_deg",
        ):
            return float(raw)
    except ValueError:
        raise Ant3dFormatError(
            f"{path}, line {lineno}: bad value {raw!r} for header key {key!r}"
        ) from None
    return raw


def _ant3d_grids(step: float) -> tuple:
    if not 0.0 < step <= 90.0 or (180.0 / step) != round(180.0 / step):
        raise ValueError(f"grid step {step} does not divide the sphere evenly")
    n_el = int(round(180.0 / step)) + 1
    n_az = int(round(360.0 / step))
    el = -90.0 + step * np.arange(n_el)
    az = step * np.arange(n_az)
    return el, az


def load_pattern(path) -> tuple:
    """Read an Ant3D file into a gain grid plus its metadata.

    Returns ``(grid, metadata)`` where ``grid`` is a read-only
    C-contiguous float64 matrix of absolute gain in dBi over ascending
    elevation rows and ascending azimuth columns, and ``metadata`` maps
    the header keys plus the reconstructed ``elevation_deg`` and
    ``azimuth_deg`` axes.
    """
    header: dict = {}
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
        header[key] = _parse_ant3d_header_value(key, raw, path, lineno)

    for key in _ANT3D_REQUIRED:
        if key not in header:
            raise Ant3dFormatError(f"{path}: missing required header key {key!r}")
    if header["ant3d_format_version"] != ANT3D_FORMAT_VERSION:
        raise Ant3dFormatError(
            f"{path}: unsupported ant3d_format_version "
            f"{header['ant3d_format_version']}"
        )
    if "columns" in header and header["columns"].replace(" ", "") != _ANT3D_COLUMNS:
        raise Ant3dFormatError(
            f"{path}: unexpected column declaration {header['columns']!r}"
        )

    step = header["grid_step_deg"]
    try:
        el, az = _ant3d_grids(step)
    except ValueError as exc:
        raise Ant3dFormatError(f"{path}: bad grid_step_deg {step!r}: {exc}") from None
    n_el, n_az = el.size, az.size
    theta_expect = np.radians(90.0 - el[::-1])
    phi_expect = np.radians(az)

    linear = np.empty((n_el, n_az))
    if data_start is None:
        raise Ant3dFormatError(f"{path}: no data rows found (incomplete sphere)")

    rows_seen = 0
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
    grid = np.ascontiguousarray((raw_db - raw_db.max()) + peak)
    grid.setflags(write=False)
    metadata = dict(header)
    metadata["elevation_deg"] = el
    metadata["azimuth_deg"] = az
    return grid, metadata

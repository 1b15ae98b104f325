"""Batch engine: config parsing, parallel generation, dataset export.

Realization i always runs on its own generator seeded with
derive_seed(base_seed, i), so output depends only on the config and the
antenna inputs, never on the worker count or scheduling order.
"""

from __future__ import annotations

import hashlib
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .antenna import (
    ThreeGppParams,
    horn_pattern,
    isotropic_pattern,
    read_ant3d,
    synthesize_3gpp,
)
from .channel import SimulationConfig, generate_realization
from .directional import power_delay_profile, rms_delay_spread
from .rng import Mt19937
from .seeding import derive_seed

EXPORT_FORMATS = ("cir_csv", "pdp_csv", "ds_summary", "cdf_points")

CIR_HEADER = "realization,cluster,lobe,delay_ns,power_db,phase_rad,aod_deg,zod_deg,aoa_deg,zoa_deg"
PDP_HEADER = "realization,tap,delay_ns,power_db"
SUMMARY_HEADER = "realization,n_clusters,n_paths,path_loss_db,omni_rms_ds_ns"
CDF_HEADER = "value,probability"

EXPORT_FILENAMES = {
    "cir_csv": "cir.csv",
    "pdp_csv": "pdp.csv",
    "ds_summary": "summary.csv",
    "cdf_points": "ds_cdf.csv",
}

_HORN_RE = re.compile(r"^horn-([0-9eE+.-]+)dBi-([0-9eE+.-]+)deg$")


class ConfigError(ValueError):
    """Configuration file problem, with file and line context where known."""


@dataclass(frozen=True)
class BatchJob:
    """Everything run_batch needs beyond the channel config itself."""

    config: SimulationConfig
    tx_antenna: str = "isotropic"
    rx_antenna: str = "isotropic"
    output_dir: str = "tcsl-out"
    worker_count: int = 1
    export_formats: tuple = EXPORT_FORMATS
    pointing_hpbw_deg: float = 15.0
    power_threshold_db: float = 40.0
    tap_dynamic_range_db: float | None = None
    ks_alpha: float = 0.01

    def __post_init__(self):
        if self.worker_count < 1:
            raise ConfigError("worker_count must be at least 1")
        bad = [f for f in self.export_formats if f not in EXPORT_FORMATS]
        if bad:
            raise ConfigError(
                f"unknown export format {bad[0]!r}; choose from {', '.join(EXPORT_FORMATS)}"
            )
        if self.pointing_hpbw_deg <= 0.0:
            raise ConfigError("pointing_hpbw_deg must be positive")
        if self.power_threshold_db <= 0.0:
            raise ConfigError("power_threshold_db must be positive")
        if self.tap_dynamic_range_db is not None and self.tap_dynamic_range_db <= 0.0:
            raise ConfigError("tap_dynamic_range_db must be positive when set")
        if not 0.0 < self.ks_alpha < 1.0:
            raise ConfigError("ks_alpha must lie in (0, 1)")

    @property
    def antenna_refs(self) -> tuple:
        return (self.tx_antenna, self.rx_antenna)


def resolve_antenna(ref: str):
    """Builtin name or .ant3d path -> AntennaPattern.

    Builtins: ``isotropic``, ``3gpp-element`` (default element parameters),
    and ``horn-<gain>dBi-<hpbw>deg``.
    """
    if ref == "isotropic":
        return isotropic_pattern()
    if ref in ("3gpp", "3gpp-element"):
        return synthesize_3gpp(ThreeGppParams())
    m = _HORN_RE.match(ref)
    if m:
        return horn_pattern(float(m.group(1)), float(m.group(2)))
    path = Path(ref)
    if not path.exists():
        raise FileNotFoundError(
            f"antenna reference {ref!r} is neither a builtin name nor an existing file"
        )
    return read_ant3d(path)


# config-file schema: key -> (parser, "sim" | "job")


def _float(text: str) -> float:
    return float(text)


def _optional_float(text: str):
    return None if text.lower() == "none" else float(text)


def _int(text: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ValueError(f"{text!r} is not an integer")
    return int(text)


def _str(text: str) -> str:
    return text


def _formats(text: str) -> tuple:
    items = tuple(part.strip() for part in text.split(",") if part.strip())
    if not items:
        raise ValueError("expected a comma-separated list of export formats")
    return items


CONFIG_SCHEMA = {
    "frequency_ghz": (_float, "sim"),
    "condition": (_str, "sim"),
    "scenario": (_str, "sim"),
    "tr_distance_m": (_float, "sim"),
    "n_clusters_max": (_int, "sim"),
    "n_clusters_min": (_int, "sim"),
    "mu_s_ns": (_optional_float, "sim"),
    "path_loss_exponent": (_optional_float, "sim"),
    "shadow_sigma_db": (_optional_float, "sim"),
    "seed": (_int, "sim"),
    "n_realizations": (_int, "sim"),
    "subpaths_per_cluster_max": (_int, "sim"),
    "subpath_delay_mean_ns": (_optional_float, "sim"),
    "delay_scale_sigma_log10": (_float, "sim"),
    "cluster_decay_ns": (_float, "sim"),
    "subpath_decay_ns": (_float, "sim"),
    "cluster_shadow_sigma_db": (_float, "sim"),
    "lobe_zenith_mean_deg": (_float, "sim"),
    "lobe_zenith_sigma_deg": (_float, "sim"),
    "subpath_offset_sigma_deg": (_float, "sim"),
    "tx_antenna": (_str, "job"),
    "rx_antenna": (_str, "job"),
    "output_dir": (_str, "job"),
    "worker_count": (_int, "job"),
    "export_formats": (_formats, "job"),
    "pointing_hpbw_deg": (_float, "job"),
    "power_threshold_db": (_float, "job"),
    "tap_dynamic_range_db": (_optional_float, "job"),
    "ks_alpha": (_float, "job"),
}


def parse_config(path) -> tuple:
    """Parse ``key = value`` lines into (SimulationConfig, BatchJob).

    ``#`` starts a comment; unknown keys, bad values, and duplicate keys
    are reported with their line number.  Keys that stay unset fall back
    to the frequency/condition presets.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    sim_kwargs: dict = {}
    job_kwargs: dict = {}
    seen: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}, line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_SCHEMA:
            raise ConfigError(f"{path}, line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(
                f"{path}, line {lineno}: duplicate key {key!r} (first set on line {seen[key]})"
            )
        seen[key] = lineno
        parser, target = CONFIG_SCHEMA[key]
        try:
            parsed = parser(value)
        except ValueError:
            raise ConfigError(
                f"{path}, line {lineno}: could not parse value {value!r} for key {key!r}"
            ) from None
        (sim_kwargs if target == "sim" else job_kwargs)[key] = parsed

    if "frequency_ghz" not in sim_kwargs:
        raise ConfigError(f"{path}: missing required key 'frequency_ghz'")
    try:
        cfg = SimulationConfig(**sim_kwargs)
        job = BatchJob(config=cfg, **job_kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return cfg, job


def effective_config_text(job: BatchJob) -> str:
    """Emit the fully resolved config; re-parsing reproduces the channel
    config exactly.  Execution details (output_dir, worker_count) are
    omitted so the echo is identical for any worker count."""
    cfg = job.config
    lines = []
    for key, value in cfg.as_dict().items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    lines.append(f"tx_antenna = {job.tx_antenna}")
    lines.append(f"rx_antenna = {job.rx_antenna}")
    lines.append(f"export_formats = {','.join(job.export_formats)}")
    lines.append(f"pointing_hpbw_deg = {job.pointing_hpbw_deg!r}")
    lines.append(f"power_threshold_db = {job.power_threshold_db!r}")
    tdr = "none" if job.tap_dynamic_range_db is None else repr(job.tap_dynamic_range_db)
    lines.append(f"tap_dynamic_range_db = {tdr}")
    lines.append(f"ks_alpha = {job.ks_alpha!r}")
    return "\n".join(lines) + "\n"


def _realization_payload(args) -> tuple:
    """One realization -> CSV row blocks.  Top level so workers can import it."""
    cfg, index = args
    seed = derive_seed(cfg.seed, index)
    real = generate_realization(cfg, Mt19937(seed))

    cir_rows = []
    power_db = 10.0 * np.log10(real.powers)
    for i in range(real.n_components):
        cir_rows.append(
            f"{index},{int(real.cluster_indices[i])},{int(real.lobe_indices[i])},"
            f"{float(real.delays_ns[i])!r},{float(power_db[i])!r},"
            f"{float(real.phases_rad[i])!r},{float(real.aod_deg[i])!r},"
            f"{float(real.zod_deg[i])!r},{float(real.aoa_deg[i])!r},"
            f"{float(real.zoa_deg[i])!r}"
        )

    pdp = power_delay_profile(real)
    pdp_rows = [
        f"{index},{t},{float(pdp.delays_ns[t])!r},{float(10.0 * np.log10(pdp.powers[t]))!r}"
        for t in range(pdp.n_taps)
    ]
    ds = rms_delay_spread(pdp)
    summary_row = (
        f"{index},{real.n_time_clusters},{real.n_components},"
        f"{float(real.path_loss_db)!r},{float(ds)!r}"
    )
    return index, "\n".join(cir_rows), "\n".join(pdp_rows), summary_row, float(ds)


def _generate_payloads(cfg: SimulationConfig, worker_count: int) -> list:
    n = cfg.n_realizations
    tasks = [(cfg, i) for i in range(n)]
    if worker_count == 1 or n <= 1:
        results = [_realization_payload(t) for t in tasks]
    else:
        chunk = max(1, n // (worker_count * 4))
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            results = list(pool.map(_realization_payload, tasks, chunksize=chunk))
    results.sort(key=lambda r: r[0])
    return results


def _sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def run_batch(job: BatchJob) -> dict:
    """Generate, export, and write manifest.json; returns the manifest.

    All validation (antenna refs, output dir, config) happens before the
    first realization; all file content is assembled in memory before the
    first byte is written, so a failure never leaves partial outputs.
    """
    for ref in job.antenna_refs:
        resolve_antenna(ref)
    out_dir = Path(job.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not out_dir.is_dir():
        raise OSError(f"output directory {out_dir} is not writable")

    cfg = job.config
    results = _generate_payloads(cfg, job.worker_count)

    ds_values = [r[4] for r in results]
    contents: dict = {}
    rows: dict = {}
    if "cir_csv" in job.export_formats:
        blocks = [r[1] for r in results if r[1]]
        contents["cir.csv"] = "\n".join([CIR_HEADER] + blocks) + "\n"
        rows["cir.csv"] = sum(block.count("\n") + 1 for block in blocks)
    if "pdp_csv" in job.export_formats:
        blocks = [r[2] for r in results if r[2]]
        contents["pdp.csv"] = "\n".join([PDP_HEADER] + blocks) + "\n"
        rows["pdp.csv"] = sum(block.count("\n") + 1 for block in blocks)
    if "ds_summary" in job.export_formats:
        blocks = [r[3] for r in results]
        contents["summary.csv"] = "\n".join([SUMMARY_HEADER] + blocks) + "\n"
        rows["summary.csv"] = len(blocks)
    if "cdf_points" in job.export_formats:
        lines = [CDF_HEADER]
        if ds_values:
            xs = np.sort(np.asarray(ds_values))
            n = xs.size
            lines += [f"{float(x)!r},{float(k / n)!r}" for k, x in enumerate(xs, start=1)]
        contents["ds_cdf.csv"] = "\n".join(lines) + "\n"
        rows["ds_cdf.csv"] = len(lines) - 1

    contents["config.txt"] = effective_config_text(job)
    rows["config.txt"] = contents["config.txt"].count("\n")

    n = cfg.n_realizations
    manifest = {
        "artifact": "tcslsim",
        "version": __version__,
        "base_seed": cfg.seed,
        "n_realizations": n,
        "realization_range": [0, n - 1] if n else [],
        "files": {
            name: {"sha256": _sha256_hex(text), "rows": rows[name]}
            for name, text in sorted(contents.items())
        },
        "omni_rms_ds_ns": {
            "mean": float(np.mean(ds_values)) if ds_values else None,
            "min": float(np.min(ds_values)) if ds_values else None,
            "max": float(np.max(ds_values)) if ds_values else None,
        },
    }

    for name, text in contents.items():
        (out_dir / name).write_text(text)
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def verify_manifest(out_dir) -> bool:
    """Re-hash every listed file; True when all checksums match."""
    out_dir = Path(out_dir)
    with open(out_dir / "manifest.json") as fh:
        manifest = json.load(fh)
    for name, entry in manifest["files"].items():
        if _sha256_hex((out_dir / name).read_text()) != entry["sha256"]:
            return False
    return True


def job_with_overrides(job: BatchJob, *, seed=None, out=None, workers=None) -> BatchJob:
    """CLI flag overrides applied on top of a parsed config."""
    cfg = job.config
    if seed is not None:
        cfg = cfg.replace(seed=seed)
    changes: dict = {"config": cfg}
    if out is not None:
        changes["output_dir"] = str(out)
    if workers is not None:
        changes["worker_count"] = workers
    return replace(job, **changes)

"""Command-line front end.

Exit codes: 0 success, 2 configuration problem, 3 input/output problem,
4 statistical rejection (validate verbs), 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import ANT3D_FORMAT_VERSION, CONFIG_FORMAT_VERSION, __version__
from .antenna import (
    Ant3dFormatError,
    CutPlane,
    Polarization,
    ThreeGppParams,
    read_plane_cut_csv,
    reconstruct_from_cuts,
    synthesize_3gpp,
    write_ant3d,
)
from .batch import ConfigError, job_with_overrides, parse_config, resolve_antenna, run_batch
from .channel import generate_realization
from .directional import (
    default_pointing_grid,
    directional_ds_sweep,
    omnidirectional_rms_ds,
    pointing_pairs,
)
from .rng import Mt19937
from .seeding import derive_seed
from .stats import exclude_nonpositive, ks_two_sample, log10_ds_stats, write_cdf_csv

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_STAT = 4


def _version_string() -> str:
    return (
        f"tcslsim {__version__} "
        f"(ant3d format {ANT3D_FORMAT_VERSION}, config format {CONFIG_FORMAT_VERSION})"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcslsim",
        description="Statistical spatial channel simulator: generation, antennas, validation.",
    )
    parser.add_argument("--version", action="version", version=_version_string())
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="key = value config file")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--out", default=None, help="override the output directory")

    p_gen = sub.add_parser("generate", parents=[common], help="run a batch and export datasets")
    p_gen.add_argument("--workers", type=int, default=None, help="override worker_count")

    p_stats = sub.add_parser(
        "stats", parents=[common], help="delay-spread statistics for a config"
    )
    p_stats.add_argument(
        "--directional",
        action="store_true",
        help="force the directional sweep even with isotropic antennas",
    )

    p_ant = sub.add_parser("antenna", help="antenna pattern tools")
    ant_sub = p_ant.add_subparsers(dest="antenna_command", required=True)

    p_cuts = ant_sub.add_parser(
        "import-cuts", help="reconstruct a 3-D pattern from two principal-plane cuts"
    )
    p_cuts.add_argument("--vertical", required=True, help="vertical plane cut CSV")
    p_cuts.add_argument("--horizontal", required=True, help="horizontal plane cut CSV")
    p_cuts.add_argument("--peak-gain", type=float, required=True, help="peak gain in dBi")
    p_cuts.add_argument("--step", type=float, default=1.0, help="grid step in degrees")
    p_cuts.add_argument("--frequency", type=float, default=None, help="frequency in GHz")
    p_cuts.add_argument(
        "--polarization", default="vertical", help="vertical, horizontal, or dual"
    )
    p_cuts.add_argument("--out", required=True, help="output .ant3d path")

    p_synth = ant_sub.add_parser("synth-3gpp", help="synthesize the parametric element pattern")
    p_synth.add_argument("--peak-gain", type=float, default=8.0, help="element peak gain in dBi")
    p_synth.add_argument("--theta-3db", type=float, default=65.0, help="vertical 3 dB width")
    p_synth.add_argument("--phi-3db", type=float, default=65.0, help="horizontal 3 dB width")
    p_synth.add_argument("--sla-v", type=float, default=30.0, help="vertical sidelobe limit, dB")
    p_synth.add_argument("--a-max", type=float, default=30.0, help="front-to-back limit, dB")
    p_synth.add_argument("--step", type=float, default=1.0, help="grid step in degrees")
    p_synth.add_argument("--frequency", type=float, default=None, help="frequency in GHz")
    p_synth.add_argument("--out", required=True, help="output .ant3d path")

    p_val = sub.add_parser("validate", help="statistical self checks")
    val_sub = p_val.add_subparsers(dest="validate_command", required=True)
    p_ks = val_sub.add_parser(
        "ks", parents=[common], help="two-sample K-S checks against reference draws"
    )
    p_ks.add_argument("--alpha", type=float, default=None, help="override ks_alpha")

    return parser


def _load_job(args):
    cfg, job = parse_config(args.config)
    job = job_with_overrides(
        job, seed=args.seed, out=args.out, workers=getattr(args, "workers", None)
    )
    return job.config, job


def cmd_generate(args) -> int:
    cfg, job = _load_job(args)
    manifest = run_batch(job)
    out_dir = Path(job.output_dir)
    print(f"wrote {len(manifest['files'])} files + manifest.json to {out_dir}")
    for name in sorted(manifest["files"]):
        print(f"  {name}: {manifest['files'][name]['rows']} rows")
    return EXIT_OK


def _realizations(cfg):
    for i in range(cfg.n_realizations):
        yield generate_realization(cfg, Mt19937(derive_seed(cfg.seed, i)))


def cmd_stats(args) -> int:
    cfg, job = _load_job(args)
    if cfg.n_realizations < 2:
        raise ConfigError("stats needs n_realizations >= 2")
    tx = resolve_antenna(job.tx_antenna)
    rx = resolve_antenna(job.rx_antenna)
    directional = args.directional or job.antenna_refs != ("isotropic", "isotropic")
    grid = default_pointing_grid(job.pointing_hpbw_deg)
    pairs = pointing_pairs(grid, grid)

    omni_ds = []
    dir_ds = []
    for real in _realizations(cfg):
        omni_ds.append(omnidirectional_rms_ds(real))
        if directional:
            samples = directional_ds_sweep(
                real,
                tx,
                rx,
                pairs,
                power_threshold_db=job.power_threshold_db,
                tap_dynamic_range_db=job.tap_dynamic_range_db,
            )
            dir_ds.extend(s.rms_ds_ns for s in samples)

    report = {}
    kept, dropped = exclude_nonpositive(np.asarray(omni_ds))
    stats = log10_ds_stats(kept)
    report["omni"] = {
        "n": stats.n,
        "excluded": dropped,
        "mu_log10_ns": stats.mu_log10,
        "sigma_log10_ns": stats.sigma_log10,
    }
    print(
        f"omni: n={stats.n} excluded={dropped} "
        f"mu_log10={stats.mu_log10:.4f} sigma_log10={stats.sigma_log10:.4f}"
    )
    if directional:
        kept_d, dropped_d = exclude_nonpositive(np.asarray(dir_ds))
        stats_d = log10_ds_stats(kept_d)
        report["directional"] = {
            "n": stats_d.n,
            "excluded": dropped_d,
            "mu_log10_ns": stats_d.mu_log10,
            "sigma_log10_ns": stats_d.sigma_log10,
        }
        print(
            f"directional: n={stats_d.n} excluded={dropped_d} "
            f"mu_log10={stats_d.mu_log10:.4f} sigma_log10={stats_d.sigma_log10:.4f}"
        )

    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_cdf_csv(kept, out_dir / "omni_ds_cdf.csv")
        if directional and len(dir_ds):
            kept_d, _ = exclude_nonpositive(np.asarray(dir_ds))
            write_cdf_csv(kept_d, out_dir / "directional_ds_cdf.csv")
        with open(out_dir / "ds_stats.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote CDF and stats files to {out_dir}")
    return EXIT_OK


def cmd_import_cuts(args) -> int:
    vcut = read_plane_cut_csv(args.vertical, CutPlane.VERTICAL)
    hcut = read_plane_cut_csv(args.horizontal, CutPlane.HORIZONTAL)
    pattern = reconstruct_from_cuts(
        vcut, hcut, peak_gain_dbi=args.peak_gain, grid_step_deg=args.step
    )
    pattern = pattern.with_metadata(
        frequency_ghz=args.frequency, polarization=Polarization.parse(args.polarization)
    )
    write_ant3d(pattern, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_synth_3gpp(args) -> int:
    params = ThreeGppParams(
        theta_3db_deg=args.theta_3db,
        phi_3db_deg=args.phi_3db,
        sla_v_db=args.sla_v,
        a_max_db=args.a_max,
        element_peak_gain_dbi=args.peak_gain,
    )
    pattern = synthesize_3gpp(params, args.step, frequency_ghz=args.frequency)
    write_ant3d(pattern, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_validate_ks(args) -> int:
    cfg, job = _load_job(args)
    alpha = args.alpha if args.alpha is not None else job.ks_alpha
    if not 0.0 < alpha < 1.0:
        raise ConfigError("alpha must lie in (0, 1)")
    if cfg.n_realizations < 1:
        raise ConfigError("validate ks needs n_realizations >= 1")

    gaps = []
    phases = []
    for real in _realizations(cfg):
        if real.n_time_clusters > 1:
            gaps.extend(np.diff(real.cluster_delays_ns).tolist())
        phases.extend(real.phases_rad.tolist())

    oracle = np.random.default_rng(derive_seed(cfg.seed, 2**20))
    checks = []
    if len(gaps) >= 10:
        ref = oracle.exponential(cfg.mu_s_ns, size=len(gaps))
        d, p = ks_two_sample(np.asarray(gaps), ref)
        checks.append(("inter-cluster gaps vs exponential", d, p))
    ref = oracle.uniform(0.0, 2.0 * np.pi, size=len(phases))
    d, p = ks_two_sample(np.asarray(phases), ref)
    checks.append(("phases vs uniform", d, p))

    failed = False
    report = {"alpha": alpha, "checks": []}
    for name, d, p in checks:
        verdict = "PASS" if p >= alpha else "FAIL"
        failed = failed or p < alpha
        print(f"{name}: D={d:.5f} p={p:.5f} {verdict}")
        report["checks"].append({"name": name, "d": d, "p": p, "verdict": verdict})

    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "ks_report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_STAT if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "stats":
            return cmd_stats(args)
        if args.command == "antenna":
            if args.antenna_command == "import-cuts":
                return cmd_import_cuts(args)
            return cmd_synth_3gpp(args)
        if args.command == "validate":
            return cmd_validate_ks(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Ant3dFormatError as exc:
        print(f"antenna data error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FileNotFoundError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - safety net
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED
    return EXIT_UNEXPECTED  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())

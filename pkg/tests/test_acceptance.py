"""End-to-end release gate: every headline guarantee, one check per line.

Each test prints a single PASS/FAIL line with the measured values so a
`pytest -v -s` run doubles as the release report.  Thresholds live inline
next to the checks; scale parameters (sample counts, trial counts) are the
contract, not tuning knobs.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from tcslsim.antenna import (
    CutPlane,
    PlaneCut,
    ThreeGppParams,
    element_attenuation_db,
    horizontal_attenuation_db,
    isotropic_pattern,
    make_grids,
    normalize_to_4pi,
    reconstruct_from_cuts,
    spherical_integral,
    synthesize_3gpp,
    vertical_attenuation_db,
)
from tcslsim.batch import BatchJob, run_batch
from tcslsim.calibrate import CALIBRATION_TARGETS, evaluate_preset
from tcslsim.channel import Condition, SimulationConfig, generate_realization
from tcslsim.directional import (
    DirectionalQuery,
    PowerDelayProfile,
    directional_filter,
    omnidirectional_rms_ds,
    power_delay_profile,
    rms_delay_spread,
)
from tcslsim.rng import Mt19937
from tcslsim.seeding import derive_seed
from tcslsim.stats import ks_two_sample, log10_ds_stats, moments_compare

from .reference_mt import ReferenceMt


def _report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


class TestAcceptance:
    def test_rng_reference_conformance(self):
        ours = Mt19937(5489)
        ref = ReferenceMt(5489)
        first = [ours.next_u32() for _ in range(10)]
        expected = [ref.genrand_int32() for _ in range(10)]
        ok = first == expected and first[0] == 3499211612

        ours53 = Mt19937(20260816)
        ref53 = ReferenceMt(20260816)
        mismatches = sum(
            ours53.next_uniform53() != ref53.genrand_res53() for _ in range(10_000)
        )
        ok = ok and mismatches == 0
        _report(
            "rng-conformance",
            ok,
            f"first u32 {first[0]}, 10/10 words match, "
            f"{10_000 - mismatches}/10000 uniform53 draws bit-identical",
        )

    def test_pattern_power_normalization(self):
        params = ThreeGppParams()
        raw = synthesize_3gpp(params, 1.0)
        base = normalize_to_4pi(raw)
        integral = spherical_integral(base)
        rel = abs(integral - 4.0 * math.pi) / (4.0 * math.pi)

        # same normalization constant, analytic pattern on a 4x finer grid:
        # the quadrature must already be converged at 1 degree
        shift = base.peak_gain_dbi - raw.peak_gain_dbi
        fine = synthesize_3gpp(params, 0.25)
        refined = spherical_integral(
            fine.with_metadata(peak_gain_dbi=fine.peak_gain_dbi + shift)
        )
        drift = abs(refined - integral) / (4.0 * math.pi)
        ok = rel < 1e-6 and drift < 1e-4
        _report(
            "pattern-normalization",
            ok,
            f"integral/4pi off by {rel:.3e} (<1e-6), "
            f"0.25 deg refinement drift {drift:.3e} (<1e-4)",
        )

    def test_element_pattern_spot_values(self):
        params = ThreeGppParams()
        peak = params.element_peak_gain_dbi
        boresight = peak + element_attenuation_db(90.0, 0.0, params)
        side = peak + element_attenuation_db(90.0, 65.0, params)
        back = peak + element_attenuation_db(90.0, 180.0, params)
        errs = (
            abs(boresight - 8.0),
            abs(side - (-4.0)),
            abs(back - (-22.0)),
        )
        ok = max(errs) <= 1e-9
        _report(
            "element-spot-values",
            ok,
            f"boresight {boresight:.10f}, 65 deg {side:.10f}, back {back:.10f} dBi "
            f"(max err {max(errs):.2e} <= 1e-9)",
        )

    def test_cross_cut_reconstruction(self):
        params = ThreeGppParams()
        el, az = make_grids(1.0)
        zen = 90.0 - el
        v_gain = params.element_peak_gain_dbi + vertical_attenuation_db(zen, params)
        h_gain = params.element_peak_gain_dbi + horizontal_attenuation_db(az, params)
        recon = reconstruct_from_cuts(
            PlaneCut.from_samples(zip(el, v_gain), CutPlane.VERTICAL),
            PlaneCut.from_samples(zip(az, h_gain), CutPlane.HORIZONTAL),
            params.element_peak_gain_dbi,
            1.0,
        )
        direct = synthesize_3gpp(params, 1.0)
        att_sum = (v_gain[:, None] + h_gain[None, :]) - 2.0 * params.element_peak_gain_dbi
        unclamped = att_sum > -params.a_max_db + 1e-9
        diff = np.abs(recon.absolute_gain_dbi() - direct.absolute_gain_dbi())
        worst = float(diff[unclamped].max())
        ok = unclamped.any() and worst < 1e-9
        _report(
            "cross-cut-reconstruction",
            ok,
            f"max unclamped deviation {worst:.2e} dB (<1e-9) over "
            f"{int(unclamped.sum())} cells",
        )

    @pytest.mark.parametrize(
        "frequency_ghz,condition",
        sorted(CALIBRATION_TARGETS, key=lambda k: (k[0], k[1].value)),
        ids=lambda v: v.value if isinstance(v, Condition) else f"{v:g}GHz",
    )
    def test_directional_ds_distribution(self, frequency_ghz, condition):
        t0 = time.perf_counter()
        report = evaluate_preset(frequency_ghz, condition, n_samples=10_000)
        elapsed = time.perf_counter() - t0
        ok = report.passed and elapsed < 180.0
        _report(
            "directional-ds-distribution",
            ok,
            f"{report} [{elapsed:.1f} s < 180 s]",
        )

    def test_isotropic_pattern_equivalence(self):
        iso = isotropic_pattern()
        cfg = SimulationConfig(
            frequency_ghz=16.95, condition=Condition.NLOS, seed=314
        )
        worst = 0.0
        for i in range(1_000):
            real = generate_realization(cfg, Mt19937(derive_seed(cfg.seed, i)))
            query = DirectionalQuery((0.0, 90.0), (0.0, 90.0), iso, iso)
            directional = rms_delay_spread(
                power_delay_profile(directional_filter(real, query))
            )
            omni = omnidirectional_rms_ds(real)
            if omni == 0.0:
                err = abs(directional)
            else:
                err = abs(directional - omni) / omni
            worst = max(worst, err)
        ok = worst <= 1e-12
        _report(
            "isotropic-equivalence",
            ok,
            f"worst relative deviation {worst:.2e} over 1000 realizations (<=1e-12)",
        )

    def test_ks_level_and_power(self):
        rng = Mt19937(8162026)
        null_rejections = 0
        for _ in range(200):
            a = rng.exponentials(10_000, 30.0)
            b = rng.exponentials(10_000, 30.0)
            _, p = ks_two_sample(a, b)
            null_rejections += p < 0.05
        level = null_rejections / 200.0

        alt_rejections = 0
        for _ in range(200):
            a = rng.exponentials(10_000, 30.0)
            b = rng.exponentials(10_000, 36.0)
            _, p = ks_two_sample(a, b)
            alt_rejections += p < 0.05
        power = alt_rejections / 200.0
        ok = 0.02 <= level <= 0.08 and power >= 0.99
        _report(
            "ks-level-and-power",
            ok,
            f"null rejection {level:.1%} in [2%, 8%], "
            f"shifted-mean rejection {power:.1%} >= 99%",
        )

    def test_two_tap_delay_spread_oracle(self):
        pdp = PowerDelayProfile(
            delays_ns=np.array([0.0, 100.0]),
            powers=np.array([0.5, 0.5]),
            total_power=1.0,
        )
        ds = rms_delay_spread(pdp)
        ok = ds == 50.0
        _report(
            "two-tap-ds-oracle",
            ok,
            f"equal taps at 0/100 ns -> {ds!r} ns (== 50.0 exactly)",
        )

    def test_parallel_export_determinism(self, tmp_path):
        def outputs(workers, where):
            cfg = SimulationConfig(
                frequency_ghz=16.95,
                condition=Condition.NLOS,
                seed=909,
                n_realizations=1_000,
            )
            job = BatchJob(
                config=cfg, output_dir=str(tmp_path / where), worker_count=workers
            )
            run_batch(job)
            return {
                p.name: p.read_bytes() for p in sorted(Path(job.output_dir).iterdir())
            }

        t0 = time.perf_counter()
        serial = outputs(1, "serial")
        parallel = outputs(8, "parallel")
        elapsed = time.perf_counter() - t0
        same = set(serial) == set(parallel) and all(
            serial[k] == parallel[k] for k in serial
        )
        ok = same and elapsed < 120.0
        _report(
            "parallel-determinism",
            ok,
            f"{len(serial)} files byte-identical across 1 vs 8 workers "
            f"at n=1000 [{elapsed:.1f} s < 120 s]",
        )

    def test_moment_agreement_harness(self):
        cfg = SimulationConfig(frequency_ghz=16.95, condition=Condition.NLOS, seed=0)

        def log_ds_batch(base_seed):
            vals = []
            for i in range(10_000):
                real = generate_realization(cfg, Mt19937(derive_seed(base_seed, i)))
                ds = omnidirectional_rms_ds(real)
                if ds > 0.0:
                    vals.append(math.log10(ds))
            return np.asarray(vals)

        t0 = time.perf_counter()
        passes = 0
        for trial in range(100):
            a = log_ds_batch(2 * trial + 1)
            b = log_ds_batch(2 * trial + 2)
            passes += bool(moments_compare(a, b, rel_tol=0.02))
        elapsed = time.perf_counter() - t0
        ok = passes >= 95 and elapsed < 600.0
        _report(
            "moment-agreement",
            ok,
            f"{passes}/100 independent 10k-realization batch pairs agree "
            f"at rel_tol 0.02 (>=95) [{elapsed:.0f} s < 600 s]",
        )

"""Cross-surface equivalence of the buffer bindings against the CLI."""

import subprocess

import numpy as np
import pytest

tcslml = pytest.importorskip("tcslml")

from tcslml import (  # noqa: E402
    CIR_COLUMNS,
    Ant3dFormatError,
    ConfigError,
    RealizationBatchView,
    generate_batch,
    load_pattern,
)

TEN_CONFIGS = [
    ({"frequency_ghz": 16.95, "condition": "LOS"}, 1),
    ({"frequency_ghz": 16.95, "condition": "NLOS"}, 2),
    ({"frequency_ghz": 6.75, "condition": "LOS"}, 3),
    ({"frequency_ghz": 6.75, "condition": "NLOS"}, 4),
    ({"frequency_ghz": 16.95, "condition": "NLOS", "mu_s_ns": 45.0}, 5),
    ({"frequency_ghz": 16.95, "condition": "LOS", "n_clusters_max": 2}, 6),
    ({"frequency_ghz": 6.75, "condition": "NLOS", "subpaths_per_cluster_max": 3}, 7),
    ({"frequency_ghz": 16.95, "condition": "NLOS", "delay_scale_sigma_log10": 0.3}, 8),
    ({"frequency_ghz": 6.75, "condition": "LOS", "tr_distance_m": 50.0}, 9),
    ({"frequency_ghz": 16.95, "condition": "LOS", "subpath_delay_mean_ns": 45.0}, 10),
]


def cli_export(tmp_path, config, seed, n):
    """Reference path: run the CLI directly and parse its CSV by hand."""
    lines = [f"{k} = {v}" for k, v in config.items()]
    lines += [f"seed = {seed}", f"n_realizations = {n}"]
    cfg = tmp_path / "config.txt"
    cfg.write_text("\n".join(lines) + "\n")
    out = tmp_path / "out"
    subprocess.run(
        ["tcslsim", "generate", "--config", str(cfg), "--out", str(out)],
        check=True,
        capture_output=True,
    )
    rows = (out / "cir.csv").read_text().splitlines()
    assert rows[0] == ",".join(CIR_COLUMNS)
    matrix = np.array(
        [[float(f) for f in line.split(",")] for line in rows[1:]]
    ).reshape(len(rows) - 1, len(CIR_COLUMNS))
    echo = {}
    for line in (out / "config.txt").read_text().splitlines():
        key, _, value = line.partition("=")
        echo[key.strip()] = value.strip()
    return matrix, echo


class TestGenerateBatch:
    @pytest.mark.parametrize("config,seed", TEN_CONFIGS)
    def test_matches_cli_export_bitwise(self, tmp_path, config, seed):
        view = generate_batch(config, seed, 10)
        matrix, echo = cli_export(tmp_path, config, seed, 10)
        assert view.component_matrix.shape == matrix.shape
        assert np.array_equal(view.component_matrix, matrix)
        assert view.config == echo

    def test_offsets_delimit_realizations(self):
        view = generate_batch({"frequency_ghz": 16.95, "condition": "NLOS"}, 77, 12)
        offsets = view.realization_offsets
        assert offsets[0] == 0
        assert offsets[-1] == view.component_matrix.shape[0]
        assert np.diff(offsets).min() > 0
        assert view.n_realizations == 12
        ids = view.component_matrix[:, 0]
        for k in range(view.n_realizations):
            block = view.realization(k)
            assert (block[:, 0] == k).all()
        assert ids.max() == 11.0

    def test_empty_batch(self):
        view = generate_batch({"frequency_ghz": 16.95, "condition": "LOS"}, 1, 0)
        assert view.component_matrix.shape == (0, len(CIR_COLUMNS))
        assert view.realization_offsets.tolist() == [0]
        assert view.n_realizations == 0

    def test_repeated_calls_return_equal_buffers(self):
        config = {"frequency_ghz": 6.75, "condition": "NLOS"}
        a = generate_batch(config, 31, 5)
        b = generate_batch(config, 31, 5)
        assert np.array_equal(a.component_matrix, b.component_matrix)
        assert np.array_equal(a.realization_offsets, b.realization_offsets)
        assert a.config == b.config

    def test_invalid_scenario_surfaces_cli_message(self):
        with pytest.raises(ConfigError, match="unknown scenario"):
            generate_batch(
                {"frequency_ghz": 16.95, "condition": "LOS", "scenario": "Mars"}, 1, 1
            )

    def test_invalid_condition_surfaces_cli_message(self):
        with pytest.raises(ConfigError, match="expected LOS or NLOS"):
            generate_batch({"frequency_ghz": 16.95, "condition": "maybe"}, 1, 1)

    def test_buffers_are_contiguous_and_read_only(self):
        view = generate_batch({"frequency_ghz": 16.95, "condition": "LOS"}, 2, 3)
        assert view.component_matrix.flags["C_CONTIGUOUS"]
        assert not view.component_matrix.flags["WRITEABLE"]
        assert not view.realization_offsets.flags["WRITEABLE"]
        with pytest.raises(ValueError):
            view.component_matrix[0, 0] = 0.0


class TestBatchViewInvariants:
    def test_rejects_nondecreasing_offsets(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            RealizationBatchView(
                np.zeros((2, len(CIR_COLUMNS))), np.array([0, 2, 2]), {}
            )

    def test_rejects_mismatched_row_count(self):
        with pytest.raises(ValueError, match="row count"):
            RealizationBatchView(
                np.zeros((3, len(CIR_COLUMNS))), np.array([0, 2]), {}
            )

    def test_rejects_non_finite_values(self):
        bad = np.zeros((1, len(CIR_COLUMNS)))
        bad[0, 3] = np.inf
        with pytest.raises(ValueError, match="non-finite"):
            RealizationBatchView(bad, np.array([0, 1]), {})


def synth_pattern_file(tmp_path, step=5.0):
    path = tmp_path / "elem.ant3d"
    subprocess.run(
        [
            "tcslsim",
            "antenna",
            "synth-3gpp",
            "--step",
            str(step),
            "--frequency",
            "16.95",
            "--out",
            str(path),
        ],
        check=True,
        capture_output=True,
    )
    return path


def isotropic_ant3d_text(step=30.0, peak_dbi=0.0):
    amp = 10.0 ** (peak_dbi / 20.0)
    n_el = int(round(180.0 / step)) + 1
    n_az = int(round(360.0 / step))
    theta = np.radians(step * np.arange(n_el))
    phi = np.radians(step * np.arange(n_az))
    lines = [
        "# ant3d_format_version: 1",
        "# frequency_ghz: 16.95",
        f"# peak_gain_dbi: {peak_dbi!r}",
        "# polarization: vertical",
        f"# grid_step_deg: {step!r}",
    ]
    for t in theta:
        for p in phi:
            lines.append(f"{float(p)!r},{float(t)!r},0.0,0.0,{amp!r},0.0")
    return "\n".join(lines) + "\n"


class TestLoadPattern:
    def test_grid_matches_primary_reader(self, tmp_path):
        read_ant3d = pytest.importorskip("tcslsim.antenna").read_ant3d
        path = synth_pattern_file(tmp_path)
        grid, meta = load_pattern(path)
        pat = read_ant3d(path)
        assert np.array_equal(grid, pat.absolute_gain_dbi())
        assert meta["peak_gain_dbi"] == pat.peak_gain_dbi
        assert meta["frequency_ghz"] == pat.frequency_ghz
        assert np.array_equal(meta["elevation_deg"], pat.elevation_deg)
        assert np.array_equal(meta["azimuth_deg"], pat.azimuth_deg)

    def test_isotropic_file_gives_constant_buffer(self, tmp_path):
        path = tmp_path / "iso.ant3d"
        path.write_text(isotropic_ant3d_text(step=30.0, peak_dbi=0.0))
        grid, meta = load_pattern(path)
        assert grid.shape == (7, 12)
        assert (grid == 0.0).all()
        assert meta["grid_step_deg"] == 30.0

    def test_malformed_header_is_structured_error(self, tmp_path):
        path = tmp_path / "bad.ant3d"
        path.write_text("# ant3d_format_version 1\n0,0,1,0,0,0\n")
        with pytest.raises(Ant3dFormatError, match="line 1"):
            load_pattern(path)

    def test_truncated_sphere_is_structured_error(self, tmp_path):
        path = tmp_path / "short.ant3d"
        text = isotropic_ant3d_text(step=30.0)
        path.write_text("\n".join(text.splitlines()[:-5]) + "\n")
        with pytest.raises(Ant3dFormatError, match="incomplete sphere"):
            load_pattern(path)

    def test_unparseable_row_is_structured_error(self, tmp_path):
        path = tmp_path / "garbled.ant3d"
        lines = isotropic_ant3d_text(step=30.0).splitlines()
        lines[7] = "not,numbers,at,all,here,no"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match="line 8"):
            load_pattern(path)

    def test_grid_read_only(self, tmp_path):
        path = tmp_path / "iso.ant3d"
        path.write_text(isotropic_ant3d_text())
        grid, _ = load_pattern(path)
        with pytest.raises(ValueError):
            grid[0, 0] = 1.0

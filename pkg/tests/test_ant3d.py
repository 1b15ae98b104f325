"""Field-component export and Ant3D file round trips."""

import math

import numpy as np
import pytest

from tcslsim.antenna import (
    Ant3dFormatError,
    AntennaPattern,
    Polarization,
    isotropic_pattern,
    make_grids,
    read_ant3d,
    synthesize_3gpp,
    to_field_components,
    write_ant3d,
)


def example_pattern(step=15.0, polarization=Polarization.VERTICAL):
    el, az = make_grids(step)
    rng = np.random.default_rng(7)
    abs_db = rng.uniform(-25.0, 6.0, size=(el.size, az.size))
    return AntennaPattern.from_absolute_gain(
        el,
        az,
        abs_db,
        polarization=polarization,
        frequency_ghz=16.95,
        orientation=(12.0, -4.0),
        source="unit-test",
    )


class TestFieldComponents:
    def test_vertical_puts_all_power_in_e_theta(self):
        pat = synthesize_3gpp(grid_step_deg=15.0, polarization=Polarization.VERTICAL)
        grid = to_field_components(pat)
        assert np.all(grid.e_phi == 0.0)
        # Boresight cell: zenith 90 deg, azimuth 0 -> gain 8 dBi.
        i = np.argmin(np.abs(grid.theta_rad - math.pi / 2.0))
        assert grid.e_theta[i, 0].real == pytest.approx(math.sqrt(10.0**0.8), rel=1e-12)
        assert grid.e_theta[i, 0].imag == 0.0

    def test_horizontal_puts_all_power_in_e_phi(self):
        pat = example_pattern(polarization=Polarization.HORIZONTAL)
        grid = to_field_components(pat)
        assert np.all(grid.e_theta == 0.0)
        assert np.all(np.abs(grid.e_phi) > 0.0)

    def test_dual_splits_power_equally(self):
        pat = example_pattern(polarization=Polarization.DUAL)
        grid = to_field_components(pat)
        np.testing.assert_allclose(
            np.abs(grid.e_theta) ** 2, np.abs(grid.e_phi) ** 2, rtol=1e-12
        )

    def test_power_reconstructs_linear_gain(self):
        for pol in Polarization:
            pat = example_pattern(polarization=pol)
            grid = to_field_components(pat)
            recon = grid.linear_gain()[::-1, :]  # zenith rows back to elevation rows
            np.testing.assert_allclose(recon, pat.linear_gain(), rtol=1e-9)

    def test_theta_rows_ascend_from_zero_to_pi(self):
        grid = to_field_components(example_pattern())
        assert grid.theta_rad[0] == pytest.approx(0.0, abs=1e-12)
        assert grid.theta_rad[-1] == pytest.approx(math.pi, abs=1e-12)
        assert np.all(np.diff(grid.theta_rad) > 0)


class TestRoundTrip:
    def test_isotropic_round_trip(self, tmp_path):
        path = tmp_path / "iso.ant3d"
        pat = isotropic_pattern(grid_step_deg=10.0, peak_gain_dbi=2.5)
        write_ant3d(pat, path)
        back = read_ant3d(path)
        assert back.peak_gain_dbi == pat.peak_gain_dbi
        assert back.polarization is pat.polarization
        assert back.frequency_ghz is None
        np.testing.assert_allclose(back.gain_db, pat.gain_db, atol=1e-9)

    @pytest.mark.parametrize("pol", list(Polarization))
    def test_random_pattern_round_trip(self, tmp_path, pol):
        path = tmp_path / "pat.ant3d"
        pat = example_pattern(polarization=pol)
        write_ant3d(pat, path)
        back = read_ant3d(path)
        assert back.peak_gain_dbi == pat.peak_gain_dbi
        assert back.frequency_ghz == pat.frequency_ghz
        assert back.orientation == pat.orientation
        assert back.source == pat.source
        assert back.polarization is pol
        assert np.abs(back.gain_db - pat.gain_db).max() < 1e-9
        assert back.gain_db.max() == 0.0

    def test_element_pattern_round_trip(self, tmp_path):
        path = tmp_path / "element.ant3d"
        pat = synthesize_3gpp(grid_step_deg=1.0)
        write_ant3d(pat, path)
        back = read_ant3d(path)
        assert back.peak_gain_dbi == pat.peak_gain_dbi
        assert np.abs(back.gain_db - pat.gain_db).max() < 1e-9


class TestReadErrors:
    def write_sample(self, tmp_path):
        path = tmp_path / "pat.ant3d"
        write_ant3d(isotropic_pattern(grid_step_deg=30.0, peak_gain_dbi=1.0), path)
        return path

    def test_truncated_file_reports_incomplete_sphere(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-10]) + "\n")
        with pytest.raises(Ant3dFormatError, match="incomplete sphere"):
            read_ant3d(path)

    def test_header_only_file_reports_incomplete_sphere(self, tmp_path):
        path = self.write_sample(tmp_path)
        header = [l for l in path.read_text().splitlines() if l.startswith("#")]
        path.write_text("\n".join(header) + "\n")
        with pytest.raises(Ant3dFormatError, match="incomplete sphere"):
            read_ant3d(path)

    def test_malformed_header_reports_line_number(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = path.read_text().splitlines()
        lines.insert(2, "# just words without separator")
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match="line 3"):
            read_ant3d(path)

    def test_missing_required_key_rejected(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = [l for l in path.read_text().splitlines() if "peak_gain_dbi" not in l]
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match="peak_gain_dbi"):
            read_ant3d(path)

    def test_bad_header_value_reports_line_number(self, tmp_path):
        path = self.write_sample(tmp_path)
        text = path.read_text().replace("# grid_step_deg: 30.0", "# grid_step_deg: wide")
        path.write_text(text)
        with pytest.raises(Ant3dFormatError, match="line 5"):
            read_ant3d(path)

    def test_nan_field_value_reports_line_number(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = path.read_text().splitlines()
        first_data = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        fields = lines[first_data + 3].split(",")
        fields[2] = "nan"
        lines[first_data + 3] = ",".join(fields)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match=f"line {first_data + 4}"):
            read_ant3d(path)

    def test_missing_column_reports_line_number(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = path.read_text().splitlines()
        first_data = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        lines[first_data] = ",".join(lines[first_data].split(",")[:5])
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match=f"line {first_data + 1}.*columns"):
            read_ant3d(path)

    def test_off_grid_angle_rejected(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = path.read_text().splitlines()
        first_data = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        fields = lines[first_data].split(",")
        fields[0] = "0.123"
        lines[first_data] = ",".join(fields)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match="grid"):
            read_ant3d(path)

    def test_trailing_rows_rejected(self, tmp_path):
        path = self.write_sample(tmp_path)
        with open(path, "a") as fh:
            fh.write("0.0,0.0,0.0,0.0,1.0,0.0\n")
        with pytest.raises(Ant3dFormatError, match="trailing"):
            read_ant3d(path)

    def test_peak_header_must_match_data(self, tmp_path):
        path = self.write_sample(tmp_path)
        text = path.read_text().replace("# peak_gain_dbi: 1.0", "# peak_gain_dbi: 3.0")
        path.write_text(text)
        with pytest.raises(Ant3dFormatError, match="disagrees"):
            read_ant3d(path)

    def test_unsupported_version_rejected(self, tmp_path):
        path = self.write_sample(tmp_path)
        text = path.read_text().replace("ant3d_format_version: 1", "ant3d_format_version: 9")
        path.write_text(text)
        with pytest.raises(Ant3dFormatError, match="version"):
            read_ant3d(path)

    def test_zero_power_cell_rejected(self, tmp_path):
        path = self.write_sample(tmp_path)
        lines = path.read_text().splitlines()
        first_data = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        fields = lines[first_data].split(",")
        lines[first_data] = ",".join(fields[:2] + ["0.0", "0.0", "0.0", "0.0"])
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(Ant3dFormatError, match="zero field power"):
            read_ant3d(path)


def test_write_rejects_mismatched_steps(tmp_path):
    el = np.linspace(-90.0, 90.0, 19)
    az = np.arange(0.0, 360.0, 5.0)
    pat = AntennaPattern(el, az, np.zeros((el.size, az.size)), 0.0)
    with pytest.raises(ValueError, match="equal"):
        write_ant3d(pat, tmp_path / "bad.ant3d")

"""Command-line interface: scenarios, output files, exit codes."""
import json
import math

import pytest

from fourlevel.cli import main
from fourlevel.scenarios import (PRESETS, ScenarioConfig, apply_preset,
                                 parse_config_file)
from fourlevel.errors import ConfigError


def run(args):
    return main(args)


class TestScenarioConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(delta_points=1)
        with pytest.raises(ConfigError):
            ScenarioConfig(delta_min=1.0, delta_max=-1.0)
        with pytest.raises(ConfigError):
            ScenarioConfig(gamma_ratio=0.0)
        with pytest.raises(ConfigError):
            ScenarioConfig(outputs=("pdf",))
        with pytest.raises(ConfigError):
            ScenarioConfig(preset="fig9z")

    def test_preset_fidelity(self):
        assert PRESETS["fig2a"] == {"omega_c": 4.0, "omega_r": 0.0, "psi": 0.0}
        assert PRESETS["fig2b"] == {"omega_c": 4.0, "omega_r": 1.0, "psi": math.pi / 2}
        assert PRESETS["fig3a"] == {"omega_c": 1.0, "omega_r": 0.1, "psi": math.pi / 2}
        assert PRESETS["fig3b"] == {"omega_c": 0.1, "omega_r": 0.01, "psi": math.pi / 2}
        for name, params in PRESETS.items():
            sc = apply_preset(ScenarioConfig(preset=name))
            assert sc.omega_c == params["omega_c"]
            assert sc.omega_r == params["omega_r"]
            assert sc.psi == params["psi"]
            assert sc.gamma_ratio == 1e-4
            assert sc.delta_points == 801
            span = 2 * params["omega_r"] / math.sqrt(2) + 1.0
            assert sc.delta_min == pytest.approx(-span)
            assert sc.delta_max == pytest.approx(span)

    def test_preset_keeps_explicit_grid(self):
        sc = apply_preset(ScenarioConfig(preset="fig2b", delta_min=-0.5,
                                         delta_max=0.5, delta_points=11),
                          grid_overridden=True)
        assert sc.delta_points == 11 and sc.delta_max == 0.5
        assert sc.omega_c == 4.0


class TestConfigFile:
    def test_parse_and_run(self, tmp_path):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text(
            "# demo scenario\n"
            "omega_c = 1.0\n"
            "omega_r = 0.1   # rf channel amplitude\n"
            "psi = 0.5\n"
            "delta_min = -0.1\n"
            "delta_max = 0.1\n"
            "delta_points = 5\n"
            "outputs = csv,json\n",
            encoding="utf-8")
        out = tmp_path / "out"
        assert run(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "spectrum.csv").exists()
        assert (out / "spectrum.json").exists()
        payload = json.loads((out / "spectrum.json").read_text())
        assert payload["config"]["omega_c"] == 1.0
        assert len(payload["points"]) == 5

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text("omega_c = 1.0\ndelta_points = 5\n"
                       "delta_min = -0.1\ndelta_max = 0.1\n", encoding="utf-8")
        out = tmp_path / "out"
        assert run(["spectrum", "--config", str(cfg), "--out", str(out),
                    "--delta-points", "3", "--format", "json"]) == 0
        payload = json.loads((out / "spectrum.json").read_text())
        assert len(payload["points"]) == 3

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text("omega_q = 1.0\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_file(str(cfg))
        assert run(["spectrum", "--config", str(cfg), "--out", str(tmp_path)]) == 1

    def test_missing_file(self, tmp_path):
        assert run(["spectrum", "--config", str(tmp_path / "nope.cfg"),
                    "--out", str(tmp_path)]) == 1


class TestExitCodes:
    def test_bad_flag_value(self, tmp_path):
        assert run(["spectrum", "--delta-points", "1", "--out", str(tmp_path)]) == 1

    def test_unknown_format(self, tmp_path):
        assert run(["spectrum", "--format", "pdf", "--out", str(tmp_path)]) == 1

    def test_solver_failure(self, tmp_path):
        # an almost-off rf drive leaves a nearly conserved quantity: the
        # bordered solve is hopelessly ill-conditioned and must exit 2
        code = run(["spectrum", "--omega-c", "1.0", "--omega-r", "1e-9",
                    "--delta-min", "-0.1", "--delta-max", "0.1",
                    "--delta-points", "2", "--out", str(tmp_path)])
        assert code == 2

    def test_unwritable_out(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        code = run(["spectrum", "--delta-points", "3", "--delta-min", "-0.1",
                    "--delta-max", "0.1", "--out", str(blocker / "sub")])
        assert code == 1


class TestSpectrumOutputs:
    def test_csv_shape(self, tmp_path):
        assert run(["spectrum", "--omega-c", "1.0", "--omega-r", "0.1",
                    "--psi", "0.7", "--delta-min", "-0.2", "--delta-max", "0.2",
                    "--delta-points", "7", "--out", str(tmp_path),
                    "--format", "csv", "--format", "svg"]) == 0
        text = (tmp_path / "spectrum.csv").read_bytes().decode("utf-8")
        lines = text.split("\n")
        assert lines[0] == ("delta,re_chi_x,im_chi_x,re_chi_y,im_chi_y,"
                            "re_chi_psi,im_chi_psi,re_delta_chi,im_delta_chi,"
                            "f_abs,n_eff")
        assert len(lines) == 9 and lines[-1] == ""  # header + 7 rows + LF end
        assert "\r" not in text
        first = lines[1].split(",")
        assert len(first) == 11
        assert first[0] == "-2.0000000000000001e-01"
        svg = (tmp_path / "spectrum.svg").read_text(encoding="utf-8")
        assert svg.startswith("<svg ") and "polyline" in svg

    def test_workers_preserve_order(self, tmp_path):
        args = ["spectrum", "--omega-c", "1.0", "--omega-r", "0.1",
                "--delta-min", "-0.2", "--delta-max", "0.2",
                "--delta-points", "9"]
        assert run(args + ["--out", str(tmp_path / "serial")]) == 0
        assert run(args + ["--out", str(tmp_path / "pool"), "--workers", "2"]) == 0
        a = (tmp_path / "serial" / "spectrum.csv").read_bytes()
        b = (tmp_path / "pool" / "spectrum.csv").read_bytes()
        assert a == b

    def test_repeat_runs_byte_identical(self, tmp_path):
        args = ["spectrum", "--omega-c", "0.5", "--omega-r", "0.05",
                "--psi", "0.9", "--delta-min", "-0.3", "--delta-max", "0.3",
                "--delta-points", "15", "--format", "csv", "--format", "json",
                "--format", "svg"]
        assert run(args + ["--out", str(tmp_path / "a")]) == 0
        assert run(args + ["--out", str(tmp_path / "b")]) == 0
        for name in ("spectrum.csv", "spectrum.json", "spectrum.svg"):
            assert ((tmp_path / "a" / name).read_bytes()
                    == (tmp_path / "b" / name).read_bytes()), name


class TestDarkstatesCommand:
    def test_report_structure(self, tmp_path):
        assert run(["darkstates", "--omega-c", "4.0", "--omega-r", "1.0",
                    "--psi", "0.0", "--delta-min", "-1.0", "--delta-max", "1.0",
                    "--delta-points", "5", "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "darkstates.json").read_text())
        assert len(payload["points"]) == 5
        for point in payload["points"]:
            assert len(point["records"]) == 5
            kinds = {rec["kind"] for rec in point["records"]}
            assert kinds <= {"raman", "non_raman", "bright"}
            # parallel polarizations keep the split dressed pair dark everywhere
            darks = [rec for rec in point["records"]
                     if rec["excited_overlap"] < 1e-10]
            assert len(darks) >= 2

    def test_probe_off_warns_but_succeeds(self, tmp_path, capsys):
        assert run(["darkstates", "--omega-c", "1.0", "--omega-r", "0.5",
                    "--delta-min", "-0.5", "--delta-max", "0.5",
                    "--delta-points", "3", "--probe-amp", "0.0",
                    "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "darkstates.json").read_text())
        assert payload["warning"]
        assert "probe" in capsys.readouterr().out


class TestAngleScanCommand:
    def test_root_found(self, tmp_path):
        assert run(["angle-scan", "--omega-c", "1.0", "--omega-r", "0.1",
                    "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "angle_scan.json").read_text())
        assert payload["message"] is None
        assert payload["numeric_angle"] == pytest.approx(0.0992, abs=2e-3)
        assert payload["analytic_angle"] == pytest.approx(0.10017, abs=1e-5)
        assert payload["relative_difference"] < 0.01
        table = (tmp_path / "angle_scan.csv").read_text(encoding="utf-8")
        assert table.splitlines()[0] == "psi,im_chi_psi,re_chi_psi"

    def test_no_angle_reported(self, tmp_path, capsys):
        assert run(["angle-scan", "--omega-c", "1.0", "--omega-r", "0.005",
                    "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "angle_scan.json").read_text())
        assert payload["message"] == "no transparency angle"
        assert payload["numeric_angle"] is None
        assert payload["analytic_rhs"] == pytest.approx(4.0, rel=1e-12)
        assert "no transparency angle" in capsys.readouterr().out

    def test_rf_off_flat(self, tmp_path):
        assert run(["angle-scan", "--omega-c", "1.0", "--omega-r", "0.0",
                    "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "angle_scan.json").read_text())
        assert payload["numeric_angle"] is None


class TestSteadyCommand:
    def test_report(self, tmp_path):
        assert run(["steady", "--omega-c", "4.0", "--omega-r", "1.0",
                    "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "steady.json").read_text())
        assert payload["max_abs_difference"] < 1e-9
        assert payload["trace"] == pytest.approx(1.0, abs=1e-12)
        assert payload["min_eigenvalue"] > -1e-12
        assert payload["numeric_re"][4][4] == pytest.approx(3.2e-3 / 48.0168, rel=1e-6)


class TestPresetCommand:
    def test_small_grid_run(self, tmp_path):
        assert run(["preset", "fig2a", "--delta-min", "-0.1", "--delta-max", "0.1",
                    "--delta-points", "5", "--out", str(tmp_path),
                    "--format", "json"]) == 0
        payload = json.loads((tmp_path / "spectrum.json").read_text())
        assert payload["config"]["omega_c"] == 4.0
        assert payload["config"]["preset"] == "fig2a"

    def test_unknown_preset(self, tmp_path):
        assert run(["preset", "fig9x", "--out", str(tmp_path)]) == 1

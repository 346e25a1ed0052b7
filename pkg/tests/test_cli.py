import json

import numpy as np
import pytest

import towerstab.cli as cli


def write_config(tmp_path, **overrides):
    cfg = {
        "model": "combined",
        "n_elements": 6,
        "n_points": 20,
        "T": 5.0,
        "k_modes": 6,
        "out_dir": str(tmp_path / "out"),
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestConfigValidation:
    def test_negative_gain_names_field(self, tmp_path, capsys):
        path = write_config(tmp_path, a=-1.0)
        assert cli.main(["verify-all", "--config", str(path)]) == cli.EXIT_VALIDATION
        assert "a:" in capsys.readouterr().err

    def test_zero_s_lo_rejected(self, tmp_path, capsys):
        path = write_config(tmp_path, s_lo=0.0)
        assert cli.main(["scan", "--config", str(path)]) == cli.EXIT_VALIDATION
        assert "s_lo" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        path = write_config(tmp_path, damping=3.0)
        assert cli.main(["check", "--config", str(path)]) == cli.EXIT_VALIDATION
        assert "damping" in capsys.readouterr().err

    def test_malformed_json_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"model": "combined",\n  broken\n}')
        assert cli.main(["check", "--config", str(path)]) == cli.EXIT_VALIDATION
        assert "line" in capsys.readouterr().err

    def test_unknown_model_rejected(self, tmp_path):
        path = write_config(tmp_path, model="windmill")
        assert cli.main(["check", "--config", str(path)]) == cli.EXIT_VALIDATION


class TestVerifyAll:
    def test_combined_desk_fixture_passes(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.main(["verify-all", "--config", str(path)]) == cli.EXIT_OK
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        checks = report["checks"]
        assert checks["scan"]["status"] == "pass"
        assert "alpha_fit" in checks["scan"]
        assert checks["dissipation_identity"]["status"] == "pass"
        statuses = {c["status"] for c in checks.values()}
        assert statuses <= {"pass", "not run"}

    def test_hydraulic_fixture_reports_positivity_and_kernel(self, tmp_path):
        path = write_config(tmp_path, model="hydraulic")
        assert cli.main(["verify-all", "--config", str(path)]) == cli.EXIT_OK
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"]["hydraulic_positivity"]["status"] == "pass"
        assert report["checks"]["kernel"]["status"] == "pass"
        assert report["checks"]["routh_hurwitz"]["status"] == "pass"

    def test_undamped_hydraulic_fails_kernel_check(self, tmp_path):
        """With no damping anywhere the drivetrain has a conserved mode, the
        kernel is nontrivial and verify-all exits with the check-failure code."""
        path = write_config(tmp_path, model="hydraulic", Bp=0.0, Bm=0.0, kleak=0.0)
        with pytest.warns(UserWarning):
            status = cli.main(["verify-all", "--config", str(path)])
        assert status == cli.EXIT_CHECK_FAILED
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"]["kernel"]["status"] == "fail"
        assert report["checks"]["kernel"]["dimension"] == 1

    def test_rerun_is_byte_identical(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.main(["verify-all", "--config", str(path)]) == cli.EXIT_OK
        first = (tmp_path / "out" / "report.json").read_bytes()
        assert cli.main(["verify-all", "--config", str(path)]) == cli.EXIT_OK
        assert (tmp_path / "out" / "report.json").read_bytes() == first

    def test_artifact_set(self, tmp_path):
        path = write_config(tmp_path)
        cli.main(["verify-all", "--config", str(path)])
        names = sorted(p.name for p in (tmp_path / "out").iterdir())
        assert names == ["report.json", "scan.csv", "spectrum.csv", "trajectory.csv"]

    def test_report_enumerates_every_check(self, tmp_path):
        """No check is silently skipped: every known check appears with a
        status in the verify-all report."""
        path = write_config(tmp_path)
        cli.main(["verify-all", "--config", str(path)])
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert set(report["checks"]) == set(cli.CHECK_NAMES)
        for entry in report["checks"].values():
            assert entry["status"] in ("pass", "fail", "not run")


class TestPartialRuns:
    def test_scan_only_marks_other_checks_not_run(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.main(["scan", "--config", str(path)]) == cli.EXIT_OK
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"]["scan"]["status"] == "pass"
        assert report["checks"]["passivity"]["status"] == "not run"
        assert report["checks"]["decay"]["status"] == "not run"

    def test_simulate_writes_trajectory_columns(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.main(["simulate", "--config", str(path)]) == cli.EXIT_OK
        header = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()[0]
        cols = header.split(",")
        assert cols[:2] == ["t", "E"]
        assert "tip_velocity" in cols

    def test_check_toggles_respected(self, tmp_path):
        path = write_config(tmp_path, checks={"passivity": False})
        assert cli.main(["check", "--config", str(path)]) == cli.EXIT_OK
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"]["passivity"]["status"] == "not run"
        assert report["checks"]["conditions"]["status"] == "pass"


class TestAssemble:
    def test_matrices_serialized_with_header(self, tmp_path):
        path = write_config(tmp_path)
        assert cli.main(["assemble", "--config", str(path)]) == cli.EXIT_OK
        lines = (tmp_path / "out" / "A.csv").read_text().splitlines()
        rows, cols = (int(v) for v in lines[0].split(","))
        assert rows == cols == 4 * 6
        matrix = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        assert matrix.shape == (rows, cols)
        labels = (tmp_path / "out" / "labels.txt").read_text().split()
        assert len(labels) == rows

    def test_report_emitted_even_for_assemble(self, tmp_path):
        path = write_config(tmp_path)
        cli.main(["assemble", "--config", str(path)])
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["checks"]["dissipativity"]["status"] == "pass"
        assert report["provenance"]["toolkit_version"]


class TestDefaults:
    def test_runs_without_config_file(self, tmp_path):
        assert (
            cli.main(["check", "--out", str(tmp_path / "o"), "--seed", "3"])
            == cli.EXIT_OK
        )
        report = json.loads((tmp_path / "o" / "report.json").read_text())
        assert report["provenance"]["seed"] == 3

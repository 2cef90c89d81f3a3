from pathlib import Path

import pytest

from entlink.cli import CSV_HEADER, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMetricsCommand:
    def test_reference_point(self, capsys):
        code, out, _ = run_cli(capsys, "metrics", "50")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == CSV_HEADER
        values = dict(zip(CSV_HEADER.split(","), row.split(",")))
        assert float(values["throughput_per_s"]) == pytest.approx(184.4, abs=0.05)
        assert float(values["fidelity_max"]) == pytest.approx(0.97742, abs=5e-5)
        assert float(values["eta_arm"]) == pytest.approx(0.1, rel=1e-12)

    def test_zero_km(self, capsys):
        code, out, _ = run_cli(capsys, "metrics", "0")
        assert code == 0
        row = out.strip().splitlines()[1]
        values = dict(zip(CSV_HEADER.split(","), row.split(",")))
        assert float(values["throughput_per_s"]) == pytest.approx(1778.49, abs=0.05)
        assert float(values["fidelity_max"]) == pytest.approx(0.97260, abs=5e-5)

    def test_invalid_pump_fraction_exits_one(self, capsys):
        code, _, err = run_cli(capsys, "--set", "pump_fraction=0", "metrics", "50")
        assert code == 1
        assert "pump_fraction" in err

    def test_unknown_key_exits_one(self, capsys):
        code, _, err = run_cli(capsys, "--set", "nonsense=1", "metrics", "50")
        assert code == 1
        assert "nonsense" in err

    def test_negative_length_exits_one(self, capsys):
        code, _, err = run_cli(capsys, "metrics", "--", "-5")
        assert code == 1

    def test_usage_error_exits_one(self, capsys):
        code, _, _ = run_cli(capsys, "metrics")  # missing argument
        assert code == 1


class TestSweepCommand:
    def test_full_sweep_round_trips(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, out, _ = run_cli(capsys, "sweep", "0", "100", "2", "-o", str(out_path))
        assert code == 0
        assert "51 rows" in out
        lines = out_path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 52
        throughput_column = [float(line.split(",")[-1]) for line in lines[1:]]
        assert all(a > b for a, b in zip(throughput_column, throughput_column[1:]))
        # full-precision decimals: parsing and re-printing reproduces the file
        for line in lines[1:]:
            rebuilt = ",".join(repr(float(field)) for field in line.split(","))
            assert rebuilt == line

    def test_single_row_matches_metrics(self, capsys, tmp_path):
        out_path = tmp_path / "one.csv"
        code, _, _ = run_cli(capsys, "sweep", "50", "50", "2", "-o", str(out_path))
        assert code == 0
        sweep_row = out_path.read_text().splitlines()[1]
        code, out, _ = run_cli(capsys, "metrics", "50")
        assert code == 0
        assert out.strip().splitlines()[1] == sweep_row

    def test_step_larger_than_range(self, capsys, tmp_path):
        out_path = tmp_path / "short.csv"
        code, _, _ = run_cli(capsys, "sweep", "10", "12", "50", "-o", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("10.0,")

    def test_unwritable_output_exits_one(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "sweep", "0", "10", "5", "-o", str(tmp_path / "missing" / "x.csv")
        )
        assert code == 1
        assert "cannot write" in err


class TestOracleCheckCommand:
    def test_quadrature_passes(self, capsys):
        code, out, _ = run_cli(capsys, "oracle-check", "--mode", "quadrature", "--tolerance", "1e-8")
        assert code == 0
        assert out.startswith("PASS")

    def test_fock_passes(self, capsys):
        code, out, _ = run_cli(capsys, "oracle-check", "--mode", "fock", "--tolerance", "1e-10")
        assert code == 0
        assert out.startswith("PASS")

    def test_zero_tolerance_exits_two(self, capsys):
        code, out, _ = run_cli(capsys, "oracle-check", "--mode", "quadrature", "--tolerance", "0")
        assert code == 2
        assert out.startswith("FAIL")
        assert "max deviation" in out

    def test_negative_tolerance_exits_one(self, capsys):
        code, _, _ = run_cli(capsys, "oracle-check", "--mode", "fock", "--tolerance", "-1")
        assert code == 1


class TestMcCommand:
    def test_report_files_and_deltas(self, capsys, tmp_path):
        out_path = tmp_path / "mc.txt"
        code, out, _ = run_cli(
            capsys, "mc", "50", "--trials", "100000", "--seed", "42", "-o", str(out_path)
        )
        assert code == 0
        assert "p_success" in out and "fidelity" in out
        report = out_path.read_text()
        assert "n_success = " in report
        counts = Path(str(out_path) + ".counts.csv").read_text().splitlines()
        assert counts[0] == "trials,n_erasure,n_success,n_error,seed"
        trials, n_erasure, n_success, n_error, seed = map(int, counts[1].split(","))
        assert trials == 100000
        assert n_erasure + n_success + n_error == trials
        assert seed == 42

    def test_identical_seed_gives_identical_files(self, capsys, tmp_path):
        first = tmp_path / "a.txt"
        second = tmp_path / "b.txt"
        for path in (first, second):
            code, _, _ = run_cli(
                capsys, "mc", "50", "--trials", "50000", "--seed", "9", "-o", str(path)
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()
        assert (
            Path(str(first) + ".counts.csv").read_bytes()
            == Path(str(second) + ".counts.csv").read_bytes()
        )

    def test_single_trial(self, capsys, tmp_path):
        out_path = tmp_path / "one.txt"
        code, _, _ = run_cli(capsys, "mc", "50", "--trials", "1", "--seed", "0", "-o", str(out_path))
        assert code == 0
        counts = Path(str(out_path) + ".counts.csv").read_text().splitlines()[1]
        trials, n_erasure, n_success, n_error, _ = map(int, counts.split(","))
        assert trials == 1
        assert n_erasure + n_success + n_error == 1

    def test_invalid_trials_exits_one(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, "mc", "50", "--trials", "0", "--seed", "1", "-o", str(tmp_path / "x.txt")
        )
        assert code == 1


class TestConfigHandling:
    def test_config_file_is_honored(self, capsys, tmp_path):
        cfg = tmp_path / "link.cfg"
        cfg.write_text("excess_loss_db_per_arm = 0\nfiber_loss_db_per_km = 0\n")
        code, out, _ = run_cli(capsys, "--config", str(cfg), "metrics", "100")
        assert code == 0
        row = out.strip().splitlines()[1]
        assert row.split(",")[1] == "1.0"  # eta_arm column

    def test_set_overrides_file(self, capsys, tmp_path):
        cfg = tmp_path / "link.cfg"
        cfg.write_text("excess_loss_db_per_arm = 0\n")
        code, out, _ = run_cli(
            capsys,
            "--config",
            str(cfg),
            "--set",
            "excess_loss_db_per_arm=5",
            "metrics",
            "0",
        )
        assert code == 0
        row = out.strip().splitlines()[1]
        assert float(row.split(",")[1]) == pytest.approx(10.0**-0.5, rel=1e-12)

    def test_missing_config_file_exits_one(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "--config", str(tmp_path / "none.cfg"), "metrics", "0")
        assert code == 1

    def test_malformed_config_file_exits_one(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("pump_fraction 0.01\n")
        code, _, err = run_cli(capsys, "--config", str(cfg), "metrics", "0")
        assert code == 1
        assert "pump_fraction" in err

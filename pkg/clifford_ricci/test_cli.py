import json

import pytest

from clifford_ricci.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def test_spectrum_json(capsys):
    assert main(["spectrum", "--c", "2", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["index"] == 1
    assert data["nullity"] == 4
    assert data["cmc_stable"] is True


def test_spectrum_summary_for_round_potential(capsys):
    assert main(["spectrum", "--c", "4", "--backend", "fd"]) == EXIT_OK
    assert "index 5" in capsys.readouterr().out


def test_bump_design_writes_profile(tmp_path):
    assert main(["bump-design", "--r", "0.05", "--out", str(tmp_path), "--plot"]) == EXIT_OK
    assert (tmp_path / "profile.csv").exists()
    assert (tmp_path / "profile.png").exists()


def test_ricci_scan(tmp_path, capsys):
    assert main(["ricci-scan", "--r", "0.2", "--out", str(tmp_path), "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["feasible"] is True
    assert data["direction"] == "t"
    assert (tmp_path / "ricci.csv").exists()


def test_balance_shifted_map(tmp_path, capsys):
    assert main(["balance", "--map", "shifted:0.2,0,0,0", "--json", "--out", str(tmp_path)]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["residual"] <= 1e-8
    assert data["a"][0] == pytest.approx(-0.2, abs=1e-6)


def test_balance_with_weight_file(tmp_path):
    rho = tmp_path / "rho.csv"
    rho.write_text("\n".join(",".join(["1.5"] * 16) for _ in range(16)) + "\n", encoding="utf-8")
    assert main(["balance", "--n", "16", "--rho", f"file:{rho}", "--out", str(tmp_path)]) == EXIT_OK
    assert main(["balance", "--n", "32", "--rho", f"file:{rho}", "--out", str(tmp_path)]) == EXIT_USAGE


def test_missing_weight_file_exits_two(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    assert main(["balance", "--n", "16", "--rho", f"file:{missing}", "--out", str(tmp_path)]) == EXIT_USAGE
    assert "could not read" in capsys.readouterr().err


def test_unconverged_balance_exits_one(tmp_path, capsys):
    code = main(["balance", "--n", "16", "--map", "shifted:0.3,0,0,0", "--max-iter", "1", "--json", "--out", str(tmp_path)])
    data = json.loads(capsys.readouterr().out)
    assert code == EXIT_FAIL
    assert data["converged"] is False
    assert data["iterations"] == 1
    assert data["residual"] > 1e-8


def test_willmore_check(tmp_path):
    assert main(["willmore-check", "--r", "0.05", "--t", "0,0.1,-0.3", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "torus.csv").exists()


def test_max_r_reports_domain_bound(capsys):
    assert main(["max-r", "--n", "256", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["hit_domain_bound"] is True
    assert data["upper"] == pytest.approx(data["domain_bound"])


def test_verify_all(tmp_path, capsys):
    assert main(["verify-all", "--r", "0.05", "--n", "16", "--out", str(tmp_path)]) == EXIT_OK
    assert "OVERALL: PASS" in capsys.readouterr().out
    assert (tmp_path / "report.json").exists()


def test_failed_verdict_exits_one(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CLIFFORD_TOL_ORACLE", "1e-15")
    code = main(["verify-all", "--r", "0.05", "--n", "16", "--out", str(tmp_path), "--json"])
    data = json.loads(capsys.readouterr().out)
    assert code == EXIT_FAIL
    assert data["verdicts"]["overall"] is False
    assert data["verdicts"]["ricci_oracle_agreement"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-all", "--r", "0.5"],
        ["bump-design", "--r", "0"],
        ["balance", "--map", "shifted:0.2,0"],
        ["balance", "--map", "mystery"],
        ["spectrum", "--c", "2", "--n", "7"],
        ["willmore-check", "--t", "0.8"],
    ],
)
def test_domain_errors_exit_two(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path)]) == EXIT_USAGE


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["explode"])
    assert exc.value.code == 2

import json

import pytest

from localtriple.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_local_integral_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "local-integral",
        "--p", "3",
        "--rep1", "special(exp(0))",
        "--rep2", "special(exp(0))",
        "--rep3", "ps(1,1,exp(1);1,1,exp(-1))",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["abs_error"] <= 1e-8
    assert payload["closed_form"]["re"] == pytest.approx(4 / 27)


def test_output_deterministic(capsys):
    args = (
        "local-integral",
        "--p", "3",
        "--rep1", "unram(i,-i)",
        "--rep2", "special(-1)",
        "--rep3", "sc(2,w0,9)",
    )
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_amplifier_values(capsys):
    code, out, _ = run_cli(capsys, "amplifier", "--alpha", "7/64")
    assert code == 0
    payload = json.loads(out)
    assert payload["b"] == "25/164" and payload["delta"] == "225/5248"


def test_whittaker_csv(capsys, tmp_path):
    dest = tmp_path / "table.csv"
    code, out, _ = run_cli(
        capsys, "whittaker", "--p", "3", "--rep", "special(1)", "--format", "csv", "--out", str(dest)
    )
    assert code == 0
    lines = dest.read_text().strip().splitlines()
    assert lines[0] == "i,n,unit_class,re,im"
    assert len(lines) > 3


def test_matcoef_csv(capsys):
    code, out, _ = run_cli(
        capsys, "matcoef", "--p", "3", "--rep", "special(1)", "--c3", "2", "--format", "csv"
    )
    assert code == 0
    assert out.splitlines()[0] == "i,v(a),unit(a),v(m),unit(m),re,im"


def test_kirillov_check(capsys):
    code, out, _ = run_cli(capsys, "kirillov-check", "--p", "5", "--c", "2", "--samples", "5")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["local-integral", "--p", "3", "--rep1", "bad(", "--rep2", "special(1)", "--rep3", "sc(2,w0,1)"])
    assert exc.value.code == 2


def test_verify_hecke_suite(capsys):
    code, out, err = run_cli(capsys, "verify", "--suite", "hecke")
    assert code == 0
    assert "PASS criterion 7" in err and "PASS criterion 8" in err
    assert json.loads(out)["passed"] is True

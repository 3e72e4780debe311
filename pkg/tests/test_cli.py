import json
import subprocess
import sys

import pytest

from semiconvexity import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "burkholder:p=1,n=2", "--at", "Id")
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2.0, abs=1e-12)
    code, out, _ = run(capsys, "eval", "fp_aniso:p=3", "9,0,0,-3")
    assert code == 0 and json.loads(out)["value"] == 0.0
    code, out, _ = run(capsys, "eval", "burkholder:p=4,n=2", "--at", "Id-bar")
    assert json.loads(out)["value"] == pytest.approx(-0.5, abs=1e-12)
    code, _, err = run(capsys, "eval", "hat(b_sharp)", "1,0,0,-1")
    assert code == 3 and "domain" in err


def test_eval_decompose(capsys):
    code, out, _ = run(capsys, "eval", "burkholder:p=2,n=2", "3,0,0,-2", "--decompose")
    d = json.loads(out)
    assert code == 0
    assert d["signed_singular_values"] == pytest.approx([3.0, -2.0])
    assert d["conformal"]["plus_norm"] == pytest.approx(0.5) and d["conformal"]["minus_norm"] == pytest.approx(2.5)


def test_usage_errors(capsys):
    assert run(capsys, "eval", "burkholder:p=2", "--at", "Id")[0] == 2
    assert run(capsys, "eval", "nonsense", "1,0,0,1")[0] == 2
    assert run(capsys, "eval", "det:n=2", "1,2,3")[0] == 2
    assert run(capsys, "check", "nosuite", "det:n=2")[0] == 2
    assert run(capsys, "reproduce", "prop-9.9")[0] == 2
    assert run(capsys, "check", "roc", "det:n=2", "--samples", "-3")[0] == 2


def test_check_examples(capsys):
    code, out, _ = run(capsys, "check", "roc", "burkholder:p=1.5,n=2", "--samples", "20000")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "check", "pc-point", "burkholder_plus:p=1.5,n=2", "--at", "Id")
    d = json.loads(out)
    assert code == 1 and not d["passed"] and d["witness"] is not None
    code, out, _ = run(capsys, "check", "mono", "burkholder:p=4,n=3", "--samples", "2000")
    assert code == 0


def test_check_radial_and_table_output(capsys):
    code, out, _ = run(capsys, "check", "radial-qc", "burkholder:p=1.5,n=2", "--samples", "3")
    assert code == 0
    code, out, _ = run(capsys, "check", "be", "burkholder:p=3,n=2", "--samples", "500", "--output", "table")
    assert code == 0 and "worst residual" in out and "PASS" in out


def test_reproduce_tables(capsys):
    code, out, _ = run(capsys, "reproduce", "prop-3.8", "--samples", "2000", "--output", "table")
    assert code == 0 and "erratum" in out and "Jensen gap" in out
    code, out, _ = run(capsys, "reproduce", "prop-4.9", "--p", "4", "--output", "json")
    d = json.loads(out)
    assert code == 0 and [r["computed"] for r in d["rows"][:7]] == pytest.approx([1, 0, 0, 0, 0, 1, 2], abs=1e-6)
    code, out, _ = run(capsys, "reproduce", "prop-4.4", "--output", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("id,quantity") and len(lines) > 40


def test_json_is_byte_identical_across_runs_and_threads(capsys):
    argv = ["reproduce", "prop-3.4", "--samples", "3000"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    c = run(capsys, *argv, "--threads", "8")[1]
    assert a == b == c
    argv = ["check", "roc", "burkholder:p=3,n=3", "--samples", "5000"]
    assert run(capsys, *argv)[1] == run(capsys, *argv, "--threads", "8")[1]


def test_timing_is_opt_in(capsys):
    out = run(capsys, "check", "symmetry", "burkholder:p=2,n=2", "--samples", "50")[1]
    assert json.loads(out)["elapsed_s"] is None
    out = run(capsys, "check", "symmetry", "burkholder:p=2,n=2", "--samples", "50", "--timing")[1]
    assert json.loads(out)["elapsed_s"] >= 0.0


def test_seed_environment_variable(monkeypatch, capsys):
    argv = ["check", "roc", "burkholder:p=2,n=2", "--samples", "1000"]
    monkeypatch.setenv("SEMICONVEXITY_SEED", "7")
    assert json.loads(run(capsys, *argv)[1])["seed"] == 7
    assert json.loads(run(capsys, *argv, "--seed", "9")[1])["seed"] == 9
    monkeypatch.setenv("SEMICONVEXITY_SEED", "seven")
    assert run(capsys, *argv)[0] == 2
    monkeypatch.delenv("SEMICONVEXITY_SEED")
    assert json.loads(run(capsys, *argv)[1])["seed"] == 42


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "semiconvexity.cli", "eval", "det:n=2", "1,2,3,4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == pytest.approx(-2.0)

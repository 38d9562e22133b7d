import json
import subprocess
import sys

import pytest

from mubkit.cli import COMMANDS, main
from mubkit.cnum import CMatrix

from goldens import A4, H4

import numpy as np


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mub_export_matches_printed(capsys):
    code, out, _ = run(capsys, "mub", "--p", "2", "--m", "2", "--export")
    assert code == 0
    d = json.loads(out)
    assert d["N"] == 4 and len(d["hadamards"]) == 4
    for j in range(4):
        assert CMatrix.from_json(d["hadamards"][j]).exact_equal(CMatrix.from_exponents(H4[j], 4))
        want = CMatrix.from_exponents(np.diag(A4[j]), 4, np.eye(4, dtype=bool))
        assert CMatrix.from_json(d["phase_matrices"][j]).exact_equal(want)


def test_meanking_grids(capsys):
    code, out, _ = run(capsys, "meanking", "--n", "4", "--grids")
    assert code == 0
    blocks = [b for b in out.strip().split("\n\n")]
    assert [b.splitlines()[0] for b in blocks] == [f"i = {i}" for i in range(5)]
    grid = [list(map(int, r.split())) for r in blocks[2].splitlines()[1:]]
    # rows printed top-down from n = N-1; entry (m, n) sits in column m
    assert grid[3 - 1][2] == 2


def test_verify_line(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--m", "1")
    assert code == 0 and out.strip() == "all N+1 bases pairwise MU: PASS"


@pytest.mark.parametrize("argv", [["verify", "--p", "6"], ["nonsense"], [], ["mub", "--n", "12"],
                                  ["gnum", "--bogus"], ["hadamard", "build", "nosuch:1"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("mubkit: usage error")


@pytest.mark.parametrize("cmd", sorted(COMMANDS))
def test_selftests_pass(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--selftest")
    assert code == 0, out
    assert "FAIL" not in out


def test_seed_determinism(capsys, monkeypatch):
    argv = ["search", "haar", "--n", "3", "--samples", "50"]
    a = run(capsys, "--seed", "5", *argv)[1]
    b = run(capsys, "--seed", "5", *argv)[1]
    c = run(capsys, "--seed", "6", *argv)[1]
    monkeypatch.setenv("MUBKIT_SEED", "5")
    d = run(capsys, *argv)[1]
    assert a == b == d and a != c


def test_flags_after_subcommand(capsys):
    a = run(capsys, "--format", "csv", "gnum", "--max", "8")[1]
    b = run(capsys, "gnum", "--max", "8", "--format", "csv")[1]
    assert a == b and a.splitlines()[0].startswith("N,")
    assert len(a.splitlines()) == 8


def test_out_file(capsys, tmp_path):
    p = tmp_path / "g.json"
    code, out, _ = run(capsys, "gnum", "--max", "10", "--out", str(p))
    assert code == 0 and out == ""
    d = json.loads(p.read_text())
    assert d["primes"] == 4 and "tolerance" in d


def test_reports_carry_tolerances(capsys):
    for argv in (["tomo", "--n", "3", "--trials", "5"], ["hadamard", "check", "F6:0.1,0.2"]):
        d = json.loads(run(capsys, *argv)[1])
        assert any("tol" in k for k in d), d.keys()


def test_hadamard_subcommands(capsys):
    d = json.loads(run(capsys, "hadamard", "defect", "fourier:8")[1])
    assert d["defect"] == 5
    d = json.loads(run(capsys, "hadamard", "equiv", "F6:0,0", "fourier:6")[1])
    assert d["verdict"] == "equivalent"
    assert "tao_s6" in json.loads(run(capsys, "hadamard", "list")[1])["families"]


def test_verification_failure_exit_code(capsys):
    code, out, _ = run(capsys, "hadamard", "muhm", "--n", "9")
    assert code == 1


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "mubkit", "verify", "--n", "5"], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS" in r.stdout


def test_muhm_prime_exits_zero(capsys):
    code, out, _ = run(capsys, "hadamard", "muhm", "--n", "7")
    assert code == 0 and json.loads(out)["maximal"]

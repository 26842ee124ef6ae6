import json
import subprocess
import sys

import pytest

from zerosum.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_jacobi(capsys):
    assert run(capsys, "jacobi", "2", "15")[:2] == (0, "+1\n")
    assert run(capsys, "jacobi", "1", "9")[:2] == (0, "+1\n")
    assert run(capsys, "jacobi", "7", "15")[:2] == (0, "-1\n")
    code, out, err = run(capsys, "jacobi", "3", "15")
    assert code == 2 and out == "" and "unit" in err


def test_weights(capsys):
    assert run(capsys, "weights", "15", "S")[:2] == (0, "1 2 4 8\n")
    code, out, _ = run(capsys, "--json", "weights", "49", "S")
    assert json.loads(out)["size"] == 42
    assert run(capsys, "weights", "15", "nope")[0] == 2
    assert run(capsys, "weights", "1", "U")[0] == 2


def test_sumset(capsys):
    code, out, _ = run(capsys, "sumset", "7", "Q", "1", "1", "1")
    assert code == 0 and out.startswith("Z_n")
    code, out, _ = run(capsys, "--json", "sumset", "5", "Usq", "1", "1", "1")
    assert 0 not in json.loads(out)["sumset"]


def test_davenport(capsys, tmp_path):
    cache = str(tmp_path / "c.jsonl")
    code, out, err = run(capsys, "davenport", "1001", "S", "--cache", cache)
    assert code == 0 and out.startswith("D_S(1001) = 4 exact")
    assert "ms" in err and "ms" not in out
    code, out2, _ = run(capsys, "davenport", "1001", "S", "--cache", cache)
    assert out2 == out
    code, out, _ = run(capsys, "davenport", "77", "L:7", "--json", "--no-cache")
    rec = json.loads(out)
    assert rec["value"] == 4 and rec["status"] == "exact" and "elapsed_ms" not in rec
    code, out, _ = run(capsys, "davenport", "15", "S", "--no-cache")
    assert "= 4 exact" in out


def test_davenport_budget(capsys):
    code, out, _ = run(capsys, "davenport", "1001", "L:7", "--max-nodes", "5", "--no-cache")
    assert code == 3 and "lower_bound" in out


def test_e_constant(capsys):
    code, out, _ = run(capsys, "e-constant", "15", "U", "--no-cache")
    assert code == 0 and "= 17 exact" in out
    assert run(capsys, "e-constant", "77", "U", "--no-cache")[0] == 3


def test_extremal(capsys):
    code, out, _ = run(capsys, "extremal", "77", "S", "--no-cache")
    assert code == 0 and "4 extremal classes" in out
    code, out, _ = run(capsys, "extremal", "77", "L:7", "--no-cache", "--json")
    assert json.loads(out)["unmatched"] == []


def test_verify_and_perturb(capsys):
    code, out, _ = run(capsys, "verify", "core", "--no-cache")
    assert code == 0 and "FAIL" not in out
    for item in ("D.S.77=1", "D.S.77=-1", "weights.S.15=1", "E.U.15=-1"):
        code, out, _ = run(capsys, "verify", "core", "--no-cache", "--perturb", item)
        assert code == 1 and out.count("FAIL") == 1
    assert run(capsys, "verify", "core", "--perturb", "missing=1")[0] == 2
    assert run(capsys, "verify", "core", "--perturb", "D.S.77=x")[0] == 2


def test_jobs_same_stdout(capsys):
    _, a, _ = run(capsys, "verify", "extremal", "--no-cache", "--jobs", "1")
    _, b, _ = run(capsys, "verify", "extremal", "--no-cache", "--jobs", "3")
    assert a == b


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "zerosum", "jacobi", "3", "15"], capture_output=True, text=True)
    assert p.returncode == 2
    p = subprocess.run([sys.executable, "-m", "zerosum", "jacobi", "2", "15"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "+1\n"


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2

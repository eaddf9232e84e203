import json
import subprocess
import sys

import pytest

from equihom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gset_product(capsys):
    code, out, _ = run(capsys, "gset", "prod", "--group", "c4", "--orbits", "C2,C2")
    assert code == 0 and out.strip() == "2 x C4/C2"


def test_point_homology_json(capsys):
    code, out, _ = run(capsys, "point-homology", "--deg", "1,-1", "--coeff", "f2", "--format", "json")
    tree = json.loads(out)
    assert code == 0 and tree["levels"]["C2"]["labels"] == ["u_s"]


def test_pure_commands(capsys):
    assert run(capsys, "pure", "norm", "--model", "bur", "--x", "abar3")[1].strip() == "-abar3^2  in 6ρ₂"
    code, out, _ = run(capsys, "pure", "dl", "--model", "bur", "--x", "abar2", "--i", "3")
    assert code == 0 and out.startswith("abar5 mod decomposables")
    code, out, _ = run(capsys, "pure", "conorm", "--model", "bur", "--x", "abar1")
    assert out.strip() == "abar1@1 + 1@abar1"


def test_demos(capsys):
    code, out, _ = run(capsys, "demo", "coinduced-c4")
    assert code == 0 and "N(ybar1,ybar1)" in out
    code, out, _ = run(capsys, "demo", "dual-steenrod", "--format", "json")
    assert len(json.loads(out)["cells"]) == 9


def test_check(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0 and out.count("PASS") == len(out.strip().splitlines())


@pytest.mark.parametrize("argv", [
    ["demo", "bbur", "--trunc", "17"],
    ["gset", "prod", "--group", "c6", "--orbits", "e"],
    ["nonsense"],
    ["pure", "expand", "--model", "bur", "--trunc", "40"],
    ["gset", "coind", "--group", "c64", "--orbits", "e", "--from", "C2"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("argv", [
    ["pure", "dl", "--model", "bur", "--x", "abar1*abar2", "--i", "5"],
    ["pure", "mult", "--model", "bur", "--x", "abar1", "--y", "zz"],
    ["basis", "homology", "--basis", "x:2:2+1*s", "--group", "c2", "--sub", "C2", "--k", "1"],
])
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_environment_truncation(monkeypatch, capsys):
    monkeypatch.setenv("EQUIHOM_TRUNC", "99")
    assert run(capsys, "demo", "bbur")[0] == 2


def test_repeated_runs_are_byte_identical():
    cmd = [sys.executable, "-m", "equihom", "demo", "bbur", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a

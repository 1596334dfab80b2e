import json
import subprocess
import sys

import pytest

from unitforce import __version__
from unitforce.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "7")
    assert code == 0
    assert json.loads(out)["squares"] == ["2", "1", "1", "1"]
    code, out, _ = run(capsys, "decompose", "3/4", "--plain")
    assert code == 0 and out.startswith("input: 3/4")


def test_usage_errors(capsys):
    assert run(capsys, "decompose", "-1")[0] == 2
    assert run(capsys, "decompose", "x/y")[0] == 2
    assert run(capsys, "nope")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "verify", "/nonexistent.json")[0] == 2
    assert run(capsys, "derive", "1+")[0] == 2
    assert run(capsys, "build")[0] == 2


def test_config_fig2(capsys):
    code, out, _ = run(capsys, "config", "fig2")
    data = json.loads(out)
    assert code == 0
    assert len(data["points"]) == 10
    assert data["validation"]["ok"]
    assert data["validation"]["checked"] == 45
    assert len(data["claims"]) == 44 and data["target"] == ["x", "y", "1/16"] and data["target_bound"]


def test_config_fig1_scaled(capsys):
    code, out, _ = run(capsys, "config", "fig1", "--scale", "3/2")
    assert code == 0 and json.loads(out)["validation"]["ok"]


def test_estimate(capsys):
    code, out, _ = run(capsys, "estimate", "--sqdist", "9/4")
    data = json.loads(out)
    assert code == 0 and data["points"] == 19


def test_build_verify_export(tmp_path, capsys):
    w = tmp_path / "w.json"
    code, _, err = run(capsys, "build", "--coords", "0,0,0,0,0,0,0,0", "1,1/2,0,0,0,0,0,0",
                       "-o", str(w))
    assert code == 0 and "built" in err
    code, out, _ = run(capsys, "verify", str(w))
    assert code == 0 and json.loads(out)["ok"]
    again = tmp_path / "again.json"
    assert run(capsys, "export", str(w), "--format", "json", "-o", str(again))[0] == 0
    assert json.loads(again.read_text()) == json.loads(w.read_text())
    code, out, _ = run(capsys, "export", str(w), "--format", "dimacs")
    assert code == 0
    assert any(line.startswith("p edge ") for line in out.splitlines())
    assert run(capsys, "export", str(w), "--format", "graphml", "-o", str(tmp_path / "w.graphml"))[0] == 0


def test_build_pair_files_and_budget(tmp_path, capsys):
    x, y = tmp_path / "x.json", tmp_path / "y.json"
    x.write_text(json.dumps(["0"] * 8))
    y.write_text(json.dumps(["1", "1", "0", "0", "0", "0", "0", "0"]))
    code, _, err = run(capsys, "build", "--pair", str(x), str(y), "--budget", "10", "-o", "-")
    assert code == 3 and "BudgetExceeded" in err


def test_verify_tampered(tmp_path, capsys):
    w = tmp_path / "w.json"
    run(capsys, "build", "--coords", "0,0,0,0,0,0,0,0", "3/2,0,0,0,0,0,0,0", "-o", str(w))
    data = json.loads(w.read_text())
    data["points"][5][0] = "7/3"
    w.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(w))
    assert code == 1 and not json.loads(out)["ok"]


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "sqrt(3)")
    assert code == 0 and "R_PYTH_MINUS" in out and "interval check" in out
    code, out, _ = run(capsys, "derive", "sqrt(2)", "--n", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["check"]["ok"] and data["derivation"]["rule"] == "R_PYTH_MINUS"
    assert run(capsys, "derive", "1-2")[0] == 2


def test_falsify(tmp_path, capsys):
    w = tmp_path / "w.json"
    run(capsys, "build", "--coords", "0,0,0,0,0,0,0,0", "3/2,0,0,0,0,0,0,0", "-o", str(w))
    code, out, _ = run(capsys, "falsify", str(w), "--restarts", "2", "--max-iters", "200")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "NO_COUNTEREXAMPLE" and len(data["records"]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "unitforce", "decompose", "7", "--plain"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "squares" in res.stdout

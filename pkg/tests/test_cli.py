import json
import subprocess
import sys

import pytest

from muldep import __version__
from muldep.cli import COMMANDS, main, run


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return json.loads(out)


def test_deptest_example():
    out = ok(["deptest", "--alphas", "2,3,6"])
    assert out["dependent"] is True and out["k"] == [1, 1, -1]
    assert out["version"] == __version__


def test_stbound_example():
    out = ok(["stbound", "--n", "2", "--s", "1", "--d", "1", "--hf", "0", "--disc", "1", "--ps", "1", "--nsb", "1"])
    assert float(out["log_C"]) == pytest.approx(346.9, abs=0.05)


def test_missing_config():
    code, out, err = run(["scan12", "--config", "missing.json"])
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "invalid_input"


def test_config_roundtrip(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alphas": "4,8"}))
    assert ok(["deptest", "--config", str(cfg)])["k"] == [3, -2]
    cfg.write_text(json.dumps({"alphas": "4,8", "bogus": 1}))
    code, _, err = run(["deptest", "--config", str(cfg)])
    assert code == 2 and "bogus" in json.loads(err)["message"]


@pytest.mark.parametrize(
    "argv",
    [
        ["height", "--x", "0"],
        ["deptest", "--alphas", "2,zz"],
        ["deptest"],
        ["stbound", "--n", "1", "--s", "1"],
        ["nosuch"],
        [],
    ],
)
def test_input_errors(argv):
    code, out, err = run(argv)
    assert code == 2 and out == ""
    if err:
        assert "error" in json.loads(err)


def test_stbound_error_names_field():
    code, _, err = run(["stbound", "--n", "2", "--s", "1", "--d", "3"])
    assert code == 2 and json.loads(err)["field"] == "d"


def test_hypothesis_exit():
    argv = ["scan12", "--f", "1,0", "--f", "1,3,2", "--gamma", "2", "--H", "log:4"]
    code, _, err = run(argv)
    assert code == 3 and json.loads(err)["error"] == "hypothesis"
    code, out, _ = run(argv + ["--override"])
    assert code == 0 and json.loads(out)["override"] is True


def test_resource_exit():
    code, _, err = run(["enum", "--H", "log:1000", "--enum-cap", "10"])
    assert code == 4 and json.loads(err)["error"] == "resource"


def test_small_commands():
    assert ok(["height", "--x", "3/4"])["height"].startswith("1.386")
    assert ok(["gdivmember", "--x", "-2", "--gamma", "4"])["witness"]["m"] == 2
    assert ok(["epsmember", "--x", "5", "--gamma", "2", "--eps", "log:2"])["verdict"] == "OUT"
    assert ok(["lfcheck", "--f1", "1,2,0", "--f2", "1,3,2"])["relation"]["k"] == [-1, 1]
    out = ok(["sets", "--f", "1,0,-1", "--f", "1,0,-4", "--gamma", "2", "--eps", "0.1"])
    assert out["s_f_gamma_eps"]["places"] == ["inf", 2, 3]
    out = ok(["hsearch", "--f", "1,0,7", "--H", "log:20"])
    assert {"m": 7, "x": "11", "y": "2"} in out["solutions"] and len(out["solutions"]) == 8


def test_scan_csv():
    code, out, _ = run(["scan12", "--f", "1,0,-1", "--f", "1,0,-4", "--gamma", "2", "--eps", "0.1", "--H", "log:6", "--format", "csv"])
    assert code == 0 and out.splitlines()[0].startswith("alpha,")


def test_determinism_across_workers():
    base = ["scan12", "--f", "1,0,-1", "--f", "1,0,-4", "--gamma", "2", "--eps", "0.1", "--H", "log:12"]
    outs = {run(base + ["--workers", str(w)])[1] for w in (1, 1, 4)}
    assert len(outs) == 1


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_help(name):
    proc = subprocess.run([sys.executable, "-m", "muldep", name, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    first = COMMANDS[name][1].split()[0]
    assert first in proc.stdout


def test_main_writes_streams(capsys):
    assert main(["deptest", "--alphas", "2,3"]) == 0
    assert json.loads(capsys.readouterr().out)["dependent"] is False

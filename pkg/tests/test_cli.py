"""Command line behavior: exit codes, file round trips, error mapping."""

import json

import numpy as np
import pytest

from aarlcp.cli import main, read_instance, read_policy

GOLDEN = {
    "n": 2,
    "k": 2,
    "g": 4,
    "M": [[1, -1], [1, -1]],
    "q": [-1, -1],
    "T": [[1, 0], [0, 1]],
    "Theta": [[1, -1], [-1, 1], [1, 0], [-1, 0]],
    "zeta": [0, 0, -2, -2],
}

PSD_DESK = {
    "n": 2,
    "k": 2,
    "g": 4,
    "M": [[2, 0], [0, 0]],
    "q": [-2, 1],
    "T": [[1, 0], [0, 1]],
    "Theta": [[1, 0], [-1, 0], [0, 1], [0, -1]],
    "zeta": [-0.5, -0.5, -0.5, -0.5],
}

MIXED_1D = {
    "n": 1,
    "k": 1,
    "g": 2,
    "M": [[2]],
    "q": [-4],
    "T": [[1]],
    "Theta": [[1], [-1]],
    "zeta": [-1, -1],
    "mixed": {
        "m": 1,
        "V": [[0]],
        "W": [[1]],
        "N": [[1]],
        "p": [-3],
        "P": [[0]],
        "y_adjustable": True,
    },
}


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_validate_ok(tmp_path, capsys):
    path = write(tmp_path, "inst.json", GOLDEN)
    assert main(["validate", path]) == 0
    out = capsys.readouterr().out
    assert "compact: yes" in out
    assert "implicit equality rows: 1 2" in out
    assert "status: ok" in out


def test_validate_bad_set(tmp_path):
    bad = dict(GOLDEN)
    bad["zeta"] = [0, 0, -2, 2]  # origin outside
    path = write(tmp_path, "inst.json", bad)
    assert main(["validate", path]) == 1


def test_linhull_output(tmp_path, capsys):
    path = write(tmp_path, "inst.json", GOLDEN)
    assert main(["linhull", path]) == 0
    out = capsys.readouterr().out
    assert "hull dimension: 1" in out
    assert "v1: 1 1" in out


def test_solve_verify_round_trip(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", GOLDEN)
    pol = str(tmp_path / "pol.json")
    assert main(["solve", inst, "--out", pol]) == 0
    out = capsys.readouterr().out
    assert "status: feasible" in out
    assert "path: tree search" in out

    saved = json.loads((tmp_path / "pol.json").read_text())
    assert saved["status"] == "feasible"
    assert saved["x"] == [1, 1]
    assert saved["diagnostics"]["nodes_explored"] >= 1

    assert main(["verify", inst, pol]) == 0
    out = capsys.readouterr().out
    assert "verdict: verified" in out
    assert "support: 1 2" in out


def test_verify_rejects_broken_policy(tmp_path):
    inst = write(tmp_path, "inst.json", GOLDEN)
    # wrong rule: verifier must say violations, exit 1
    bad = {
        "status": "feasible",
        "x": [1, 1],
        "r": [2.0, 1.0],
        "D": [[0.0, 0.0], [0.0, 0.0]],
    }
    pol = write(tmp_path, "pol.json", bad)
    assert main(["verify", inst, pol]) == 1


def test_verify_input_errors(tmp_path):
    inst = write(tmp_path, "inst.json", GOLDEN)
    neg = {"status": "feasible", "x": [1, 1], "r": [-2.0, 1.0], "D": [[0, 0], [0, 0]]}
    assert main(["verify", inst, write(tmp_path, "neg.json", neg)]) == 2
    rec = {"status": "infeasible"}
    assert main(["verify", inst, write(tmp_path, "rec.json", rec)]) == 2
    shape = {"status": "feasible", "x": [1], "r": [1.0], "D": [[0.0]]}
    assert main(["verify", inst, write(tmp_path, "shape.json", shape)]) == 2


def test_solve_infeasible_exit(tmp_path):
    infeasible = {
        "n": 2,
        "k": 1,
        "g": 2,
        "M": [[0, 0], [1, 0]],
        "q": [0.5, -0.5],
        "T": [[1], [1]],
        "Theta": [[1], [-1]],
        "zeta": [0, 0],
    }
    path = write(tmp_path, "inst.json", infeasible)
    assert main(["solve", path]) == 1


def test_solve_psd_routing(tmp_path, capsys):
    desk = write(tmp_path, "desk.json", PSD_DESK)
    assert main(["solve", desk, "--psd", "force"]) == 0
    out = capsys.readouterr().out
    assert "path: forced support" in out
    assert "positive-capable rows: 1" in out

    golden = write(tmp_path, "golden.json", GOLDEN)
    assert main(["solve", golden, "--psd", "force"]) == 2
    assert main(["solve", golden, "--psd", "auto"]) == 0

    assert main(["solve", desk, "--psd", "off"]) == 0
    out = capsys.readouterr().out
    assert "path: tree search" in out


def test_solve_mixed_instance(tmp_path, capsys):
    path = write(tmp_path, "mixed.json", MIXED_1D)
    out_path = str(tmp_path / "pol.json")
    assert main(["solve", path, "--out", out_path]) == 0
    saved = json.loads((tmp_path / "pol.json").read_text())
    assert saved["r"][0] == pytest.approx(0.5)
    assert "E" in saved and "s" in saved
    assert main(["verify", path, out_path]) == 0
    # the shortcut cannot be forced onto a mixed instance
    assert main(["solve", path, "--psd", "force"]) == 2


def test_solve_node_limit_exit(tmp_path):
    path = write(tmp_path, "inst.json", GOLDEN)
    assert main(["solve", path, "--node-limit", "1"]) == 3


def test_oracle_command(tmp_path, capsys):
    path = write(tmp_path, "inst.json", GOLDEN)
    assert main(["oracle", path]) == 0
    out = capsys.readouterr().out
    assert "supports tested: 4" in out
    assert "support: 1 2" in out
    assert main(["oracle", path, "--limit", "1"]) == 2


def test_export_command(tmp_path, capsys):
    one_d = {
        "n": 1,
        "k": 1,
        "g": 2,
        "M": [[2]],
        "q": [-4],
        "T": [[1]],
        "Theta": [[1], [-1]],
        "zeta": [-1, -1],
    }
    inst = write(tmp_path, "inst.json", one_d)
    out_path = str(tmp_path / "model.lp")
    assert main(["export", inst, "--big-m", "10", "--out", out_path]) == 0
    text = (tmp_path / "model.lp").read_text()
    assert " sl1: r1 - 10 x1 <= 0" in text.splitlines()

    assert main(["export", inst, "--format", "mps"]) == 0
    assert "ENDATA" in capsys.readouterr().out

    mixed = write(tmp_path, "mixed.json", MIXED_1D)
    assert main(["export", mixed]) == 2


def test_input_error_handling(tmp_path):
    assert main(["validate", str(tmp_path / "missing.json")]) == 2

    nan = dict(GOLDEN)
    nan["q"] = [float("nan"), -1]
    path = write(tmp_path, "nan.json", nan)
    assert main(["validate", path]) == 2

    short = {k: v for k, v in GOLDEN.items() if k != "zeta"}
    assert main(["validate", write(tmp_path, "short.json", short)]) == 2

    wrong = dict(GOLDEN)
    wrong["n"] = 3  # declared size disagrees with the arrays
    assert main(["validate", write(tmp_path, "wrong.json", wrong)]) == 2

    notjson = tmp_path / "bad.json"
    notjson.write_text("{nope")
    assert main(["validate", str(notjson)]) == 2


def test_usage_errors_return_two():
    assert main([]) == 2
    assert main(["frobnicate"]) == 2


def test_read_instance_round_trip(tmp_path):
    path = write(tmp_path, "inst.json", MIXED_1D)
    inst = read_instance(path)
    assert inst.mixed is not None
    assert inst.mixed.m == 1
    assert inst.n == 1


def test_policy_floats_round_trip(tmp_path):
    inst = write(tmp_path, "inst.json", GOLDEN)
    out_path = str(tmp_path / "pol.json")
    assert main(["solve", inst, "--out", out_path]) == 0
    pol = read_policy(out_path)
    saved = json.loads((tmp_path / "pol.json").read_text())
    # JSON floats use the shortest round-trip form; equality must be exact
    assert pol.r[0] == saved["r"][0]
    assert pol.D[0, 0] == saved["D"][0][0]

import json

import pytest

from spanreg.cli import EXIT_FAIL, EXIT_INPUT, EXIT_NONE, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_generate_solve_verify_round_trip(tmp_path, capsys):
    inst = tmp_path / "g.json"
    cert = tmp_path / "c.json"
    dot = tmp_path / "c.dot"
    assert run(capsys, "generate", "extremal_one", "-p", "n=30", "-p", "r=4", "--out", str(inst))[0] == EXIT_OK
    code, _ = run(capsys, "solve", str(inst), "--r", "4", "--out", str(cert), "--dot", str(dot))
    assert code == EXIT_OK
    data = json.loads(cert.read_text())
    assert data["ok"] and data["r"] == 4
    assert dot.read_text().startswith("graph certificate {")
    code, out = run(capsys, "verify", str(inst), str(cert))
    assert code == EXIT_OK and json.loads(out.out)["ok"]


@pytest.mark.parametrize("solver", ["extremal_one", "oracle"])
def test_named_solvers(tmp_path, capsys, solver):
    inst = tmp_path / "g.json"
    run(capsys, "generate", "extremal_one", "-p", "n=12", "-p", "r=2", "--out", str(inst))
    code, out = run(capsys, "solve", str(inst), "--r", "2", "--solver", solver)
    assert code == EXIT_OK


def test_oracle_none_and_blowup(tmp_path, capsys):
    inst = tmp_path / "t.json"
    run(capsys, "generate", "tightness", "-p", "n=8", "-p", "r=2", "-p", "slack=1", "--out", str(inst))
    assert run(capsys, "oracle", str(inst), "--r", "2")[0] == EXIT_NONE
    div = tmp_path / "d.json"
    run(capsys, "generate", "divisibility", "-p", "n=10", "--out", str(div))
    code, out = run(capsys, "oracle", str(div), "--blowup", "2")
    assert code == EXIT_NONE and json.loads(out.out)["status"] == "none"


def test_stage_failure_exit_code(tmp_path, capsys):
    inst = tmp_path / "g.json"
    run(capsys, "generate", "extremal_one", "-p", "n=36", "-p", "r=3", "-p", "c=1", "--out", str(inst))
    code, out = run(capsys, "solve", str(inst), "--r", "3", "--solver", "extremal_one")
    assert code == EXIT_FAIL
    rep = json.loads(out.out)
    assert not rep["ok"] and rep["stage"]


def test_gadget_and_regularity(tmp_path, capsys):
    code, out = run(capsys, "gadget", "--r", "3", "--kind", "bridge")
    assert code == EXIT_OK and all(x["ok"] for x in json.loads(out.out))
    inst = tmp_path / "g.json"
    run(capsys, "generate", "dense_random", "-p", "n=60", "-p", "r=2", "--out", str(inst))
    code, out = run(capsys, "regularity", str(inst), "--ell", "4")
    assert code == EXIT_OK and json.loads(out.out)["ell"] == 4
    code, out = run(capsys, "regularity", str(inst), "--a", *map(str, range(5)), "--b",
                    *map(str, range(5, 10)), "--mode", "exact", "--eps", "1/2")
    assert code in (EXIT_OK, EXIT_FAIL) and "regular" in json.loads(out.out)


def test_sweep_verb(tmp_path, capsys):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"cells": [{"template": "dense_random", "params": {"n": 8, "r": 2},
                                           "seeds": 2, "solvers": ["oracle"]}]}))
    code, out = run(capsys, "sweep", str(spec))
    assert code == EXIT_OK and "dense_random" in out.out


def test_bad_input_exits_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == EXIT_INPUT
    with pytest.raises(SystemExit) as info:
        main(["generate", "nope"])
    assert info.value.code == EXIT_INPUT
    inst = tmp_path / "g.json"
    inst.write_text(json.dumps({"n": 5, "edges": [[0, 1]]}))
    code, out = run(capsys, "solve", str(inst), "--r", "2")
    assert code == EXIT_INPUT and "minimum degree" in out.err

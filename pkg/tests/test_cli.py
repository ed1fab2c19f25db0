import json
import shutil
import subprocess
import sys

import pytest

from quadzeros.cli import COMMANDS, cap_to_level, main
from quadzeros.errors import SchemaError
from quadzeros.fields import QQ, FunctionField
from quadzeros.oracle import tamper
from quadzeros.problem import canonical, load_problem, problem_from_json, problem_json

HYP2 = [["0", "1/2"], ["1/2", "0"]]


def write(tmp_path, obj, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_example(tmp_path, capsys):
    p = write(tmp_path, {"N": 2, "F": HYP2, "S": [["X1"]]})
    code, out, _ = run_cli(["solve", p], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["certificate"]["outputs"]["z"] == ["1", "0"]
    assert doc["verification"]["pass"] and doc["command"] == "solve"


def test_anisotropic_exit_2(tmp_path, capsys):
    p = write(tmp_path, {"N": 2, "F": [["1", "0"], ["0", "1"]]})
    code, _, err = run_cli(["zeros", p], capsys)
    assert code == 2 and "no nontrivial zero below cap" in err


def test_schema_errors_exit_1(tmp_path, capsys):
    p = write(tmp_path, {"N": 2, "F": [["0", "1"], ["2", "0"]]})
    code, _, err = run_cli(["witt", p], capsys)
    assert code == 1 and "(1,2)" in err
    p = write(tmp_path, {"field": {"kind": "Fq_t", "q": 2}, "N": 2, "F": HYP2})
    code, _, err = run_cli(["witt", p], capsys)
    assert code == 1 and "characteristic 2 unsupported" in err
    p = write(tmp_path, '{"N": 2,\n "F": [[}')
    code, _, err = run_cli(["witt", p], capsys)
    assert code == 1 and "line 2" in err


def test_budget_exit_3(tmp_path, capsys):
    p = write(tmp_path, {"N": 3, "F": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    code, _, err = run_cli(["zeros", p, "--budget", "3"], capsys)
    assert code == 3 and "budget" in err


def test_constants_table(capsys):
    code, out, _ = run_cli(["constants", "--L", "3", "--j", "4"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["B"]["2"]["value"][0].startswith("1.12837916709551")
    assert doc["C"]["exact"] == "1"
    code, out, _ = run_cli(["constants", "--q", "3", "--L", "2"], capsys)
    assert json.loads(out)["delta"] == 0


def test_every_command_runs(tmp_path, capsys):
    p = write(tmp_path, {"N": 3, "F": [["0", "1/2", "0"], ["1/2", "0", "0"], ["0", "0", "1"]],
                         "S": [["X1 + X3"]]})
    for name in ("solve", "zeros", "flags", "basis-outside", "siegel", "witt"):
        code, out, _ = run_cli([name, p], capsys)
        assert code == 0, name
        assert json.loads(out)["verification"]["pass"]
    q = write(tmp_path, {"field": {"kind": "Fq_t", "q": 3}, "N": 2,
                         "F": [["t", "0"], ["0", "1"]]}, "ff.json")
    code, out, _ = run_cli(["ff-orth", q], capsys)
    assert code == 0 and json.loads(out)["verification"]["pass"]
    assert set(COMMANDS) >= {"solve", "zeros", "flags", "basis-outside", "siegel", "witt",
                             "constants", "oracle-verify", "ff-orth"}


def test_oracle_verify_and_tamper(tmp_path, capsys):
    p = write(tmp_path, {"N": 2, "F": HYP2, "S": [["X1 - X2"]]})
    cert = str(tmp_path / "c.json")
    assert main(["zeros", p, "--out", cert]) == 0
    code, out, _ = run_cli(["oracle-verify", cert], capsys)
    assert code == 0 and json.loads(out)["pass"]
    bad = tamper(json.loads(open(cert).read()), "point")
    badp = write(tmp_path, bad, "bad.json")
    code, out, _ = run_cli(["oracle-verify", badp], capsys)
    assert code == 4 and not json.loads(out)["pass"]


def test_determinism(tmp_path):
    p = write(tmp_path, {"N": 4, "F": [["0", "1/2", "0", "0"], ["1/2", "0", "0", "0"],
                                       ["0", "0", "0", "1/2"], ["0", "0", "1/2", "0"]],
                         "S": [["X1 + X2 + X3"]]})
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        assert main(["flags", p, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_roundtrip(tmp_path):
    obj = {"field": {"kind": "Fq_t", "q": 5}, "N": 3,
           "F": [["t", "1/t", "0"], ["1/t", "0", "2"], ["0", "2", "t^2 + 1"]],
           "V": [["1", "0", "t"], ["0", "1", "1"]],
           "S": [["X1^2 - t*X2*X3"], ["X1", "X2"]], "options": {"cap": 2.0}}
    once = problem_json(problem_from_json(obj))
    twice = problem_json(problem_from_json(once))
    assert once == twice
    path = write(tmp_path, canonical(once))
    assert problem_json(load_problem(path)) == once


def test_problem_validation_messages():
    with pytest.raises(SchemaError, match="unknown keys"):
        problem_from_json({"N": 2, "G": 1})
    with pytest.raises(SchemaError, match=r"F\[1\]\[0\]"):
        problem_from_json({"N": 2, "F": [["1", "0"], ["x?", "1"]]})
    with pytest.raises(SchemaError, match="linearly dependent"):
        problem_from_json({"N": 2, "F": HYP2, "V": [["1", "1"], ["2", "2"]]})
    with pytest.raises(SchemaError, match="not homogeneous"):
        problem_from_json({"N": 2, "F": HYP2, "S": [["X1 + X2^2"]]})
    with pytest.raises(SchemaError, match="options.cap"):
        problem_from_json({"N": 2, "F": HYP2, "options": {"cap": -1}})


def test_cap_semantics():
    assert cap_to_level(None, QQ) is None
    assert cap_to_level(0.0, QQ) == 1
    assert cap_to_level(1.1, QQ) == 3
    assert cap_to_level(2.0, FunctionField(3)) == 3


def test_generate(tmp_path, capsys):
    code, out, _ = run_cli(["generate", "--count", "3", "--kind", "ff", "--seed", "4",
                            "--dir", str(tmp_path / "c")], capsys)
    paths = out.split()
    assert code == 0 and len(paths) == 3
    for path in paths:
        load_problem(path)


@pytest.mark.skipif(shutil.which("quadzeros") is None, reason="console script not installed")
def test_console_script(tmp_path):
    p = write(tmp_path, {"N": 2, "F": HYP2, "S": [["X1"]]})
    r = subprocess.run(["quadzeros", "solve", p], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["verification"]["pass"]
    r = subprocess.run([sys.executable, "-m", "quadzeros.cli", "--version"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()

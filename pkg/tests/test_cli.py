import json

import numpy as np
import pytest

from fatmax.cli import BUDGET, CONFIG_ERROR, OK, VIOLATION, main
from fatmax.core import PartialClass, SampledClass, save_class
from fatmax.generators import cube_class


@pytest.fixture
def cube3(tmp_path):
    p = tmp_path / "cube3.json"
    save_class(cube_class(3), p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_fat_cube(capsys, cube3):
    code, out = run(capsys, "fat", "--input", cube3, "--gamma", "1")
    res = json.loads(out)
    assert code == OK and res["results"][0]["dimension"] == 3
    assert res["generator_version"] and "seed" in res


def test_faat_multiple_gammas_csv(capsys, cube3):
    code, out = run(capsys, "faat", "--input", cube3, "--gamma", "1", "2", "--format", "csv")
    lines = out.splitlines()
    assert code == OK and lines[0].startswith("# seed=")
    assert lines[2:] == ["1,3,1,0", "2,0,1,0"]


def test_generated_input(capsys):
    code, out = run(capsys, "fat", "--generate", "grid:5x3", "--seed", "4", "--gamma", "1")
    assert code == OK and json.loads(out)["seed"] == 4
    assert main(["fat", "--generate", "grid:5x3", "--gamma", "1"]) == CONFIG_ERROR


def test_vc(capsys, tmp_path):
    p = tmp_path / "p.json"
    save_class(PartialClass([[1, 1, "*"], [0, "*", 1]]), p)
    code, out = run(capsys, "vc", "--input", str(p))
    assert code == OK and json.loads(out)["dimension"] == 1


def test_cover(capsys, tmp_path):
    p = tmp_path / "f.json"
    save_class(SampledClass(np.array([[0.0, 0], [1, 1], [2, 2]])), p)
    code, out = run(capsys, "cover", "--input", str(p), "--t", "1", "0.5", "--p", "inf", "2")
    sizes = [c["size"] for c in json.loads(out)["covers"]]
    assert code == OK and sizes == [1, 3, 1, 3]


def test_cover_budget_exit(capsys, tmp_path):
    p = tmp_path / "f.json"
    save_class(SampledClass(np.arange(30.0).reshape(30, 1)), p)
    code, out = run(capsys, "cover", "--input", str(p), "--t", "0.1")
    assert code == BUDGET and json.loads(out)["covers"][0]["budget_exceeded"]


def test_max(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_class(SampledClass(np.array([[1.0, -1]])), a)
    save_class(SampledClass(np.array([[-1.0, 1]])), b)
    code, out = run(capsys, "max", "--input", str(a), str(b), "--gamma", "1")
    res = json.loads(out)
    assert code == OK and res["class"]["values"] == [[1, 1]]
    assert res["fat"][0]["components"] == [0, 0]
    out_path = tmp_path / "m.json"
    assert main(["max", "--input", str(a), "--k", "3", "--out", str(out_path)]) == OK
    assert json.loads(out_path.read_text())["class"]["values"] == [[1, -1]]


def test_disambiguate(capsys, tmp_path):
    p = tmp_path / "p.json"
    save_class(PartialClass([[0, "*"], ["*", 1]]), p)
    code, out = run(capsys, "disambiguate", "--input", str(p))
    res = json.loads(out)
    assert code == OK and res["vc"] == 0 and res["disambiguation"]["total"] == [[0, 1]]
    code, out = run(capsys, "disambiguate", "--input", str(p), "--method", "singleton")
    assert code == OK and json.loads(out)["size"] == 1


def test_verify_single_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "pointwise", "--seed", "3", "--format", "csv")
    assert code == OK and "pointwise" in out


def test_verify_all_seed7(capsys):
    code, out = run(capsys, "verify", "--suite", "all", "--seed", "7")
    res = json.loads(out)
    assert code == OK
    assert len(res["suites"]) == 12 and all(s["violations"] == 0 for s in res["suites"])


def test_probe_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["probe-conjecture", "--k", "3", "--trials", "50", "--seed", "9", "--out", str(a)]) == OK
    assert main(["probe-conjecture", "--k", "3", "--trials", "50", "--seed", "9", "--out", str(b)]) == OK
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "# seed=9 generator_version=1" and len(lines) == 52
    assert "slack_THM1" in lines[1]


def test_probe_needs_seed():
    assert main(["probe-conjecture", "--k", "2"]) == CONFIG_ERROR


def test_lower_bound_search(capsys):
    code, out = run(capsys, "lower-bound-search", "--d", "1", "--k", "2", "--m-max", "4")
    res = json.loads(out)
    assert code == OK and res["size"] == 2 and len(res["certificate"]["witnesses"]) == 4


def test_maurey(capsys):
    code, out = run(capsys, "maurey", "--d", "5", "--t", "0.8", "--targets", "300")
    net = json.loads(out)["nets"][0]
    assert code == OK and net["holds"] and net["terms"] == 2


def test_budget_exit(capsys, tmp_path):
    p = tmp_path / "c.json"
    save_class(cube_class(6), p)
    code, out = run(capsys, "faat", "--input", str(p), "--gamma", "1", "--budget-nodes", "5")
    assert code == BUDGET and json.loads(out)["results"][0]["budget_exceeded"]


@pytest.mark.parametrize("argv", [
    ["fat", "--gamma", "1"],
    ["fat", "--input", "/nonexistent.json", "--gamma", "1"],
    ["fat", "--generate", "cube:2", "--gamma", "-1"],
    ["cover", "--generate", "cube:2", "--t", "1", "--p", "0.5"],
    ["verify", "--suite", "nope"],
    ["bogus"],
    ["max", "--generate", "cube:2"],
    ["disambiguate", "--generate", "cube:2"],
])
def test_config_errors(argv, capsys):
    assert main(argv) == CONFIG_ERROR


def test_schema_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"values": [[1, 2], [3]]}))
    assert main(["fat", "--input", str(p), "--gamma", "1"]) == CONFIG_ERROR
    assert "ragged" in capsys.readouterr().err


def test_violation_code_constant():
    assert (OK, CONFIG_ERROR, VIOLATION, BUDGET) == (0, 1, 2, 3)

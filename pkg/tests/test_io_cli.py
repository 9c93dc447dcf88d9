import json
import math

import pytest

from nashcover import InvalidInputError, Solution, io
from nashcover.cli import main
from nashcover.generators import KINDS, GenSpec, generate

from conftest import CUBE_ROOT_12

EXAMPLE = {
    "format_version": 1,
    "n": 3,
    "T": 2,
    "families": [
        {"kind": "explicit", "sets": [[0, 1], [2]]},
        {"kind": "explicit", "sets": [[0], [1, 2]]},
    ],
}


@pytest.fixture
def files(tmp_path):
    inst = tmp_path / "inst.json"
    inst.write_text(json.dumps(EXAMPLE))
    init = tmp_path / "init.json"
    init.write_text(json.dumps({"sets": [[2], [0]]}))
    return tmp_path, inst, init


def test_float_formatting():
    assert io.dumps(1.0) == "1.0\n"
    assert io.dumps(0.1) == "0.10000000000000001\n"
    assert io.dumps([1, 2.5, None, True, "a"]) == '[1, 2.5, null, true, "a"]\n'
    with pytest.raises(InvalidInputError):
        io.dumps(math.inf)


@pytest.mark.parametrize("kind", KINDS)
def test_instance_round_trip(kind):
    inst = generate(GenSpec(seed=3, n=5, T=3, kind=kind))
    text = io.dumps(io.instance_to_dict(inst))
    again = io.instance_from_dict(io.loads(text))
    assert again == inst
    assert io.dumps(io.instance_to_dict(again)) == text


def test_parse_errors_are_addressed():
    with pytest.raises(InvalidInputError, match=r"x.json:2:"):
        io.loads('{\n "n": }', "x.json")
    with pytest.raises(InvalidInputError, match="missing field 'T'"):
        io.instance_from_dict({"n": 1, "families": []})
    with pytest.raises(InvalidInputError, match="format_version"):
        io.instance_from_dict(dict(EXAMPLE, format_version=99))
    with pytest.raises(InvalidInputError, match=r"families\[1\]"):
        io.instance_from_dict(dict(EXAMPLE, families=[EXAMPLE["families"][0], {"kind": "??"}]))


def test_solution_round_trip(small_instance):
    sol = Solution([(0, 1), (1, 2)])
    doc = io.solution_to_dict(small_instance, sol)
    assert doc["nsw"] == pytest.approx(CUBE_ROOT_12)
    assert doc["phi"] == pytest.approx(math.log(12))
    assert io.solution_from_dict(io.loads(io.dumps(doc))) == sol


def test_write_atomic_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "out.json"

    with pytest.raises(TypeError):
        io.write_atomic(target, 123)
    assert list(tmp_path.iterdir()) == []


def test_cli_solve_example(files, capsys):
    d, inst, init = files
    out, trace = d / "sol.json", d / "trace.json"
    rc = main(["solve", str(inst), "--init", str(init), "--trace", "full", "--trace-out", str(trace), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["sets"] == [[0, 1], [1, 2]]
    assert doc["nsw"] == pytest.approx(2.2894, abs=1e-4)
    tr = json.loads(trace.read_text())
    thr = tr["config"]["threshold"]
    assert tr["config"]["init"] == "given"
    assert len(tr["iterations"]) == 2
    assert all(r["delta_phi"] >= thr - 1e-12 for r in tr["iterations"])
    assert all("weights" in r for r in tr["iterations"])


def test_cli_exit_codes(files, tmp_path):
    d, inst, _ = files
    bad = d / "bad.json"
    bad.write_text("{nope")
    assert main(["solve", str(bad)]) == 2
    assert main(["solve", str(d / "missing.json")]) == 2
    assert main(["exact", str(inst), "--limit", "2"]) == 4
    assert main(["solve", str(inst), "--max-iterations", "0", "--out", str(d / "never.json")]) == 3
    assert not (d / "never.json").exists()


def test_cli_guard_exit(files):
    d, inst, init = files
    out = d / "sol.json"
    assert main(["solve", str(inst), "--init", str(init), "--max-iterations", "1", "--out", str(out)]) == 3
    assert not out.exists()


def test_cli_exact_and_verify(files, capsys):
    d, inst, init = files
    sol, opt = d / "sol.json", d / "opt.json"
    assert main(["solve", str(inst), "--out", str(sol)]) == 0
    assert main(["exact", str(inst), "--out", str(opt)]) == 0
    assert json.loads(opt.read_text())["sets"] == [[0, 1], [1, 2]]
    assert main(["verify", str(inst), str(sol), "--exact", str(opt)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] and report["ratio_floor"] == pytest.approx(1 / (18 + 1 / 12))
    corrupt = d / "corrupt.json"
    corrupt.write_text(json.dumps({"sets": [[0, 1, 2], [0]]}))
    assert main(["verify", str(inst), str(corrupt)]) == 5
    assert "round 0" in capsys.readouterr().err


def test_cli_exact_unsmoothed_triangle(tmp_path, capsys):
    vc = tmp_path / "vc.json"
    vc.write_text(json.dumps({"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2], [0, 2]], "k": 1}))
    inst = tmp_path / "tri.json"
    assert main(["reduce", "vertex-cover", str(vc), "--out", str(inst)]) == 0
    assert main(["exact", str(inst), "--unsmoothed"]) == 0
    assert json.loads(capsys.readouterr().out)["nsw_c"] == 0.0


@pytest.mark.parametrize(
    "kind,payload,n",
    [
        ("max-coverage", {"universe_size": 4, "sets": [[0, 1], [2, 3], [0, 2]], "k": 2, "uniform_size": 2}, 4),
        ("public-decisions", {"n": 2, "issues": [[[1, 0], [0, 1]]]}, 2),
        ("goods", {"n": 2, "m": 2, "valued": [[0, 1], [0, 1]]}, 2),
        ("vertex-cover", {"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2], [0, 2]], "k": 2}, 3),
    ],
)
def test_cli_reduce(tmp_path, capsys, kind, payload, n):
    src = tmp_path / "in.json"
    src.write_text(json.dumps(payload))
    assert main(["reduce", kind, str(src)]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == n


def test_cli_reduce_errors(tmp_path):
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"n": 2, "m": 2, "valued": [[0], [0]]}))
    assert main(["reduce", "goods", str(src)]) == 2
    src.write_text(json.dumps({"n": 2}))
    assert main(["reduce", "goods", str(src)]) == 2


def test_cli_gen(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["gen", "--seed", "4", "--n", "5", "--T", "3", "--kind", "matching", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert main(["gen", "--seed", "4", "--n", "5", "--T", "3", "--kind", "bogus"]) == 2


def test_cli_selfcheck(capsys):
    assert main(["selfcheck"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] and len(doc["checks"]) == 4


def test_cli_bench_empty_suite(tmp_path, capsys):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"instances": []}))
    assert main(["bench", str(suite), "--csv", str(tmp_path / "r.csv")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rows"] == [] and doc["summary"]["instances"] == 0
    assert (tmp_path / "r.csv").read_text().startswith("id,kind,n,T")


def test_python_dash_m(files):
    import subprocess
    import sys

    d, inst, _ = files
    proc = subprocess.run([sys.executable, "-m", "nashcover", "solve", str(inst)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["terminal"] == "converged"

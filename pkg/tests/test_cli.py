import json
import shutil
import subprocess

import pytest

from qrv.cli import CommandResult, main, run
from qrv.quiver import Algebra, Quiver, dump_algebra, parse_algebra

from conftest import zigzag_quiver


def write_algebra(tmp_path, A: Algebra, name="alg.json") -> str:
    path = tmp_path / name
    path.write_text(dump_algebra(A))
    return str(path)


@pytest.fixture
def loop_file(tmp_path, loop_algebra):
    return write_algebra(tmp_path, loop_algebra, "loop.json")


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    doc = json.loads(out)
    assert (code == 0) == (doc["status"] == "ok")
    return code, doc, err


def test_command_result_invariants():
    with pytest.raises(ValueError):
        CommandResult("error", None, [])
    with pytest.raises(ValueError):
        CommandResult("maybe")
    assert CommandResult("ok", {"a": 1}).to_json() == {"status": "ok", "payload": {"a": 1},
                                                       "diagnostics": []}


def test_nodes(capsys, loop_file, tmp_path):
    code, doc, _ = call(capsys, "nodes", loop_file)
    assert code == 0 and doc["payload"]["nodes"] == [{"vertex": "1", "is_node": True}]
    path = write_algebra(tmp_path, Algebra.path_algebra(
        Quiver.from_arrows(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])))
    _, doc, _ = call(capsys, "nodes", path)
    assert [n["is_node"] for n in doc["payload"]["nodes"]] == [True, False, True]


def test_missing_and_malformed_files(capsys, tmp_path):
    code, doc, err = call(capsys, "nodes", str(tmp_path / "nope.json"))
    assert code == 1 and doc["status"] == "error" and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{\"vertices\": [\"1\"], \"arrows\": [{\"id\": \"a\", \"tail\": \"1\"}]}")
    code, doc, _ = call(capsys, "nodes", str(bad))
    assert code == 1 and doc["diagnostics"]


def test_split_round_trip(capsys, loop_file):
    code, doc, _ = call(capsys, "split", loop_file, "--vertex", "1", "--dim", "1:2", "--rank", "1")
    assert code == 0
    p = doc["payload"]
    A = parse_algebra(json.dumps(p["algebra"]))
    assert set(A.quiver.vertices) == {p["x_t"], p["x_h"]}
    assert p["dim"] == {p["x_t"]: 1, p["x_h"]: 1}
    assert A.is_radical_square_zero()
    code, _, _ = call(capsys, "split", loop_file, "--vertex", "1", "--dim", "1:2", "--rank", "3")
    assert code == 1


def test_split_rejects_non_node(capsys, tmp_path):
    path = write_algebra(tmp_path, Algebra.path_algebra(
        Quiver.from_arrows(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])))
    code, doc, _ = call(capsys, "split", path, "--vertex", "2")
    assert code == 1 and "node" in doc["diagnostics"][0]


def test_components(capsys, loop_file, tmp_path, loop_quiver):
    _, doc, _ = call(capsys, "components", loop_file, "--dim", "2")
    assert doc["payload"]["components"] == [
        {"r": {"1": 1}, "nonempty": True, "dimension": 2, "is_component": True}]
    assert doc["payload"]["ambient_dimension"] == 4
    path = write_algebra(tmp_path, Algebra.radical_square_zero(Quiver.from_arrows(["1", "2"], [])))
    _, doc, _ = call(capsys, "components", path, "--dim", "1:3,2:1")
    assert [c["r"] for c in doc["payload"]["components"]] == [{"1": 0, "2": 0}]
    path = write_algebra(tmp_path, Algebra.path_algebra(loop_quiver), "free.json")
    code, doc, _ = call(capsys, "components", path, "--dim", "2")
    assert code == 1 and "split a node" in doc["diagnostics"][0]


def test_ideal_formats(capsys, loop_file):
    _, doc, _ = call(capsys, "ideal", loop_file, "--dim", "2", "--rank", "1")
    lines = [s for s in doc["payload"]["text"].splitlines() if s and not s.startswith("#")]
    assert doc["payload"]["count"] == 6 and len(lines) == 6
    _, doc, _ = call(capsys, "ideal", loop_file, "--dim", "2", "--rank", "1", "--format", "macaulay2")
    assert "ideal(" in doc["payload"]["text"] and "QQ[" in doc["payload"]["text"]
    _, doc, _ = call(capsys, "ideal", loop_file, "--dim", "2", "--rank", "1", "--format", "json")
    assert len(doc["payload"]["generators"]["generators"]) == 6
    code, _, _ = call(capsys, "ideal", loop_file, "--dim", "2", "--rank", "2")
    assert code == 1


def test_ideal_extra_on_zigzag(capsys, tmp_path):
    path = write_algebra(tmp_path, Algebra.radical_square_zero(zigzag_quiver()))
    extra = tmp_path / "p.json"
    extra.write_text(json.dumps({"variables": "ambient",
                                 "polynomials": ["x_A2_1_1*x_A1_1_1 + x_A2_1_2*x_A1_2_1"]}))
    dims = "1:2,2:2,3:2,4:2"
    code, doc, _ = call(capsys, "ideal", path, "--dim", dims, "--rank", "1", "--vertex", "2",
                        "--extra", str(extra))
    assert code == 0 and doc["payload"]["count"] > 0
    code, doc, _ = call(capsys, "ideal", path, "--dim", dims, "--rank", "1", "--extra", str(extra))
    assert code == 1 and "--vertex" in doc["diagnostics"][0]


def test_verify_membership(capsys, loop_file, tmp_path):
    code, doc, _ = call(capsys, "verify", loop_file, "--dim", "2", "--rank", "1", "--trials", "200")
    rep = doc["payload"]
    assert code == 0 and rep["verdict"] == "pass" and rep["trials"] == 200
    assert set(rep) >= {"test", "instance", "trials", "seed", "verdict", "error_bound",
                        "counterexamples"}
    corrupt = tmp_path / "gens.txt"
    corrupt.write_text("# corrupted\nx_c_1_1 + x_c_2_2\nx_c_1_1 + 2*x_c_2_2\n")
    code, doc, err = call(capsys, "verify", loop_file, "--dim", "2", "--rank", "1",
                          "--trials", "20", "--generators", str(corrupt))
    assert code == 1 and doc["payload"]["verdict"] == "fail"
    assert doc["payload"]["counterexamples"] and "membership" in err


def test_verify_other_suites(capsys, loop_file):
    base = ["verify", loop_file, "--dim", "2", "--trials", "20"]
    for extra in (["--suite", "codim", "--rank", "1"],
                  ["--suite", "containment", "--rank", "1"],
                  ["--suite", "containment", "--rank", "0", "--rank2", "1"],
                  ["--suite", "oracle"],
                  ["--suite", "endo", "--vertex", "1", "--rank", "1"],
                  ["--suite", "semistable", "--theta", "1:0"]):
        code, doc, _ = call(capsys, *base, *extra)
        assert code == 0 and doc["payload"]["verdict"] == "pass", extra
    code, doc, _ = call(capsys, *base, "--suite", "containment", "--rank", "1", "--rank2", "0")
    assert code == 1 and doc["payload"]["verdict"] == "fail"
    code, doc, _ = call(capsys, *base, "--suite", "endo", "--rank", "1")
    assert code == 1 and "--vertex" in doc["diagnostics"][0]


def test_reduce(capsys, loop_file, tmp_path):
    _, doc, _ = call(capsys, "reduce", loop_file, "--theta", "1:0")
    assert doc["payload"]["algebra"]["vertices"] == []
    path = write_algebra(tmp_path, Algebra.radical_square_zero(
        Quiver.from_arrows(["1", "2"], [("a", "1", "2")])))
    _, doc, _ = call(capsys, "reduce", path, "--theta", "1:1,2:-1")
    assert [a["id"] for a in doc["payload"]["algebra"]["arrows"]] == ["a"]


def test_seed_control(capsys, loop_file, monkeypatch):
    argv = ["verify", loop_file, "--dim", "2", "--rank", "1", "--trials", "5"]
    _, doc, _ = call(capsys, *argv)
    assert doc["payload"]["seed"] == 0
    monkeypatch.setenv("QRV_SEED", "17")
    _, doc, _ = call(capsys, *argv)
    assert doc["payload"]["seed"] == 17
    _, doc, _ = call(capsys, *argv, "--seed", "3")
    assert doc["payload"]["seed"] == 3
    monkeypatch.setenv("QRV_SEED", "x")
    code, _, _ = call(capsys, *argv)
    assert code == 1


def test_jobs_do_not_change_output(capsys, loop_file):
    argv = ["verify", loop_file, "--dim", "2", "--rank", "1", "--trials", "700", "--seed", "9"]
    outs = []
    for jobs in ("1", "3"):
        for suite in ("membership", "codim"):
            main(argv + ["--jobs", jobs, "--suite", suite])
            outs.append(capsys.readouterr().out)
    assert outs[:2] == outs[2:]


def test_bad_numeric_options(capsys, loop_file):
    for argv in (["--trials", "0"], ["--jobs", "0"]):
        code, _, _ = call(capsys, "verify", loop_file, "--dim", "2", "--rank", "1", *argv)
        assert code == 1
    assert run(["nodes", loop_file]).status == "ok"


@pytest.mark.skipif(shutil.which("qrv") is None, reason="console script not installed")
def test_console_script(loop_file):
    proc = subprocess.run(["qrv", "components", loop_file, "--dim", "2"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "ok"
    proc = subprocess.run(["qrv", "nodes", loop_file + ".missing"], capture_output=True, text=True,
                          check=False)
    assert proc.returncode == 1 and proc.stderr.strip()

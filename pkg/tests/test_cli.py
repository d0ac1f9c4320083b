import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from circleflow import serialize
from circleflow.cli import run
from circleflow.flows import example41
from circleflow.pac import PacMap


@pytest.fixture
def maps(tmp_path):
    serialize.save_map(example41(3), tmp_path / "f3.json")
    serialize.save_map(PacMap.identity(), tmp_path / "id.json")
    return tmp_path


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dist(maps, capsys):
    code, out, _ = call(capsys, "dist", "--f", maps / "f3.json", "--g", maps / "id.json")
    assert code == 0 and out.splitlines()[0] == "1/8" and out.splitlines()[1] == "0.125"


def test_dist_oracle(maps, capsys):
    code, out, _ = call(capsys, "dist", "--f", maps / "f3.json", "--g", maps / "id.json", "--oracle",
                        "--samples", "10000")
    assert code == 0 and "oracle" in out


def test_compose_identity(maps, capsys):
    code, out, _ = call(capsys, "compose", "--f", maps / "id.json", "--g", maps / "id.json")
    assert code == 0 and out == (maps / "id.json").read_text()


def test_invert_and_eval(maps, capsys):
    out_path = maps / "inv.json"
    assert call(capsys, "invert", "--f", maps / "f3.json", "--out", out_path)[0] == 0
    assert serialize.load_map(out_path) == example41(3)
    code, out, _ = call(capsys, "eval", "--f", maps / "f3.json", "--x", "7/8")
    assert (code, out.strip()) == (0, "15/16")
    code, out, _ = call(capsys, "eval", "--f", maps / "f3.json", "--x", "1/8", "--left")
    assert out.strip() == "1/16"


def test_bp0(maps, capsys):
    code, out, _ = call(capsys, "bp0", "--f", maps / "f3.json")
    obj = json.loads(out)
    assert code == 0 and obj["sharp"] == 16 and obj["delta_f"] == "1/16"


def test_flow_outputs_map(capsys):
    code, out, _ = call(capsys, "flow", "--family", "torus", "--t", "1")
    f = serialize.map_from_json(json.loads(out))
    assert code == 0 and f(0) == F(1, 9)
    code, out, _ = call(capsys, "flow", "--family", "example41", "--n", "2")
    assert serialize.map_from_json(json.loads(out)) == example41(2)


def test_flow_custom_torus(capsys):
    code, out, _ = call(capsys, "flow", "--family", "torus", "--t", "1", "--lam", "1/2,1/2",
                        "--alpha", "1/3,1/7")
    assert code == 0
    assert serialize.map_from_json(json.loads(out))(0) == F(1, 6)


def test_straighten_glued(tmp_path, capsys):
    out_path = tmp_path / "res.json"
    code, _, _ = call(capsys, "straighten", "--family", "glued61", "--out", out_path)
    res = json.loads(out_path.read_text())
    assert code == 0
    assert res["B"] == ["0", "1/4", "5/8", "7/8"]
    assert sorted(res["lambda"]) == ["1/2", "1/8", "3/8"]
    code, out, _ = call(capsys, "verify", "--result", out_path, "--family", "glued61")
    assert code == 0 and out.strip().endswith("ok")


def test_verify_map(maps, tmp_path, capsys):
    assert call(capsys, "verify", "--f", maps / "f3.json")[0] == 0
    obj = serialize.map_to_json(PacMap.rotation(F(1, 3)))
    obj["pieces"][0]["transform"]["slope"] = "0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out, _ = call(capsys, "verify", "--f", bad)
    assert code == 2 and "orientation" in out


def test_plot(tmp_path, capsys):
    base = tmp_path / "graph"
    code, _, _ = call(capsys, "plot", "--family", "glued61", "--t", "1/2", "--out", base)
    assert code == 0
    rows = (tmp_path / "graph.csv").read_text().splitlines()
    assert rows[0] == "component,x,target_component,fx" and len(rows) > 100
    assert (tmp_path / "graph.svg").read_text().lstrip().startswith("<?xml")


@pytest.mark.parametrize("argv", [
    ["dist", "--f", "missing.json", "--g", "missing.json"],
    ["flow", "--family", "torus"],
    ["flow", "--family", "torus", "--t", "x/y"],
    ["flow", "--family", "nope", "--t", "1"],
    ["straighten", "--family", "example41"],
])
def test_invalid_input_exit_code(argv, capsys):
    assert run(argv) == 1


def test_malformed_json_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{ nope")
    code, _, err = call(capsys, "invert", "--f", p)
    assert code == 1 and "line 1" in err


def test_module_entry_point(maps):
    proc = subprocess.run([sys.executable, "-m", "circleflow", "dist", "--f", str(maps / "f3.json"),
                           "--g", str(maps / "id.json")], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("1/8")


def test_selftest_quick_table(capsys):
    code, out, _ = call(capsys, "selftest", "--quick")
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(lines) == 8
    failed = sum(l.startswith("[FAIL]") for l in lines)
    assert code == (2 if failed else 0)
    assert out.splitlines()[-1] == f"{8 - failed}/8 criteria passed"

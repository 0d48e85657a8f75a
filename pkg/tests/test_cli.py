import json
import shutil
import subprocess
import sys

import pytest
from conftest import A4_CENTERS

from desing.cli import main, parse_input

A4 = "ring: x,y,z; ideal: x^5+y^2+z^2"


@pytest.fixture(scope="module")
def a4_tree(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    centers = d / "centers.json"
    centers.write_text(json.dumps(A4_CENTERS))
    out = d / "a4.json"
    assert main(["resolve", A4, "--strategy", "scripted", "--centers", str(centers), "-o", str(out), "--jobs", "1"]) == 0
    return out


def test_parse_input_formats(tmp_path):
    I = parse_input("ring: x,y,z\nideal: x^5+y^2+z^2\n")
    assert I.ring.vars == ("x", "y", "z") and len(I.gens) == 1
    assert parse_input("y^2-x^3").ring.vars == ("x", "y")
    assert len(parse_input("ring: x(1), x(2); ideal: x(1)*x(2), x(1)^2").gens) == 2


def test_resolve_writes_tree(a4_tree):
    data = json.loads(a4_tree.read_text())
    assert data["schema_version"] == 1 and len(data["charts"]) == 14
    assert data["divisors"]["count"] == 4


def test_input_file(tmp_path):
    src = tmp_path / "a1.txt"
    src.write_text("ring: x,y,z\nideal: x^2+y^2+z^2\n")
    assert main(["resolve", str(src), "-o", str(tmp_path / "t.json")]) == 0


def test_zeta_report(a4_tree, tmp_path):
    out = tmp_path / "z.json"
    assert main(["zeta", str(a4_tree), "--d", "1", "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["text"] == "(s + 6)/(5*s^2 + 11*s + 6)"
    assert rep["monodromy_text"] == "s^4 + s^3 + s^2 + s + 1"
    assert main(["zeta", str(a4_tree), "--local", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["scope"] == "local"


def test_dualgraph_dot(a4_tree, tmp_path):
    out = tmp_path / "g.dot"
    assert main(["dualgraph", str(a4_tree), "--dot", "-o", str(out)]) == 0
    dot = out.read_text()
    assert dot.startswith("graph dual {") and dot.count(" -- ") == 3 and dot.count("tooltip") == 4


def test_other_reports(a4_tree, tmp_path):
    out = tmp_path / "r.json"
    assert main(["lct", str(a4_tree), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["lct"] == "6/5"
    assert main(["lct", str(a4_tree), "--include-strict", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["lct"] == "1"
    assert main(["discrepancy", str(a4_tree), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["discrepancy"] == [0, 0, 1, 1]
    assert main(["divisors", str(a4_tree), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["N"] == [2, 4, 5, 10, 1]
    assert main(["intersections", str(a4_tree), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["negative_definite"] and [rep["matrix"][i][i] for i in range(4)] == [-2] * 4


def test_bernstein(capsys):
    assert main(["bernstein", "x^2"]) == 0
    assert json.loads(capsys.readouterr().out)["text"] == "4*s^2 + 6*s + 2"
    assert main(["bernstein", "x^2+y"]) == 5


def test_smooth_report(tmp_path):
    tree = tmp_path / "s.json"
    assert main(["resolve", "ring: x,y,z; ideal: x", "-o", str(tree)]) == 0
    out = tmp_path / "d.json"
    assert main(["discrepancy", str(tree), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["discrepancy"] == []
    assert main(["intersections", str(tree), "-o", str(out)]) == 0
    assert json.loads(out.read_text())["matrix"] == []


@pytest.mark.parametrize(
    "argv,code",
    [
        (["resolve", "ring: x,y; ideal: x++y", "-o", "{tmp}/t.json"], 2),
        (["resolve", "ring: x,y; ideal: x^2*y", "-o", "{tmp}/t.json"], 5),
        (["resolve", "ring: x,y,z; ideal: x^5+y^2+z^2", "--strategy", "scripted", "--centers", "{tmp}/c.json", "-o", "{tmp}/t.json"], 3),
        (["zeta", "{tmp}/missing.json"], 2),
        (["zeta", "{tmp}/garbage.json"], 2),
    ],
)
def test_exit_codes(tmp_path, argv, code):
    (tmp_path / "c.json").write_text(json.dumps({"1": ["x^2", "y"]}))
    (tmp_path / "garbage.json").write_text("{}")
    assert main([a.replace("{tmp}", str(tmp_path)) for a in argv]) == code


def test_limit_exit_writes_partial_tree(tmp_path):
    out = tmp_path / "p.json"
    assert main(["resolve", A4, "--max-depth", "1", "-o", str(out)]) == 4
    assert len(json.loads(out.read_text())["charts"]) > 1


def test_pruned_tree_zeta_is_unsupported(tmp_path):
    out = tmp_path / "p.json"
    assert main(["resolve", A4, "--prune", "-o", str(out)]) == 0
    assert main(["zeta", str(out)]) == 5


def test_byte_identical_across_runs_and_jobs(tmp_path):
    exe = shutil.which("desing")
    cmd = [exe] if exe else [sys.executable, "-m", "desing.cli"]
    outputs = []
    for jobs in ("1", "4"):
        tree = tmp_path / f"t{jobs}.json"
        subprocess.run(cmd + ["resolve", A4, "--jobs", jobs, "-o", str(tree)], check=True)
        z = subprocess.run(cmd + ["zeta", str(tree), "--jobs", jobs], check=True, capture_output=True).stdout
        outputs.append((tree.read_bytes(), z))
    assert outputs[0] == outputs[1]

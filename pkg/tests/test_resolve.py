import copy
import json

import pytest
from conftest import A4_CENTERS, hypersurface, run

from desing.groebner import Ideal, is_smooth, saturate
from desing.parse import parse_poly
from desing.resolve import (
    CenterStrategy,
    LimitExceeded,
    ResolutionError,
    ResolutionLimits,
    SchemaError,
    StrategyError,
    default_center,
    is_final,
    load,
    prune,
    resolve,
    save,
    tree_from_dict,
    tree_to_dict,
    trees_equal,
)


def test_smooth_input_needs_no_blowup():
    tree = resolve(hypersurface("x", "xyz"))
    assert list(tree.charts) == ["1"] and tree.root.final


def test_a1_one_point_blowup(a1):
    tree, _ = a1
    assert tree.labels() == ["1", "1.1", "1.2", "1.3"]
    assert tree.leaves() == ["1.1", "1.2", "1.3"]
    assert all(tree.charts[l].final and is_final(tree.charts[l]) for l in tree.leaves())


@pytest.mark.parametrize("name", ["a4", "a4_default", "a4_extra", "cusp", "cusp_default", "a1"])
def test_tree_validity(request, name):
    tree, _ = request.getfixturevalue(name)
    f = tree.f()
    parents = {c.parent for c in tree.charts.values()}
    for label, c in tree.charts.items():
        if label not in parents:
            assert is_final(c), label
        if c.center_in_parent is not None:
            assert is_smooth(c.center_in_parent), label
        # strict transform recomputed from scratch through the composed map
        E = c.ring.one()
        for k in c.visible():
            E = E * c.exceptional_generator(k)
        S, _ = saturate(Ideal(c.ring, [c.map_to_root.pull(f)]), Ideal(c.ring, [E]))
        assert S == c.strict, label


def test_reference_chart_is_final(a4):
    tree, _ = a4
    c = tree.charts["1.1.1.3.2"]
    assert c.strict == Ideal(c.ring, [parse_poly("x4_1^2+x4_0+1", c.ring)])
    assert [str(c.exceptional_generator(k)) for k in c.visible()] == ["x4_0", "x4_2"]
    assert is_final(c)
    assert not is_final(tree.root)


def test_tangential_contact_is_not_final(cusp):
    tree, _ = cusp
    c = tree.charts["1.1"]
    assert c.strict == Ideal(c.ring, [parse_poly("x1_1^2-x1_0", c.ring)])
    assert not is_final(c)


def test_default_centers(a4, cusp):
    tree, _ = a4
    R = tree.ring
    assert default_center(tree.root) == Ideal(R, list(R.gens()))
    c = cusp[0].charts["1.1"]
    assert default_center(c) == Ideal(c.ring, list(c.ring.gens()))
    with pytest.raises(StrategyError):
        default_center(tree.charts["1.2"])


def test_deterministic_and_jobs_independent():
    I = hypersurface("x^5+y^2+z^2", "xyz")
    a = resolve(I)
    assert trees_equal(a, resolve(I))
    assert trees_equal(a, resolve(I, jobs=3))


def test_depth_limit_keeps_partial_tree():
    with pytest.raises(LimitExceeded) as info:
        resolve(hypersurface("x^5+y^2+z^2", "xyz"), limits=ResolutionLimits(max_depth=1))
    partial = info.value.tree
    assert "1.1" in partial.charts and max(c.depth for c in partial.charts.values()) == 1


def test_chart_limit():
    with pytest.raises(LimitExceeded):
        resolve(hypersurface("x^5+y^2+z^2", "xyz"), limits=ResolutionLimits(max_charts=5))


@pytest.mark.parametrize(
    "centers",
    [
        {"1": ["x^2-y^3", "z"]},  # singular
        {"1": ["1"]},  # improper
        {"1": ["x", "y", "z"]},  # nothing for the non-final children
    ],
)
def test_bad_scripted_centers(centers):
    with pytest.raises(StrategyError):
        resolve(hypersurface("x^5+y^2+z^2", "xyz"), CenterStrategy.scripted(centers))


@pytest.mark.parametrize("text,names", [("x^2*y", "xy"), ("(x^2+y^3+z^2)^2", "xyz"), ("1", "xy"), ("x+y+z+w", "xyzw")])
def test_rejected_inputs(text, names):
    with pytest.raises(ResolutionError):
        resolve(hypersurface(text, names))


def test_reduced_node_resolves_in_one_step():
    tree = resolve(hypersurface("x*y", "xy"))
    assert tree.labels() == ["1", "1.1", "1.2"]


def test_non_principal_rejected():
    I = hypersurface("x", "xyz").add(parse_poly("y", hypersurface("x", "xyz").ring))
    with pytest.raises(ResolutionError):
        resolve(I)


# -- pruning ------------------------------------------------------------------


def _with_duplicate(tree, label, new_label):
    data = tree_to_dict(tree)
    entry = next(c for c in data["charts"] if c["id"] == label)
    dup = copy.deepcopy(entry)
    dup["id"] = new_label
    data["charts"].append(dup)
    return tree_from_dict(data)


def test_prune_drops_duplicate_patch(cusp):
    tree, _ = cusp
    doubled = _with_duplicate(tree, "1.1.2.1", "1.1.2.3")
    assert "1.1.2.3" in doubled.leaves()
    pruned = prune(doubled)
    assert "1.1.2.3" not in pruned.charts
    assert pruned.leaves() == prune(tree).leaves()


def test_prune_keeps_lowest_labels_and_is_idempotent(a4):
    tree, _ = a4
    once = prune(tree)
    assert once.pruned
    assert once.leaves() == ["1.1.1.2.1", "1.1.1.2.2", "1.1.2"]
    assert trees_equal(once, prune(once))
    # dropped charts held points nowhere else, so counting is no longer safe
    assert not once.covered


def test_pruned_flags_survive_roundtrip(a4, tmp_path):
    once = prune(a4[0])
    save(once, tmp_path / "p.json")
    back = load(tmp_path / "p.json")
    assert back.pruned and not back.covered and trees_equal(once, back)


# -- persistence ----------------------------------------------------------------


@pytest.mark.parametrize("name", ["a1", "a4", "cusp"])
def test_roundtrip(request, name, tmp_path):
    tree, _ = request.getfixturevalue(name)
    path = tmp_path / "tree.json"
    save(tree, path)
    back = load(path)
    assert trees_equal(tree, back)
    for label, c in tree.charts.items():
        assert [str(p) for p in back.charts[label].map_to_root.images] == [str(p) for p in c.map_to_root.images]
    save(back, tmp_path / "again.json")
    assert path.read_bytes() == (tmp_path / "again.json").read_bytes()


def test_json_schema_fields(a1, tmp_path):
    save(a1[0], tmp_path / "t.json")
    data = json.loads((tmp_path / "t.json").read_text())
    assert data["schema_version"] == 1
    assert data["ring"] == {"vars": ["x", "y", "z"]}
    assert data["input"] == {"generators": ["x^2 + y^2 + z^2"]}
    leaf = next(c for c in data["charts"] if c["id"] == "1.3")
    assert leaf["final"] is True and leaf["exceptional"] == [["x1_2"]]
    root = next(c for c in data["charts"] if c["id"] == "1")
    assert root["parent"] is None and root["center_in_parent"] is None


@pytest.mark.parametrize(
    "tamper",
    [
        lambda d: d.update(schema_version=99),
        lambda d: d.pop("schema_version"),
        lambda d: d["charts"][1].pop("map_to_root"),
        lambda d: d["charts"][1].update(strict=["x1_0++1"]),
        lambda d: d["charts"][1].update(parent="nowhere"),
    ],
)
def test_tampered_file(a1, tmp_path, tamper):
    data = tree_to_dict(a1[0])
    tamper(data)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(SchemaError):
        load(path)


def test_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load(path)


def test_scripted_run_reproduces_named_tree():
    tree, _ = run("x^5+y^2+z^2", "xyz", A4_CENTERS)
    assert len(tree.charts) == 14 and len(tree.leaves()) == 9
    assert tree.strategy_name == "scripted"

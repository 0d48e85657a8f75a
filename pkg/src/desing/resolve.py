"""The resolution driver: a tree of charts grown by blowing up smooth centers."""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Sequence

from .blowup import BlowupError, Chart, ChartMap, blow_up_chart, normal_form_center
from .groebner import (
    Ideal,
    codimension,
    dimension,
    intersect,
    is_smooth,
    poly_gcd,
    minors,
    singular_locus,
    univariate_eliminant,
    upoly_to_poly,
    zero_dim_radical,
)
from .parse import parse_poly
from .poly import Poly, Ring, format_poly
from .univariate import squarefree_part

SCHEMA_VERSION = 1


class ResolutionError(Exception):
    pass


class StrategyError(ResolutionError):
    """No admissible center could be found or a scripted center is invalid."""


class LimitExceeded(ResolutionError):
    def __init__(self, message: str, tree: "ChartTree"):
        super().__init__(message)
        self.tree = tree


class SchemaError(ValueError):
    pass


@dataclass
class ResolutionLimits:
    max_depth: int = 12
    max_charts: int = 512

    def __post_init__(self):
        if self.max_depth < 1 or self.max_charts < 1:
            raise ValueError("limits must be positive")


@dataclass
class CenterStrategy:
    """``default`` heuristic, or ``scripted`` with centers keyed by chart label."""

    kind: str = "default"
    centers: Dict[str, List[str]] = field(default_factory=dict)

    @classmethod
    def scripted(cls, centers: Mapping[str, Sequence[str]]) -> "CenterStrategy":
        return cls("scripted", {k: list(v) for k, v in centers.items()})

    @property
    def name(self) -> str:
        return self.kind


@dataclass
class ChartTree:
    charts: Dict[str, Chart]
    root_id: str
    input: Ideal
    strategy_name: str = "default"
    pruned: bool = False
    covered: bool = True

    @property
    def root(self) -> Chart:
        return self.charts[self.root_id]

    @property
    def ring(self) -> Ring:
        return self.input.ring

    def children(self, label: str) -> List[Chart]:
        return [c for c in self.charts.values() if c.parent == label]

    def leaves(self) -> List[str]:
        parents = {c.parent for c in self.charts.values()}
        return [l for l in self.labels() if l not in parents]

    def final_labels(self) -> List[str]:
        return [l for l in self.labels() if self.charts[l].final]

    def labels(self) -> List[str]:
        return sorted(self.charts, key=label_key)

    def path(self, label: str) -> List[str]:
        out = [label]
        while self.charts[out[-1]].parent is not None:
            out.append(self.charts[out[-1]].parent)
        return out[::-1]

    def ancestor_at_depth(self, label: str, depth: int) -> Chart:
        return self.charts[self.path(label)[depth]]

    def f(self) -> Poly:
        gb = self.input.groebner()
        if len(gb) != 1:
            raise ResolutionError("input is not a principal ideal")
        return gb[0]


def label_key(label: str):
    return tuple(int(p) for p in label.split("."))


# -- smoothness and normal crossings ------------------------------------


def _components(c: Chart) -> List[Ideal]:
    """Strict transform followed by the visible exceptional divisors."""
    comps = [c.strict] if not c.strict.is_zero() else []
    comps += [c.exceptional[k] for k in c.visible()]
    return comps


def _bad_locus(c: Chart, comps: Sequence[Ideal]) -> Ideal:
    """Where the given hypersurfaces fail to be smooth and transversal."""
    gens = list(c.ambient.gens)
    for D in comps:
        gens += D.groebner()
    I = Ideal(c.ring, gens)
    if I.is_unit():
        return I
    k = len(gens)
    if k > c.ring.nvars:
        return I
    M = [[g.diff(v) for v in c.ring.vars] for g in gens]
    return I.add(*minors(M, k))


def non_snc_loci(c: Chart) -> List[Ideal]:
    comps = _components(c)
    out = []
    for r in range(1, len(comps) + 1):
        for J in itertools.combinations(comps, r):
            B = _bad_locus(c, J)
            if not B.is_unit():
                out.append(B)
    return out


def is_final(c: Chart, original: Ideal | None = None) -> bool:
    """Strict transform smooth and, with the exceptional divisors, SNC."""
    return not non_snc_loci(c)


# -- centers --------------------------------------------------------------


def _reduced(L: Ideal) -> Ideal:
    """Radical for finite loci; otherwise a sub-radical built from
    squarefree univariate eliminants."""
    d = dimension(L)
    if d <= 0:
        return zero_dim_radical(L) if d == 0 else L
    extra = []
    for v in L.ring.vars:
        p = univariate_eliminant(L, v)
        if not p.is_zero() and p.degree > 0:
            extra.append(upoly_to_poly(squarefree_part(p), L.ring, v))
    return Ideal(L.ring, L.groebner() + extra)


def center_from_locus(L: Ideal, depth: int = 0) -> Ideal:
    if depth > L.ring.nvars + 1:
        raise StrategyError(f"no smooth center found inside {L}")
    Lr = _reduced(L)
    Lr = Ideal(Lr.ring, Lr.groebner())
    if is_smooth(Lr):
        return Lr
    return center_from_locus(singular_locus(Lr, codimension(Lr)), depth + 1)


def candidate_center(c: Chart):
    """Return ``(key, center)``; larger keys are blown up first."""
    S = c.strict
    if not S.is_zero():
        sing = singular_locus(Ideal(c.ring, S.groebner() + list(c.ambient.gens)), codimension(S))
        if not sing.is_unit():
            return (2, dimension(sing)), center_from_locus(sing)
    loci = non_snc_loci(c)
    if not loci:
        return None, None
    dims = [dimension(B) for B in loci]
    top = max(dims)
    L = None
    for B, d in zip(loci, dims):
        if d == top:
            L = B if L is None else intersect(L, B)
    return (1, top), center_from_locus(L)


def default_center(c: Chart, original: Ideal | None = None) -> Ideal:
    key, center = candidate_center(c)
    if center is None:
        raise StrategyError(f"chart {c.id} is already final")
    return center


# -- the driver -------------------------------------------------------------


def _check_center(c: Chart, center: Ideal) -> None:
    if center.is_unit() or center.is_zero():
        raise StrategyError(f"center {center} in chart {c.id} is not proper")
    if not is_smooth(center):
        raise StrategyError(f"center {center} in chart {c.id} is singular")
    if normal_form_center(center) is None:
        raise StrategyError(
            f"center {center} in chart {c.id} is not a graph over coordinates; "
            "only such centers keep the charts affine"
        )


def _map(fn, items, jobs: int):
    # executor.map keeps input order, so results do not depend on ``jobs``
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, items))


def resolve(
    I: Ideal,
    strategy: CenterStrategy | None = None,
    limits: ResolutionLimits | None = None,
    jobs: int = 1,
) -> ChartTree:
    """Embedded resolution of the hypersurface ``V(I)``.

    ``jobs > 1`` evaluates the pending charts of a round in worker processes.
    """
    strategy = strategy or CenterStrategy()
    limits = limits or ResolutionLimits()
    if len(I.groebner()) != 1 or I.is_unit():
        raise ResolutionError("input must be a non-zero proper principal ideal")
    if I.ring.nvars not in (1, 2, 3):
        raise ResolutionError("only 1 to 3 variables are supported")
    f = I.groebner()[0].primitive()
    common = f
    for v in f.ring.vars:
        common = poly_gcd(common, f.diff(v))
    if not common.is_constant():
        raise ResolutionError(f"the hypersurface must be reduced; {common} is a repeated factor")
    root = Chart.root(Ideal(I.ring, [f]))
    tree = ChartTree({root.id: root}, root.id, Ideal(I.ring, [f]), strategy.name)
    pending = [root.id]
    rnd = 0
    while True:
        work = []
        order = sorted(pending, key=label_key)
        if strategy.kind != "scripted":
            assessed = dict(zip(order, _map(candidate_center, [tree.charts[l] for l in order], jobs)))
        for label in order:
            c = tree.charts[label]
            if strategy.kind == "scripted":
                # a scripted center is honoured even on an SNC chart, which
                # allows extra blow-ups that change the tree but no invariant
                if label not in strategy.centers and is_final(c):
                    c.final = True
                    continue
                if label not in strategy.centers:
                    raise StrategyError(f"no scripted center for non-final chart {label}")
                center = Ideal(c.ring, [parse_poly(t, c.ring) for t in strategy.centers[label]])
                key = (0, c.depth)
            else:
                key, center = assessed[label]
                if center is None:
                    c.final = True
                    continue
            work.append((key, label, center))
        if not work:
            return tree
        if strategy.kind == "scripted":
            top = min(k for k, _, _ in work)
        else:
            top = max(k for k, _, _ in work)
        rnd += 1
        pending = [l for k, l, _ in work if k != top]
        for key, label, center in work:
            if key != top:
                continue
            c = tree.charts[label]
            if c.depth + 1 > limits.max_depth:
                raise LimitExceeded(f"depth limit {limits.max_depth} reached at chart {label}", tree)
            _check_center(c, center)
            try:
                result = blow_up_chart(c, center)
            except BlowupError as exc:
                raise StrategyError(str(exc)) from exc
            for child in result.charts:
                child.rounds = list(c.rounds) + [rnd]
                tree.charts[child.id] = child
                pending.append(child.id)
            if len(tree.charts) > limits.max_charts:
                raise LimitExceeded(f"chart limit {limits.max_charts} exceeded", tree)


# -- pruning ------------------------------------------------------------------


def _visible_strata(tree: ChartTree, table, label: str) -> set:
    """Global labels ``J`` (strict transform is 0) with ``E_J`` meeting the chart."""
    c = tree.charts[label]
    comps = [(0, c.strict_generator())]
    comps += [(g, c.exceptional_generator(k)) for g, k in sorted(table.slots(label).items())]
    out = set()
    for r in range(1, len(comps) + 1):
        for sub in itertools.combinations(comps, r):
            if not Ideal(c.ring, [p for _, p in sub]).is_unit():
                out.add(tuple(g for g, _ in sub))
    return out


def prune(tree: ChartTree) -> ChartTree:
    """Drop final charts all of whose strata are visible in retained charts.

    Charts are examined from the highest label down, so lower labels win.
    The result records in ``covered`` whether the retained leaves still cover
    the whole of ``V(f∘π)`` pointwise; counting functions need that.
    """
    from .divisors import collect_divisors
    from .gluing import Gluing

    glue = Gluing(tree)
    table = collect_divisors(tree, glue)
    f = tree.f()
    keep = list(tree.leaves())
    seen = {l: _visible_strata(tree, table, l) for l in keep}
    dropped = []
    for label in sorted(keep, key=label_key, reverse=True):
        others = [l for l in keep if l != label]
        if not others:
            continue
        elsewhere = set().union(*(seen[l] for l in others))
        if seen[label] <= elsewhere:
            keep.remove(label)
            dropped.append(label)
    covered = tree.covered
    for label in dropped:
        c = tree.charts[label]
        relevant = Ideal(c.ring, [c.map_to_root.pull(f)])
        if not glue.new_part(label, keep, relevant).is_unit():
            covered = False
            break
    keep_set = set(keep)
    charts = dict(tree.charts)
    changed = True
    while changed:
        changed = False
        parents = {c.parent for c in charts.values()}
        for l in list(charts):
            if l not in keep_set and l not in parents and l != tree.root_id:
                del charts[l]
                changed = True
    pruned = ChartTree(charts, tree.root_id, tree.input, tree.strategy_name, pruned=True, covered=covered)
    if set(charts) == set(tree.charts):
        pruned.pruned = tree.pruned
    return pruned


# -- persistence --------------------------------------------------------------


def _polys(I: Ideal) -> List[str]:
    return [format_poly(g) for g in I.gens]


def _ideal(ring: Ring, texts) -> Ideal:
    if texts == "1":
        return Ideal(ring, [ring.one()])
    return Ideal(ring, [parse_poly(t, ring) for t in texts])


def tree_to_dict(tree: ChartTree) -> dict:
    charts = []
    for label in tree.labels():
        c = tree.charts[label]
        parent_ring = tree.charts[c.parent].ring if c.parent else None
        charts.append(
            {
                "id": c.id,
                "parent": c.parent,
                "chart_index": c.chart_index,
                "vars": list(c.ring.vars),
                "depth": c.depth,
                "rounds": list(c.rounds),
                "ambient": _polys(c.ambient),
                "strict": _polys(c.strict),
                "exceptional": ["1" if E.is_unit() else _polys(E) for E in c.exceptional],
                "center_in_parent": _polys(c.center_in_parent) if c.center_in_parent else None,
                "local_map": [format_poly(g) for g in c.local_map.images] if c.local_map else None,
                "inverse": [[format_poly(n), format_poly(d)] for n, d in c.inverse]
                if c.inverse
                else None,
                "map_to_root": [format_poly(g) for g in c.map_to_root.images],
                "sat_exponent": c.sat_exponent,
                "final": c.final,
            }
        )
        del parent_ring
    return {
        "schema_version": SCHEMA_VERSION,
        "ring": {"vars": list(tree.ring.vars)},
        "input": {"generators": _polys(tree.input)},
        "strategy": tree.strategy_name,
        "pruned": tree.pruned,
        "covered": tree.covered,
        "root": tree.root_id,
        "charts": charts,
    }


def tree_from_dict(data: dict) -> ChartTree:
    if not isinstance(data, dict) or "schema_version" not in data:
        raise SchemaError("missing schema_version")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {data['schema_version']!r}")
    try:
        root_ring = Ring(data["ring"]["vars"])
        I = _ideal(root_ring, data["input"]["generators"])
        charts: Dict[str, Chart] = {}
        for d in data["charts"]:
            ring = Ring(d["vars"])
            parent = charts[d["parent"]] if d["parent"] else None
            prings = parent.ring if parent else None
            c = Chart(
                id=d["id"],
                ring=ring,
                ambient=_ideal(ring, d["ambient"]),
                strict=_ideal(ring, d["strict"]),
                exceptional=[_ideal(ring, e) for e in d["exceptional"]],
                map_to_root=ChartMap(ring, root_ring, tuple(parse_poly(t, ring) for t in d["map_to_root"])),
                parent=d["parent"],
                chart_index=d["chart_index"],
                center_in_parent=_ideal(prings, d["center_in_parent"]) if d["center_in_parent"] is not None else None,
                local_map=ChartMap(ring, prings, tuple(parse_poly(t, ring) for t in d["local_map"]))
                if d["local_map"] is not None
                else None,
                inverse=tuple((parse_poly(n, prings), parse_poly(m, prings)) for n, m in d["inverse"])
                if d["inverse"] is not None
                else None,
                depth=d["depth"],
                sat_exponent=d["sat_exponent"],
                rounds=list(d["rounds"]),
                final=bool(d["final"]),
            )
            charts[c.id] = c
        return ChartTree(charts, data["root"], I, data["strategy"], bool(data.get("pruned", False)),
                         bool(data.get("covered", True)))
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"malformed chart tree: {exc}") from exc


def save(tree: ChartTree, path, divisors: dict | None = None) -> None:
    """Write the tree as JSON; ``divisors`` (a divisor table as a dict) is
    stored alongside under ``"divisors"`` and ignored on loading."""
    data = tree_to_dict(tree)
    if divisors is not None:
        data["divisors"] = divisors
    Path(path).write_text(json.dumps(data, indent=1) + "\n")


def load(path) -> ChartTree:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return tree_from_dict(data)


def trees_equal(a: ChartTree, b: ChartTree) -> bool:
    return tree_to_dict(a) == tree_to_dict(b)

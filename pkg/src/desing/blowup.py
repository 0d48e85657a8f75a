"""Blowing up an affine chart along a non-singular center."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .groebner import (
    Ideal,
    buchberger,
    determinant,
    divide,
    eliminate,
    quotient,
    saturate,
)
from .order import LEX
from .poly import Poly, Ring


class BlowupError(ValueError):
    """Raised for centers that cannot be blown up."""


@dataclass(frozen=True)
class ChartMap:
    """Images of the ``target`` variables as polynomials on ``source``."""

    source: Ring
    target: Ring
    images: Tuple[Poly, ...]

    @classmethod
    def identity(cls, ring: Ring) -> "ChartMap":
        return cls(ring, ring, tuple(ring.gens()))

    def pull(self, f: Poly) -> Poly:
        """Pull back a polynomial on the target to the source."""
        return f.compose(self.images, self.source)

    def then(self, outer: "ChartMap") -> "ChartMap":
        """Compose: ``self`` maps source -> mid, ``outer`` maps mid -> target."""
        if outer.source != self.target:
            raise ValueError("chart maps are not composable")
        return ChartMap(self.source, outer.target, tuple(self.pull(g) for g in outer.images))

    def jacobian_det(self) -> Poly:
        return jacobian_det_of_map(self)


def jacobian_det_of_map(m: ChartMap) -> Poly:
    """Determinant of the Jacobian matrix of the substitution map."""
    if m.source.nvars != m.target.nvars:
        raise BlowupError(
            f"non-square chart map: {m.source.nvars} source vs {m.target.nvars} target variables"
        )
    M = [[img.diff(v) for v in m.source.vars] for img in m.images]
    return determinant(M)


@dataclass
class Chart:
    """One affine patch of the resolution."""

    id: str
    ring: Ring
    ambient: Ideal
    strict: Ideal
    exceptional: List[Ideal]
    map_to_root: ChartMap
    parent: Optional[str] = None
    chart_index: Optional[int] = None
    center_in_parent: Optional[Ideal] = None
    local_map: Optional[ChartMap] = None
    # chart coordinates as fractions (num, den) of parent coordinates
    inverse: Optional[Tuple[Tuple[Poly, Poly], ...]] = None
    depth: int = 0
    sat_exponent: Optional[int] = None
    # round of the global blow-up that created each exceptional slot
    rounds: List[int] = field(default_factory=list)
    final: bool = False

    @classmethod
    def root(cls, I: Ideal, label: str = "1") -> "Chart":
        ring = I.ring
        return cls(
            id=label,
            ring=ring,
            ambient=Ideal(ring),
            strict=I,
            exceptional=[],
            map_to_root=ChartMap.identity(ring),
        )

    def visible(self) -> List[int]:
        """Slots (0-based birth indices) of exceptional divisors seen here."""
        return [k for k, E in enumerate(self.exceptional) if not E.is_unit()]

    def exceptional_generator(self, slot: int) -> Poly:
        gb = self.exceptional[slot].groebner()
        if len(gb) != 1:
            raise BlowupError(f"exceptional divisor {slot} in chart {self.id} is not principal")
        return gb[0]

    def strict_generator(self) -> Poly:
        gb = self.strict.groebner()
        if len(gb) != 1:
            raise BlowupError(f"strict transform in chart {self.id} is not principal")
        return gb[0]


@dataclass
class BlowupResult:
    charts: List[Chart]
    center: Ideal


def rees_kernel(ambient: Ideal, center: Sequence[Poly], yname: str = "y") -> Ideal:
    """Kernel of ``A[y_1..y_m] -> A[t]``, ``y_i -> t f_i``; lives in ring (x, y)."""
    ring = ambient.ring
    center = [f for f in center if f]
    if not center:
        raise BlowupError("cannot blow up the zero ideal")
    if Ideal(ring, center).add(*ambient.gens).is_unit():
        raise BlowupError("center is the unit ideal; nothing to blow up")
    ys = [f"{yname}{i}" for i in range(len(center))]
    big = Ring(("t_",) + ring.vars + tuple(ys))
    t = big.gen("t_")
    gens = [big.gen(y) - t * f.to_ring(big) for y, f in zip(ys, center)]
    gens += [g.to_ring(big) for g in ambient.gens]
    K = eliminate(Ideal(big, gens), ["t_"])
    return Ideal(Ring(ring.vars + tuple(ys)), K.groebner())


def normal_form_center(center: Ideal) -> Optional[List[Tuple[int, Poly]]]:
    """Write a center as ``v_j - h_j`` with ``h_j`` free of all ``v``'s.

    Returns ``[(index of v_j, h_j), ...]`` sorted by index, or ``None``.
    """
    ring = center.ring
    n = ring.nvars
    gb0 = center.groebner()
    if not gb0 or gb0 == [ring.one()]:
        return None
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            order = [ring.vars[i] for i in subset] + [
                v for i, v in enumerate(ring.vars) if i not in subset
            ]
            work = Ring(order)
            gb = buchberger([g.to_ring(work) for g in gb0], LEX)
            if len(gb) != k:
                continue
            found = {}
            for g in gb:
                lead = g.leading_monomial(LEX)
                if sum(lead) != 1 or lead.index(1) >= k:
                    break
                pos = lead.index(1)
                rest = g - work.monomial(lead)
                if any(any(e[:k]) for e in rest.terms):
                    break
                found[subset[pos]] = (-rest).to_ring(ring)
            if len(found) == k:
                return sorted(found.items())
    return None


def _linear_substitutions(gens: List[Poly], ring: Ring, prefer: Sequence[str]):
    """Repeatedly solve generators of the form ``c*w + r`` for a variable ``w``.

    Returns (remaining generators, {var: image}) with images free of solved
    variables.
    """
    subs: Dict[str, Poly] = {}
    gens = [g for g in gens if g]
    order = [v for v in prefer] + [v for v in ring.vars if v not in prefer]
    changed = True
    while changed:
        changed = False
        for w in order:
            if w in subs:
                continue
            i = ring.index(w)
            for g in gens:
                if g.degree(i) != 1:
                    continue
                lin = {e: c for e, c in g.terms.items() if e[i] == 1}
                if len(lin) != 1:
                    continue
                (e, c), = lin.items()
                if any(e[j] for j in range(ring.nvars) if j != i):
                    continue
                image = (ring.monomial(e) * c - g) / c
                subs = {k: v.subs({w: image}) for k, v in subs.items()}
                subs[w] = image
                gens = [h.subs({w: image}) for h in gens if h is not g]
                gens = [h for h in gens if h]
                changed = True
                break
            if changed:
                break
    return gens, subs


def _strict_principal(f: Poly, e: Poly) -> Tuple[Poly, int]:
    k = 0
    if not f:
        return f, 0
    while True:
        q, r = divide(f, e)
        if r:
            return f, k
        f, k = q, k + 1


def total_transform(c: Chart, I: Ideal) -> Ideal:
    """Image of a parent-chart ideal in chart ``c`` (plus the chart's ambient)."""
    gens = [c.local_map.pull(g) for g in I.gens]
    return Ideal(c.ring, gens + list(c.ambient.gens))


def _new_exceptional(c: Chart) -> Ideal:
    return c.exceptional[-1]


def strict_transform(c: Chart, I: Ideal) -> Tuple[Ideal, int]:
    """Saturate the total transform by the newest exceptional ideal."""
    E = _new_exceptional(c)
    T = total_transform(c, I)
    if c.ambient.is_zero() and len(I.gens) <= 1 and len(E.gens) == 1:
        if not I.gens:
            return Ideal(c.ring), 0
        f, k = _strict_principal(T.gens[0], E.gens[0])
        return Ideal(c.ring, [f]), k
    S, k = saturate(T, E)
    return S, k


def weak_transform(c: Chart, I: Ideal) -> Ideal:
    """Iterate ``: E`` while multiplying back by E recovers the previous step."""
    E = _new_exceptional(c)
    current = total_transform(c, I)
    while True:
        nxt = quotient(current, E)
        if nxt == current or not (E * nxt).add(*c.ambient.gens) == current:
            return current
        current = nxt


def blow_up_chart(c: Chart, center: Ideal, label_of=None) -> BlowupResult:
    """Blow up chart ``c`` along ``center`` and return one chart per patch."""
    if center.ring != c.ring:
        raise BlowupError("center must live in the chart's ring")
    nf = normal_form_center(center) if c.ambient.is_zero() else None
    if nf is not None:
        generators = [c.ring.gens()[i] - h for i, h in nf]
        vpos = [i for i, _ in nf]
    else:
        generators = center.groebner()
        vpos = []
    K = rees_kernel(c.ambient, generators)
    ys = K.ring.vars[c.ring.nvars :]
    depth = c.depth + 1
    charts = []
    for i, f_i in enumerate(generators):
        label = label_of(c, i) if label_of else f"{c.id}.{i + 1}"
        if nf is not None:
            chart = _affine_patch(c, K, ys, i, generators, vpos, depth, label)
        else:
            chart = _general_patch(c, K, ys, i, generators, depth, label)
        chart.center_in_parent = center
        charts.append(chart)
    return BlowupResult(charts, center)


def _affine_patch(c, K, ys, i, generators, vpos, depth, label) -> Chart:
    """Patch ``y_i = 1`` for a center in normal form; the chart is affine space."""
    ring = K.ring
    yi = ring.gen(ys[i])
    gens = [g.subs({ys[i]: ring.one()}) for g in K.gens]
    prefer = [c.ring.vars[p] for p in vpos if p != vpos[i]]
    rest, subs = _linear_substitutions(gens, ring, prefer)
    del yi
    if rest or set(subs) != set(prefer):
        raise BlowupError(f"unexpected Rees algebra shape in chart {c.id}")
    n = c.ring.nvars
    new = Ring([f"x{depth}_{j}" for j in range(n)])
    # y_b sits in the slot of v_b; the exceptional coordinate u in the slot of v_i
    rename: Dict[str, Poly] = {}
    for b, p in enumerate(vpos):
        if b != i:
            rename[ys[b]] = new.gens()[p]
    for j, v in enumerate(c.ring.vars):
        if j != vpos[i]:
            rename[v] = new.gens()[j]
    u = new.gens()[vpos[i]]
    h_i = generators[i] * -1 + c.ring.gens()[vpos[i]]
    h_i_new = h_i.compose([rename.get(v, new.zero()) for v in c.ring.vars], new)
    rename[c.ring.vars[vpos[i]]] = u + h_i_new
    images = []
    for j, v in enumerate(c.ring.vars):
        if v in subs:
            images.append(subs[v].compose([rename.get(w, new.zero()) for w in ring.vars], new))
        else:
            images.append(rename[v])
    local = ChartMap(new, c.ring, tuple(images))
    inverse = []
    for j, v in enumerate(c.ring.vars):
        if j == vpos[i]:
            inverse.append((generators[i], c.ring.one()))
        elif j in vpos:
            b = vpos.index(j)
            inverse.append((generators[b], generators[i]))
        else:
            inverse.append((c.ring.gen(v), c.ring.one()))
    chart = Chart(
        id=label,
        ring=new,
        ambient=Ideal(new),
        strict=Ideal(new),
        exceptional=[],
        map_to_root=local.then(c.map_to_root),
        parent=c.id,
        chart_index=i,
        local_map=local,
        inverse=tuple(inverse),
        depth=depth,
    )
    _fill_transforms(chart, c, Ideal(new, [u]))
    return chart


def _general_patch(c, K, ys, i, generators, depth, label) -> Chart:
    """Patch ``y_i = 1`` keeping the ambient ideal (non-affine chart)."""
    ring = K.ring
    gens = [g.subs({ys[i]: ring.one()}) for g in K.gens]
    keep = list(c.ring.vars) + [y for b, y in enumerate(ys) if b != i]
    small = Ring(keep)
    gens = [g.to_ring(small) for g in gens if g]
    names = [f"x{depth}_{j}" for j in range(c.ring.nvars)] + [
        f"y{depth}_{b}" for b in range(len(ys)) if b != i
    ]
    new = Ring(names)
    ambient = Ideal(new, [g.rename(new) for g in buchberger(gens)])
    local = ChartMap(new, c.ring, tuple(new.gens()[: c.ring.nvars]))
    inverse = [(c.ring.gen(v), c.ring.one()) for v in c.ring.vars]
    inverse += [(generators[b], generators[i]) for b in range(len(ys)) if b != i]
    chart = Chart(
        id=label,
        ring=new,
        ambient=ambient,
        strict=Ideal(new),
        exceptional=[],
        map_to_root=local.then(c.map_to_root),
        parent=c.id,
        chart_index=i,
        local_map=local,
        inverse=tuple(inverse),
        depth=depth,
    )
    e = local.pull(generators[i])
    _fill_transforms(chart, c, Ideal(new, [e]))
    return chart


def _fill_transforms(chart: Chart, parent: Chart, E: Ideal) -> None:
    chart.exceptional = [E]
    olds = []
    for old in parent.exceptional:
        if old.is_unit():
            olds.append(Ideal(chart.ring, [chart.ring.one()]))
        else:
            S, _ = strict_transform(chart, old)
            olds.append(Ideal(chart.ring, S.groebner()))
    chart.exceptional = olds + [E]
    S, k = strict_transform(chart, parent.strict)
    chart.strict = Ideal(chart.ring, [g.primitive() for g in S.groebner()])
    chart.sat_exponent = k

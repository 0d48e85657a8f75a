"""Global exceptional divisors of a chart tree.

Each blow-up of a chart is an *event*; an exceptional slot of a chart is
born at the event of its ancestor at that depth.  Events of the same round
whose centers are the same irreducible subvariety of the space before that
round produce the same exceptional divisor, which is detected by moving
one center into the other chart through the transition maps.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .gluing import Gluing
from .groebner import (
    Ideal,
    codimension,
    dimension,
    same_radical,
    saturate,
    univariate_eliminant,
    upoly_to_poly,
)
from .order import LEX
from .poly import Poly, Ring, format_poly
from .resolve import ChartTree, label_key
from .univariate import UPoly, factor_univariate, squarefree_part


class UnsupportedShape(Exception):
    """A computation met a geometric configuration outside the supported forms."""


class WitnessError(Exception):
    pass


# -- witnesses ------------------------------------------------------------


@dataclass
class SubvarietyWitness:
    """Represents ``V(J)`` inside ``V(I)`` by ``√(I+J) = √((I+⟨p⟩) : f)``."""

    carrier: Ideal
    auxiliary: List[Poly]
    denominator: Poly

    def ideal(self) -> Ideal:
        I = self.carrier.add(*self.auxiliary)
        if self.denominator.is_constant():
            return I
        return _colon(I, self.denominator)

    def validates(self, J: Ideal) -> bool:
        target = self.carrier + J
        return same_radical(target, self.ideal())


def _colon(I: Ideal, f: Poly) -> Ideal:
    from .groebner import quotient

    return quotient(I, Ideal(I.ring, [f]))


def _height(I: Ideal) -> int:
    d = dimension(I)
    return I.ring.nvars - d if d >= 0 else I.ring.nvars + 1


def build_witness(I: Ideal, J: Ideal, seed: int = 0, tries: int = 20) -> SubvarietyWitness:
    """Choose ``p`` in ``J`` and ``f`` at random and keep the first valid pair."""
    rng = random.Random(seed)
    gens = [g for g in J.groebner() if not I.contains(g)]
    target = I + J
    r = _height(target) - _height(I)
    if r <= 0 or not gens:
        W = SubvarietyWitness(I, [], I.ring.one())
        if W.validates(J):
            return W
        raise WitnessError("J adds nothing to I but the witness does not validate")
    for _ in range(tries):
        ps = []
        for _k in range(r):
            p = I.ring.zero()
            for g in gens:
                p = p + g * rng.randint(-3, 3)
            ps.append(p)
        if any(not p for p in ps):
            continue
        base = I.add(*ps)
        if _height(base) != _height(I) + r:
            continue
        if same_radical(base, target):
            return SubvarietyWitness(I, ps, I.ring.one())
        extra, _ = saturate(base, target)
        for _j in range(3):
            f = I.ring.zero()
            for g in extra.groebner():
                f = f + g * rng.randint(-3, 3)
            if not f:
                continue
            W = SubvarietyWitness(I, ps, f)
            if W.validates(J):
                return W
    raise WitnessError(f"no witness found for {J} inside {I}")


# -- events and identification ----------------------------------------------


@dataclass(frozen=True)
class Event:
    chart: str  # the chart that was blown up
    round: int


def _events(tree: ChartTree) -> List[Event]:
    out = []
    for label in tree.labels():
        kids = tree.children(label)
        if kids:
            out.append(Event(label, kids[0].rounds[-1]))
    return out


def birth_event(tree: ChartTree, label: str, slot: int) -> Event:
    """The blow-up that created exceptional slot ``slot`` of chart ``label``."""
    c = tree.charts[label]
    path = tree.path(label)
    return Event(path[slot], c.rounds[slot])


def event_center(tree: ChartTree, ev: Event) -> Ideal:
    return tree.children(ev.chart)[0].center_in_parent


def _same_event_center(glue: Gluing, tree: ChartTree, a: Event, b: Event) -> bool:
    if a.round != b.round:
        return False
    if a.chart == b.chart:
        return True
    Ca, Cb = event_center(tree, a), event_center(tree, b)
    J, _ = glue.pull_ideal(a.chart, b.chart, Cb)
    if J.is_unit():
        return False
    return same_radical(J, Ca)


def same_divisor(tree: ChartTree, a: Tuple[str, int], b: Tuple[str, int], glue: Gluing | None = None) -> bool:
    """Whether slot ``a[1]`` of chart ``a[0]`` and slot ``b[1]`` of chart
    ``b[0]`` are pieces of one exceptional divisor."""
    for lab, slot in (a, b):
        if tree.charts[lab].exceptional[slot].is_unit():
            raise ValueError(f"slot {slot} is not visible in chart {lab}")
    glue = glue or Gluing(tree)
    ea, eb = birth_event(tree, *a), birth_event(tree, *b)
    return _same_event_center(glue, tree, ea, eb)


@dataclass
class DivisorTable:
    rows: Dict[str, List[int]]
    divisor_count: int
    birth: Dict[int, Tuple[str, List[str]]]
    rounds: Dict[int, int]
    event_label: Dict[str, int]
    c_components: Dict[int, int] = field(default_factory=dict)

    def label(self, chart: str, slot: int) -> int:
        return self.rows[chart][slot]

    def slots(self, chart: str) -> Dict[int, int]:
        """Global label -> local slot for the divisors visible in ``chart``."""
        return {g: k for k, g in enumerate(self.rows[chart]) if g}

    def labels(self) -> List[int]:
        return list(range(1, self.divisor_count + 1))

    def to_dict(self) -> dict:
        return {
            "count": self.divisor_count,
            "rows": {k: v for k, v in self.rows.items()},
            "birth": {
                str(g): {"chart": ch, "center": center, "round": self.rounds[g]}
                for g, (ch, center) in sorted(self.birth.items())
            },
            "c_components": {str(k): v for k, v in sorted(self.c_components.items())},
        }


def _containing_labels(tree: ChartTree, labels_of: Dict[Tuple[str, int], int], ev: Event) -> frozenset:
    """Global labels of the exceptional divisors containing the event's center."""
    c = tree.charts[ev.chart]
    center = event_center(tree, ev)
    out = set()
    for k in c.visible():
        if center.contains_ideal(c.exceptional[k]):
            out.add(labels_of[(ev.chart, k)])
    return frozenset(out)


def collect_divisors(tree: ChartTree, glue: Gluing | None = None) -> DivisorTable:
    glue = glue or Gluing(tree)
    events = _events(tree)
    by_round: Dict[int, List[Event]] = {}
    for ev in events:
        by_round.setdefault(ev.round, []).append(ev)
    labels_of: Dict[Tuple[str, int], int] = {}
    event_label: Dict[str, int] = {}
    birth: Dict[int, Tuple[str, List[str]]] = {}
    rounds: Dict[int, int] = {}
    nxt = 1
    for rnd in sorted(by_round):
        evs = sorted(by_round[rnd], key=lambda e: label_key(e.chart))
        inside = {ev: _containing_labels(tree, labels_of, ev) for ev in evs}
        parent = list(range(len(evs)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(len(evs)), 2):
            if find(i) == find(j):
                continue
            # centers lying in different exceptional divisors cannot agree
            if inside[evs[i]] != inside[evs[j]]:
                continue
            if _same_event_center(glue, tree, evs[i], evs[j]):
                parent[find(j)] = find(i)
        roots: Dict[int, int] = {}
        for i, ev in enumerate(evs):
            r = find(i)
            if r not in roots:
                roots[r] = nxt
                birth[nxt] = (ev.chart, [format_poly(g) for g in event_center(tree, ev).gens])
                rounds[nxt] = rnd
                nxt += 1
            event_label[ev.chart] = roots[r]
        # assign labels to the slots created in this round
        for label in tree.labels():
            c = tree.charts[label]
            for k, r in enumerate(c.rounds):
                if r == rnd:
                    labels_of[(label, k)] = event_label[tree.path(label)[k]]
    count = nxt - 1
    rows = {}
    for label in tree.labels():
        c = tree.charts[label]
        row = [0] * count
        for k in c.visible():
            row[k] = labels_of[(label, k)]
        rows[label] = row
    table = DivisorTable(rows, count, birth, rounds, event_label)
    for g in table.labels():
        try:
            table.c_components[g] = count_c_components(tree, table, g, False)
        except UnsupportedShape:
            pass
    return table


def global_row(tree: ChartTree, table: DivisorTable, label: str) -> List[int]:
    """Row in the style of the reference session: position = global label."""
    row = [0] * table.divisor_count
    for g in table.rows[label]:
        if g:
            row[g - 1] = g
    return row


# -- abstract resolution ------------------------------------------------------


def abstract_round(tree: ChartTree) -> int:
    """Last round in which a chart with singular strict transform was blown up."""
    from .groebner import is_smooth

    last = 0
    for label in tree.labels():
        kids = tree.children(label)
        if not kids:
            continue
        c = tree.charts[label]
        if not is_smooth(Ideal(c.ring, c.strict.groebner() + list(c.ambient.gens))):
            last = max(last, kids[0].rounds[-1])
    return last


def abstract_resolution(tree: ChartTree) -> Tuple[Dict[str, bool], Dict[str, bool]]:
    """Charts of the space reached when the strict transform became smooth.

    Blow-ups after that round only improve the normal crossings of the
    exceptional arrangement and are irrelevant for a non-embedded resolution.
    """
    R = abstract_round(tree)
    final, irrelevant = {}, {}
    for label in tree.labels():
        c = tree.charts[label]
        late = bool(c.rounds) and c.rounds[-1] > R
        kids = tree.children(label)
        irrelevant[label] = late
        final[label] = not late and (not kids or kids[0].rounds[-1] > R)
    return final, irrelevant


# -- C-components -------------------------------------------------------------


@dataclass(frozen=True)
class Splitting:
    """How a Q-irreducible curve or divisor breaks up over C.

    ``kind == "roots"``: split by the roots of the factors of ``q(var)``,
    every root giving an absolutely irreducible graph over affine space.
    ``kind == "conic"``: a plane conic after solving for linear variables;
    ``pieces`` is 1 for a smooth conic and 2 for a line pair.
    """

    chart: str
    var: str
    factors: Tuple[UPoly, ...]
    kind: str = "roots"
    pieces: int = 0

    @property
    def count(self) -> int:
        if self.kind == "conic":
            return self.pieces
        return sum(q.degree for q in self.factors)


def _is_graph(I: Ideal, var: str) -> bool:
    """``I`` is ``⟨q(var)⟩ + ⟨w - h(var, rest)⟩`` for some set of ``w``."""
    ring = I.ring
    others = [v for v in ring.vars if v != var]
    codim = codimension(I)
    for W in itertools.combinations(others, codim - 1):
        rest = [v for v in others if v not in W]
        perm = Ring(list(W) + [var] + rest)
        gb = Ideal(perm, [g.to_ring(perm) for g in I.gens]).groebner(LEX)
        k = len(W)
        if len(gb) != k + 1:
            continue
        solved, univariate = set(), 0
        for g in gb:
            lm = g.leading_monomial(LEX)
            used = [j for j in range(k) if any(e[j] for e in g.terms)]
            if used and sum(lm) == 1 and used == [lm.index(1)] and g.degree(lm.index(1)) == 1:
                solved.add(used[0])
            elif not used and all(not any(e[k + 1 :]) for e in g.terms):
                univariate += 1
        if solved == set(range(k)) and univariate == 1:
            return True
    return False


def _conic_pieces(I: Ideal) -> int:
    """1 for a smooth plane conic, 2 for a line pair, 0 if not a plane conic."""
    ring = I.ring
    codim = codimension(I)
    if ring.nvars - codim != 1:
        return 0
    for W in itertools.combinations(ring.vars, codim - 1):
        rest = [v for v in ring.vars if v not in W]
        perm = Ring(list(W) + rest)
        gb = Ideal(perm, [g.to_ring(perm) for g in I.gens]).groebner(LEX)
        k = len(W)
        solved, residual = set(), []
        for g in gb:
            used = [j for j in range(k) if any(e[j] for e in g.terms)]
            lm = g.leading_monomial(LEX)
            if used and sum(lm) == 1 and used == [lm.index(1)] and g.degree(lm.index(1)) == 1:
                solved.add(used[0])
            elif not used:
                residual.append(g)
        if solved != set(range(k)) or len(residual) != 1 or len(gb) != k + 1:
            continue
        c = residual[0]
        if c.degree() != 2:
            continue
        a, b = k, k + 1

        def co(i, j):
            e = [0] * perm.nvars
            e[a], e[b] = i, j
            return c.terms.get(tuple(e), Fraction(0))

        M = [
            [co(2, 0), co(1, 1) / 2, co(1, 0) / 2],
            [co(1, 1) / 2, co(0, 2), co(0, 1) / 2],
            [co(1, 0) / 2, co(0, 1) / 2, co(0, 0)],
        ]
        det = (
            M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
        )
        if det != 0:
            return 1
        minors2 = [
            M[i][j] * M[k2][l] - M[i][l] * M[k2][j]
            for i, k2 in itertools.combinations(range(3), 2)
            for j, l in itertools.combinations(range(3), 2)
        ]
        return 2 if any(minors2) else 0
    return 0


def find_splitting(I: Ideal, chart: str = "") -> Optional[Splitting]:
    """Recognise a splitting pattern for the irreducible-over-Q set ``V(I)``."""
    if I.is_unit():
        return None
    for v in I.ring.vars:
        p = univariate_eliminant(I, v)
        if p.is_zero() or p.degree < 1:
            continue
        _, facs = factor_univariate(squarefree_part(p))
        factors = tuple(q for q, _ in facs)
        good = True
        for q in factors:
            J = I.add(upoly_to_poly(q, I.ring, v))
            if J.is_unit() or not _is_graph(J, v):
                good = False
                break
        if good:
            return Splitting(chart, v, factors)
    pieces = _conic_pieces(I)
    if pieces:
        return Splitting(chart, "", (), "conic", pieces)
    return None


def divisor_ideal(tree: ChartTree, table: DivisorTable, g: int, label: str, restricted: bool) -> Optional[Ideal]:
    slots = table.slots(label)
    if g not in slots:
        return None
    c = tree.charts[label]
    I = c.exceptional[slots[g]] + c.ambient
    if restricted:
        I = I + c.strict
    return None if I.is_unit() else I


def splittings(tree: ChartTree, table: DivisorTable, g: int, restricted: bool, charts: Sequence[str] | None = None) -> List[Splitting]:
    found = []
    for label in charts if charts is not None else tree.labels():
        I = divisor_ideal(tree, table, g, label, restricted)
        if I is None:
            continue
        s = find_splitting(I, label)
        if s is not None:
            found.append(s)
    return found


def count_c_components(tree: ChartTree, table: DivisorTable, g: int, restricted_to_strict: bool = False, charts: Sequence[str] | None = None) -> int:
    """Number of components over C of divisor ``g`` (or of its trace on the
    strict transform)."""
    found = splittings(tree, table, g, restricted_to_strict, charts)
    if not found:
        raise UnsupportedShape(f"divisor {g}: no recognised splitting pattern in any chart")
    counts = {s.count for s in found}
    if len(counts) != 1:
        raise UnsupportedShape(f"divisor {g}: component counts disagree across charts: {sorted(counts)}")
    return counts.pop()


def count_components_of(I: Ideal) -> int:
    """Component count for a single ideal (raises on unrecognised shapes)."""
    s = find_splitting(I)
    if s is None:
        raise UnsupportedShape(f"no recognised splitting pattern for {I}")
    return s.count

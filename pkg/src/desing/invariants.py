"""Numerical invariants read off a resolution: N, nu, discrepancies, lct,
the intersection matrix of the exceptional curves and the dual graph."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .blowup import jacobian_det_of_map
from .divisors import (
    DivisorTable,
    Splitting,
    UnsupportedShape,
    abstract_resolution,
    collect_divisors,
    find_splitting,
)
from .gluing import Gluing, saturate_principal
from .groebner import (
    Ideal,
    dimension,
    divide,
    minors,
    saturate,
    singular_locus,
    univariate_eliminant,
    vector_space_dim,
)
from .poly import Poly, Ring
from .resolve import ChartTree
from .univariate import UPoly


class ConsistencyError(Exception):
    """Values computed in different charts disagree."""


# -- multiplicities -------------------------------------------------------------


def order_along(f: Poly, e: Poly) -> Tuple[int, Poly]:
    """Largest ``j`` with ``e^j | f`` and the cofactor."""
    if not f:
        raise ValueError("order of the zero polynomial")
    j = 0
    while True:
        q, r = divide(f, e)
        if r:
            return j, f
        f, j = q, j + 1


def _final_charts(tree: ChartTree) -> List[str]:
    return tree.final_labels() or tree.leaves()


def _per_divisor(tree: ChartTree, table: DivisorTable, value, what: str) -> List[int]:
    out = []
    for g in table.labels():
        seen = {}
        for label in _final_charts(tree):
            slots = table.slots(label)
            if g in slots:
                c = tree.charts[label]
                seen[label] = value(c, c.exceptional_generator(slots[g]))
        if not seen:
            raise ConsistencyError(f"divisor {g} is not visible in any final chart")
        vals = set(seen.values())
        if len(vals) != 1:
            raise ConsistencyError(f"{what} of divisor {g} differs across charts: {seen}")
        out.append(vals.pop())
    return out


def multiplicities_N(tree: ChartTree, table: DivisorTable) -> List[int]:
    """Orders of ``f∘π`` along the divisors, then 1 for the strict transform."""
    f = tree.f()
    vals = _per_divisor(tree, table, lambda c, e: order_along(c.map_to_root.pull(f), e)[0], "N")
    return vals + [1]


def multiplicities_nu(tree: ChartTree, table: DivisorTable) -> List[int]:
    """One plus the order of the Jacobian determinant, then 1 for the strict transform."""
    vals = _per_divisor(
        tree, table, lambda c, e: 1 + order_along(jacobian_det_of_map(c.map_to_root), e)[0], "nu"
    )
    return vals + [1]


def discrepancies(tree: ChartTree, table: DivisorTable, kind: str = "plain") -> List[int]:
    """``nu - N`` (log) or ``nu - N - 1`` (plain) per exceptional divisor."""
    if kind not in ("plain", "log"):
        raise ValueError(f"unknown discrepancy kind {kind!r}")
    N = multiplicities_N(tree, table)[:-1]
    nu = multiplicities_nu(tree, table)[:-1]
    shift = 1 if kind == "plain" else 0
    return [v - n - shift for n, v in zip(N, nu)]


def lct(tree: ChartTree, table: DivisorTable, include_strict: bool = False) -> Fraction:
    N = multiplicities_N(tree, table)
    nu = multiplicities_nu(tree, table)
    ratios = [Fraction(v, n) for n, v in zip(N[:-1], nu[:-1])]
    if include_strict or not ratios:
        ratios.append(Fraction(nu[-1], N[-1]))
    return min(ratios)


def bernstein_normal_crossing(r: Sequence[int]) -> UPoly:
    """``∏_i ∏_{k=1}^{r_i} (r_i s + k)``."""
    out = UPoly([1])
    for ri in r:
        if ri < 1:
            raise ValueError("exponents must be positive")
        for k in range(1, ri + 1):
            out = out * UPoly([k, ri])
    return out


# -- exceptional curves over C -------------------------------------------------


def _squarefree_int(n: int) -> Tuple[int, int]:
    """``n = s^2 * d`` with ``d`` squarefree; returns ``(s, d)``."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, d, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    return s, sign * d * n


@dataclass(frozen=True)
class CCurve:
    """One C-irreducible exceptional curve: a root of a factor of ``q``."""

    divisor: int
    factor: int
    sign: int
    split: Splitting
    field: Optional[int]  # squarefree d with the root in Q(sqrt d), None if rational

    def root_poly(self, ring: Ring, fields: Dict[int, str]) -> Poly:
        """The root as a polynomial in the field generator variables."""
        q = self.split.factors[self.factor]
        if q.degree == 1:
            return ring.const(-q.coeffs[0] / q.coeffs[1])
        c0, c1 = q.coeffs[0], q.coeffs[1]  # monic quadratic
        disc = c1 * c1 - 4 * c0
        s, d = _squarefree_int(disc.numerator * disc.denominator)
        coef = Fraction(s, disc.denominator)
        return (ring.const(-c1) + ring.gen(fields[d]) * (coef * self.sign)) / 2


class CurveSystem:
    """C-components of the exceptional curves on the abstract resolution."""

    def __init__(self, tree: ChartTree, table: DivisorTable, glue: Gluing | None = None):
        self.tree, self.table = tree, table
        self.glue = glue or Gluing(tree)
        final, _ = abstract_resolution(tree)
        self.charts = [l for l in tree.labels() if final[l]]
        self.curves: List[CCurve] = []
        fields = set()
        for g in table.labels():
            if not any(self._q_curve(g, l) is not None for l in self.charts):
                continue
            split = self._splitting(g)
            if split.kind == "conic":
                if split.pieces != 1:
                    raise UnsupportedShape(f"curve of divisor {g} is a line pair; components not separable")
                self.curves.append(CCurve(g, 0, 1, split, None))
                continue
            for i, q in enumerate(split.factors):
                if q.degree == 1:
                    self.curves.append(CCurve(g, i, 1, split, None))
                elif q.degree == 2:
                    c0, c1 = q.coeffs[0], q.coeffs[1]
                    disc = c1 * c1 - 4 * c0
                    _, d = _squarefree_int(disc.numerator * disc.denominator)
                    fields.add(d)
                    self.curves.append(CCurve(g, i, 1, split, d))
                    self.curves.append(CCurve(g, i, -1, split, d))
                else:
                    raise UnsupportedShape(f"curve of divisor {g} splits by a factor of degree {q.degree}")
        self.fields = {d: f"r{k}_" for k, d in enumerate(sorted(fields))}
        self._rings: Dict[str, Ring] = {}
        self._comp: Dict[Tuple[int, str], Ideal] = {}

    # the Q-curve E_g ∩ S in one chart
    def _q_curve(self, g: int, label: str) -> Optional[Ideal]:
        slots = self.table.slots(label)
        if g not in slots:
            return None
        c = self.tree.charts[label]
        I = c.exceptional[slots[g]] + c.strict + c.ambient
        return None if I.is_unit() else I

    def _splitting(self, g: int) -> Splitting:
        found = []
        for label in self.charts:
            I = self._q_curve(g, label)
            if I is None:
                continue
            s = find_splitting(I, label)
            if s is not None:
                found.append(s)
        if not found:
            raise UnsupportedShape(f"curve of divisor {g}: no recognised splitting pattern")
        if len({s.count for s in found}) != 1:
            raise UnsupportedShape(f"curve of divisor {g}: component counts disagree across charts")
        for s in found:
            if s.kind == "roots":
                return s
        return found[0]

    def ring(self, label: str) -> Ring:
        if label not in self._rings:
            base = self.tree.charts[label].ring
            self._rings[label] = base.extend(self.fields.values())
        return self._rings[label]

    def relations(self, label: str) -> List[Poly]:
        R = self.ring(label)
        return [R.gen(v) ** 2 - d for d, v in self.fields.items()]

    def lift(self, label: str, p: Poly) -> Poly:
        return p.to_ring(self.ring(label))

    def component(self, k: int, label: str) -> Ideal:
        """Ideal of curve ``k`` in chart ``label`` (unit if not visible)."""
        key = (k, label)
        if key in self._comp:
            return self._comp[key]
        cur = self.curves[k]
        R = self.ring(label)
        base = self._q_curve(cur.divisor, label)
        if base is None:
            out = Ideal(R, [R.one()])
        else:
            gens = [self.lift(label, g) for g in base.groebner()] + self.relations(label)
            if cur.split.kind == "conic":
                out = Ideal(R, gens)
            else:
                split = cur.split
                root = cur.root_poly(R, self.fields)
                if split.chart == label:
                    out = Ideal(R, gens + [R.gen(split.var) - root])
                else:
                    src = self.tree.charts[split.chart].ring
                    num, den = self.glue.transition(label, split.chart)[src.index(split.var)]
                    num, den = self.lift(label, num), self.lift(label, den)
                    out = saturate_principal(Ideal(R, gens + [den * root - num]), den)
        self._comp[key] = out
        return out

    def local_count(self, label: str, K: Ideal) -> int:
        """Length of the zero-dimensional ``K`` at points not in earlier charts,
        divided by the degree of the coefficient field."""
        if K.is_unit():
            return 0
        if dimension(K) > 0:
            raise UnsupportedShape(f"intersection in chart {label} is not finite")
        earlier = self.charts[: self.charts.index(label)]
        dens = []
        for e in earlier:
            D = self.glue.overlap_denominator(label, e)
            if D.is_constant():
                return 0
            dens.append(self.lift(label, D))
        total = vector_space_dim(K)
        if dens:
            rest, _ = saturate(K, Ideal(K.ring, dens))
            total -= 0 if rest.is_unit() else vector_space_dim(rest)
        deg = 2 ** len(self.fields)
        if total % deg:
            raise ConsistencyError(f"length {total} in chart {label} not divisible by field degree {deg}")
        return total // deg

    def meet(self, i: int, j: int) -> int:
        total = 0
        for label in self.charts:
            Ci, Cj = self.component(i, label), self.component(j, label)
            if Ci.is_unit() or Cj.is_unit():
                continue
            total += self.local_count(label, Ci + Cj)
        return total


# -- intersection matrix ----------------------------------------------------------


@dataclass
class IntersectionMatrix:
    labels: List[str]
    matrix: List[List[int]]
    divisors: List[int]
    pullback: List[int]  # multiplicities c_i of the generic hyperplane section
    hyperplane: str

    def is_symmetric(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(n))

    def is_negative_definite(self) -> bool:
        n = len(self.matrix)
        for k in range(1, n + 1):
            d = _det([[Fraction(x) for x in row[:k]] for row in self.matrix[:k]])
            if (d > 0) != (k % 2 == 0) or d == 0:
                return False
        return True


def _det(M: List[List[Fraction]]) -> Fraction:
    M = [row[:] for row in M]
    n, det = len(M), Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        for r in range(i + 1, n):
            fac = M[r][i] / M[i][i]
            for c in range(i, n):
                M[r][c] -= fac * M[i][c]
    return det


def singular_point(tree: ChartTree) -> Tuple[Fraction, ...]:
    """The unique singular point of ``V(f)``, which must be rational."""
    I = tree.input
    sing = singular_locus(I, 1)
    if sing.is_unit():
        raise UnsupportedShape("the hypersurface is smooth")
    if dimension(sing) != 0:
        raise UnsupportedShape("the singularity is not isolated")
    point = []
    for v in I.ring.vars:
        p = univariate_eliminant(sing, v)
        from .univariate import squarefree_part

        p = squarefree_part(p)
        if p.degree != 1:
            raise UnsupportedShape("expected a single rational singular point")
        point.append(-p.coeffs[0] / p.coeffs[1])
    return tuple(point)


def _hyperplanes(ring: Ring, point) -> List[Poly]:
    lin = [ring.gen(v) - c for v, c in zip(ring.vars, point)]
    out = list(lin)
    for coeffs in itertools.product((1, 2, 3), repeat=len(lin)):
        out.append(sum((l * a for l, a in zip(lin, coeffs)), ring.zero()))
    return out


def _strict_of(c, p: Poly) -> Poly:
    for k in c.visible():
        _, p = order_along(p, c.exceptional_generator(k))
    return p


def _generically_reduced(I: Ideal, gens: List[Poly]) -> bool:
    M = [[g.diff(v) for v in I.ring.vars] for g in gens]
    J = I.add(*minors(M, len(gens)))
    return dimension(J) < dimension(I)


def intersection_matrix(tree: ChartTree, table: DivisorTable | None = None, glue: Gluing | None = None) -> IntersectionMatrix:
    if tree.ring.nvars != 3:
        raise UnsupportedShape("intersection matrices need a surface in 3-space")
    if not tree.covered:
        raise UnsupportedShape("pruned tree no longer covers the exceptional curves")
    glue = glue or Gluing(tree)
    table = table or collect_divisors(tree, glue)
    if table.divisor_count == 0:
        return IntersectionMatrix([], [], [], [], "")
    sysm = CurveSystem(tree, table, glue)
    curves = sysm.curves
    n = len(curves)
    if n == 0:
        return IntersectionMatrix([], [], [], [], "")
    M = [[0] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        M[i][j] = M[j][i] = sysm.meet(i, j)
    # generically reduced traces, so orders along E_g equal orders along its curve
    for g in sorted({c.divisor for c in curves}):
        for label in sysm.charts:
            I = sysm._q_curve(g, label)
            if I is None:
                continue
            ch = tree.charts[label]
            gens = [ch.exceptional_generator(table.slots(label)[g]), ch.strict_generator()]
            if not _generically_reduced(I, gens):
                raise UnsupportedShape(f"divisor {g} is tangent to the strict transform along a curve")
    point = singular_point(tree)
    last_error = None
    for h in _hyperplanes(tree.ring, point):
        try:
            c_of = {}
            for g in sorted({c.divisor for c in curves}):
                vals = set()
                for label in sysm.charts:
                    slots = table.slots(label)
                    if g in slots and sysm._q_curve(g, label) is not None:
                        ch = tree.charts[label]
                        vals.add(order_along(ch.map_to_root.pull(h), ch.exceptional_generator(slots[g]))[0])
                if len(vals) != 1:
                    raise ConsistencyError(f"pullback order along divisor {g}: {vals}")
                c_of[g] = vals.pop()
            HE = []
            for k in range(n):
                tot = 0
                for label in sysm.charts:
                    C = sysm.component(k, label)
                    if C.is_unit():
                        continue
                    ch = tree.charts[label]
                    hs = sysm.lift(label, _strict_of(ch, ch.map_to_root.pull(h)))
                    tot += sysm.local_count(label, C.add(hs))
                HE.append(tot)
        except UnsupportedShape as exc:
            last_error = exc
            continue
        cs = [c_of[c.divisor] for c in curves]
        for j in range(n):
            s = sum(cs[i] * M[i][j] for i in range(n) if i != j) + HE[j]
            if s % cs[j]:
                raise ConsistencyError(f"self-intersection of curve {j} is not an integer")
            M[j][j] = -s // cs[j]
        names = _curve_names(curves)
        return IntersectionMatrix(names, M, [c.divisor for c in curves], cs, str(h))
    raise UnsupportedShape(f"no hyperplane section in general position found ({last_error})")


def _curve_names(curves: Sequence[CCurve]) -> List[str]:
    per: Dict[int, int] = {}
    for c in curves:
        per[c.divisor] = per.get(c.divisor, 0) + 1
    seen: Dict[int, int] = {}
    out = []
    for c in curves:
        seen[c.divisor] = seen.get(c.divisor, 0) + 1
        out.append(f"E{c.divisor}" if per[c.divisor] == 1 else f"E{c.divisor}_{seen[c.divisor]}")
    return out


def pullback_residuals(m: IntersectionMatrix, HE: Sequence[int]) -> List[int]:
    n = len(m.matrix)
    return [sum(m.pullback[i] * m.matrix[i][j] for i in range(n)) + HE[j] for j in range(n)]


# -- dual graph -------------------------------------------------------------------


@dataclass
class DualGraph:
    vertices: List[Tuple[str, Optional[int]]]  # (name, self-intersection or None if -2)
    edges: List[Tuple[int, int, int]]  # (i, j, multiplicity)

    def to_dot(self) -> str:
        lines = ["graph dual {"]
        for k, (name, label) in enumerate(self.vertices):
            text = "" if label is None else str(label)
            lines.append(f'  v{k} [label="{text}", tooltip="{name}"];')
        for i, j, mult in self.edges:
            extra = "" if mult == 1 else f' [label="{mult}"]'
            lines.append(f"  v{i} -- v{j}{extra};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def dual_graph(m: IntersectionMatrix) -> DualGraph:
    """One vertex per curve (labelled unless the self-intersection is -2) and
    one edge per pair of meeting curves."""
    verts = [(name, None if m.matrix[k][k] == -2 else m.matrix[k][k]) for k, name in enumerate(m.labels)]
    edges = []
    for i, j in itertools.combinations(range(len(m.labels)), 2):
        if m.matrix[i][j]:
            edges.append((i, j, m.matrix[i][j]))
    return DualGraph(verts, edges)


def invariant_report(tree: ChartTree, table: DivisorTable, with_matrix: bool = True) -> dict:
    N = multiplicities_N(tree, table)
    nu = multiplicities_nu(tree, table)
    rep = {
        "N": N,
        "nu": nu,
        "discrepancy": discrepancies(tree, table, "plain"),
        "lct": str(lct(tree, table, False)),
    }
    if with_matrix:
        rep["matrix"] = intersection_matrix(tree, table).matrix if table.divisor_count else []
    return rep

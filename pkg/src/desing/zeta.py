"""Euler characteristics of the strata of a resolution, the topological zeta
function and the characteristic polynomial of the monodromy.

Strata ``E_J`` are intersections of the components of the total transform
(exceptional divisors plus the strict transform).  Points are counted and
affine pieces of curves are measured in the final charts, each chart only
contributing what no earlier chart already saw.  Surfaces carry their Euler
characteristic through a ledger started at the moment of their birth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .divisors import DivisorTable, UnsupportedShape, event_center
from .gluing import Gluing
from .groebner import (
    Ideal,
    count_points,
    determinant,
    dimension,
    radical_membership,
    saturate,
    vector_space_dim,
)
from .invariants import multiplicities_N, multiplicities_nu
from .order import LEX
from .poly import Poly, Ring
from .resolve import ChartTree, label_key
from .univariate import RationalFunction, UPoly


# -- Euler characteristics of exceptional divisors ----------------------------


def birth_chi(center_dim: int, center_genus: int = 0, ambient_dim: int = 3) -> int:
    """Euler characteristic of a fresh exceptional divisor over a connected,
    compact, smooth center."""
    if ambient_dim == 2:
        if center_dim != 0:
            raise ValueError("plane blow-ups have point centers")
        return 2
    if ambient_dim != 3:
        raise ValueError(f"unsupported ambient dimension {ambient_dim}")
    if center_dim == 0:
        return 3
    if center_dim == 1:
        if center_genus < 0:
            raise ValueError("genus must be non-negative")
        return 4 - 4 * center_genus
    raise ValueError(f"unsupported center dimension {center_dim}")


@dataclass
class ChiLedger:
    birth: Dict[int, int] = field(default_factory=dict)
    updates: Dict[int, List[Tuple[int, int]]] = field(default_factory=dict)

    def current(self, g: int) -> int:
        return self.birth[g] + sum(d for _, d in self.updates.get(g, []))

    def record(self, g: int, cause: int, delta: int) -> None:
        self.updates.setdefault(g, []).append((cause, delta))


def _event_charts(table: DivisorTable, g: int) -> List[str]:
    return sorted((ch for ch, lab in table.event_label.items() if lab == g), key=label_key)


def _count_new_points(glue: Gluing, charts: Sequence[str], ideals: Dict[str, Ideal]) -> int:
    total = 0
    for k, label in enumerate(charts):
        I = ideals.get(label)
        if I is None or I.is_unit():
            continue
        J = glue.new_part(label, charts[:k], I)
        if J.is_unit():
            continue
        if dimension(J) > 0:
            raise UnsupportedShape(f"expected finitely many points in chart {label}")
        total += count_points(J)
    return total


def center_chi(tree: ChartTree, table: DivisorTable, g: int, glue: Gluing) -> int:
    """Euler characteristic of the (compact) center that created divisor ``g``."""
    charts = _event_charts(table, g)
    total = 0
    for k, label in enumerate(charts):
        C = event_center(tree, _ev(tree, label))
        J = glue.new_part(label, charts[:k], C)
        if J.is_unit():
            continue
        # a center is a graph over affine space, so it is irreducible
        if dimension(J) == dimension(C):
            total += 1 if dimension(C) <= 1 else _raise_dim(C)
        else:
            total += count_points(J)
    return total


def _raise_dim(C):
    raise UnsupportedShape(f"center {C} has dimension > 1")


def _ev(tree: ChartTree, label: str):
    from .divisors import Event

    return Event(label, tree.children(label)[0].rounds[-1])


def update_chi(ledger: ChiLedger, tree: ChartTree, table: DivisorTable, g: int, glue: Gluing) -> ChiLedger:
    """Account for the blow-up creating divisor ``g`` on the older divisors."""
    n = tree.ring.nvars
    charts = _event_charts(table, g)
    centers = {l: event_center(tree, _ev(tree, l)) for l in charts}
    cdim = dimension(next(iter(centers.values())))
    if n == 2:
        return ledger  # a point blow-up of a curve is an isomorphism
    for k in sorted(ledger.birth):
        if k >= g:
            continue
        inside, meets = False, {}
        for l in charts:
            slots = table.slots(l)
            if k not in slots:
                continue
            E = tree.charts[l].exceptional[slots[k]]
            if centers[l].contains_ideal(E):
                inside = True
            else:
                meets[l] = centers[l] + E
        if cdim == 0:
            if inside:
                ledger.record(k, g, 1)
            continue
        if inside:
            continue
        pts = _count_new_points(glue, charts, meets)
        lengths = sum(vector_space_dim(I) for I in meets.values() if not I.is_unit() and dimension(I) == 0)
        if pts and lengths < pts:
            raise UnsupportedShape("center meets a divisor in a non-finite set")
        if pts:
            ledger.record(k, g, pts)
    return ledger


def build_ledger(tree: ChartTree, table: DivisorTable, glue: Gluing | None = None) -> ChiLedger:
    glue = glue or Gluing(tree)
    n = tree.ring.nvars
    ledger = ChiLedger()
    for g in table.labels():
        charts = _event_charts(table, g)
        C = event_center(tree, _ev(tree, charts[0]))
        cdim = dimension(C)
        if n == 2 or cdim == 0:
            ledger.birth[g] = birth_chi(0, 0, n)
        else:
            chi = center_chi(tree, table, g, glue)
            if chi % 2 or chi > 2:
                raise UnsupportedShape(f"center of divisor {g} has Euler characteristic {chi}")
            ledger.birth[g] = birth_chi(1, (2 - chi) // 2, n)
        update_chi(ledger, tree, table, g, glue)
    return ledger


# -- curves -------------------------------------------------------------------


def _linear_forms(ring: Ring) -> List[Poly]:
    xs = ring.gens()
    out = []
    for coeffs in [(1, 2, 3, 5), (1, -1, 2, 3), (2, 1, -1, 4), (3, 1, 2, -1), (1, 3, -2, 2)]:
        out.append(sum((x * a for x, a in zip(xs, coeffs)), ring.zero()))
    return out


def _finite_over(I: Ideal, ell: Poly) -> bool:
    """Whether the linear form ``ell`` is a finite map on ``V(I)``: after
    making ``ell`` a coordinate ``t``, a lex basis with ``t`` last must hold
    a monic power of every other variable."""
    ring = I.ring
    n = ring.nvars
    unit = lambda k: tuple(int(j == k) for j in range(n))
    lead = next(k for k in range(n) if ell.terms.get(unit(k)))
    others = [v for k, v in enumerate(ring.vars) if k != lead]
    new = Ring(others + ["t_"])
    rest = new.const(ell.constant_value())
    for k in range(n):
        if k != lead:
            rest = rest + new.gen(ring.vars[k]) * ell.terms.get(unit(k), Fraction(0))
    images = [new.gen(v) if k != lead else None for k, v in enumerate(ring.vars)]
    images[lead] = (new.gen("t_") - rest) / ell.terms[unit(lead)]
    gb = Ideal(new, [g.compose(images, new) for g in I.gens]).groebner(LEX)
    leads = [g.leading_monomial(LEX) for g in gb]
    return all(any(m[i] > 0 and sum(m) == m[i] for m in leads) for i in range(len(others)))


def smooth_curve_chi(C: Ideal, local_gens: Sequence[Poly]) -> int:
    """Euler characteristic of a smooth affine curve cut out transversally by
    ``local_gens`` near each of its points (Riemann-Hurwitz for a generic
    linear projection to the line)."""
    if C.is_unit():
        return 0
    ring = C.ring
    for ell in _linear_forms(ring):
        if not _finite_over(C, ell):
            continue
        degs = set()
        for t0 in (7, 11, 13):
            F = C.add(ell - t0)
            d = vector_space_dim(F)
            if count_points(F) != d:
                break
            degs.add(d)
        else:
            if len(degs) != 1:
                continue
            deg = degs.pop()
            M = [[g.diff(v) for v in ring.vars] for g in list(local_gens) + [ell]]
            R = C.add(determinant(M))
            ram = 0 if R.is_unit() else vector_space_dim(R)
            return deg - ram
    raise UnsupportedShape(f"no finite generic projection found for {C}")


# -- strata -------------------------------------------------------------------


@dataclass
class Stratum:
    J: Tuple[int, ...]
    chi_EJ: int
    chi_EJ_star: int
    chi_EJ_star_over_origin: int


class Stratifier:
    """Euler characteristics of all ``E_J`` meeting the exceptional locus."""

    def __init__(self, tree: ChartTree, table: DivisorTable, glue: Gluing | None = None):
        if not tree.covered:
            raise UnsupportedShape("pruned tree without certified coverage of the origin fibre")
        self.tree, self.table = tree, table
        self.glue = glue or Gluing(tree)
        self.n = tree.ring.nvars
        self.m = table.divisor_count
        self.strict = self.m + 1
        self.leaves = tree.leaves()
        self.ledger = build_ledger(tree, table, self.glue) if self.m else ChiLedger()

    def gens(self, label: str, J: Sequence[int]) -> Optional[List[Poly]]:
        c = self.tree.charts[label]
        slots = self.table.slots(label)
        out = []
        for j in J:
            if j == self.strict:
                out.append(c.strict_generator())
            elif j in slots:
                out.append(c.exceptional_generator(slots[j]))
            else:
                return None
        return out

    def chi_E(self, J: Tuple[int, ...]) -> int:
        dim = self.n - len(J)
        if dim == self.n - 1 and J != (self.strict,):
            return self.ledger.current(J[0])
        if dim == 0:
            ideals = {}
            for l in self.leaves:
                gs = self.gens(l, J)
                if gs is not None:
                    ideals[l] = Ideal(self.tree.charts[l].ring, gs)
            return _count_new_points(self.glue, self.leaves, ideals)
        if dim == 1:
            return self._curve_chi(J)
        raise UnsupportedShape(f"stratum {J} of dimension {dim}")

    def _curve_chi(self, J: Tuple[int, ...]) -> int:
        total = 0
        for k, l in enumerate(self.leaves):
            gs = self.gens(l, J)
            if gs is None:
                continue
            ring = self.tree.charts[l].ring
            C = Ideal(ring, gs)
            if C.is_unit():
                continue
            dens = []
            skip = False
            for e in self.leaves[:k]:
                D = self.glue.overlap_denominator(l, e)
                if D.is_constant():
                    skip = True
                    break
                dens.append(D)
            if skip:
                continue
            K = C.add(*dens)
            if K.is_unit():
                continue
            if dimension(K) <= 0:
                total += count_points(K)
                continue
            other, _ = saturate(C, K) if dens else (Ideal(ring, [ring.one()]), 0)
            curve = C if other.is_unit() else saturate(C, other)[0]
            total += smooth_curve_chi(curve, gs)
            if not other.is_unit():
                total += count_points(K + other)
        return total

    def components(self) -> List[int]:
        return list(range(1, self.m + 1)) + [self.strict]

    def strata(self) -> List[Stratum]:
        """Non-empty strata ``E_J`` with at least one exceptional divisor."""
        present: List[Tuple[int, ...]] = []
        for r in range(1, self.n + 1):
            for J in itertools.combinations(self.components(), r):
                if J == (self.strict,):
                    continue
                faces = [tuple(x for x in J if x != j) for j in J] if r > 1 else []
                if any(F != (self.strict,) and F not in present for F in faces):
                    continue
                if self._nonempty(J):
                    present.append(J)
        chi = {J: self.chi_E(J) for J in present}
        star: Dict[Tuple[int, ...], int] = {}
        for J in sorted(present, key=len, reverse=True):
            star[J] = chi[J] - sum(v for K, v in star.items() if set(J) < set(K))
        return [Stratum(J, chi[J], star[J], star[J]) for J in sorted(present, key=lambda J: (len(J), J))]

    def _nonempty(self, J) -> bool:
        for l in self.leaves:
            gs = self.gens(l, J)
            if gs is not None and not Ideal(self.tree.charts[l].ring, gs).is_unit():
                return True
        return False


def _quasi_homogeneous(f: Poly) -> bool:
    """Positive weights with every monomial of weighted degree one."""
    rows = [list(map(Fraction, e)) + [Fraction(1)] for e in f.terms]
    n = f.ring.nvars
    piv_cols, r = [], 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                fac = rows[i][col]
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows):
        return False
    w = [Fraction(1)] * n
    for i, col in enumerate(piv_cols):
        w[col] = rows[i][-1] - sum(rows[i][k] for k in range(n) if k not in piv_cols)
    return all(x > 0 for x in w)


def _check_scope(tree: ChartTree, table: DivisorTable) -> None:
    f = tree.f()
    if f.constant_value() != 0:
        raise UnsupportedShape("the origin does not lie on the hypersurface")
    if not _quasi_homogeneous(f):
        raise UnsupportedShape("global strata need a quasi-homogeneous polynomial")
    for ch, g in table.event_label.items():
        c = tree.charts[ch]
        C = event_center(tree, _ev(tree, ch))
        for img in c.map_to_root.images:
            if not radical_membership(img, C):
                raise UnsupportedShape(f"divisor {g} does not lie over the origin")


def stratify(tree: ChartTree, table: DivisorTable, at_origin: bool = False) -> List[Stratum]:
    _check_scope(tree, table)
    return Stratifier(tree, table).strata()


def _term(J: Sequence[int], N: Sequence[int], nu: Sequence[int]) -> RationalFunction:
    den = UPoly([1])
    for j in J:
        den = den * UPoly([nu[j - 1], N[j - 1]])
    return RationalFunction(UPoly([1]), den)


def zeta_top(tree: ChartTree, table: DivisorTable, d: int = 1, local: bool = False, strata: List[Stratum] | None = None) -> RationalFunction:
    """Topological zeta function ``Z_top^(d)``.

    Supported when the polynomial is quasi-homogeneous and every exceptional
    divisor lies over the origin: then ``V(f)`` is contractible, the strata
    without exceptional divisors contribute nothing (unless there are no
    exceptional divisors at all) and global and local versions agree.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if not tree.covered:
        raise UnsupportedShape("pruned tree without certified coverage of the origin fibre")
    _check_scope(tree, table)
    N = multiplicities_N(tree, table)
    nu = multiplicities_nu(tree, table)
    strict = table.divisor_count + 1
    total = RationalFunction(UPoly([0]))
    if table.divisor_count == 0:
        # identity resolution of a smooth germ: V(f) and its origin fibre are
        # contractible, the complement has Euler characteristic zero
        if d == 1:
            total = total + _term([strict], N, nu)
        return total
    if strata is None:
        strata = Stratifier(tree, table).strata()
    for st in strata:
        if all(N[j - 1] % d == 0 for j in st.J) and st.chi_EJ_star:
            chi = st.chi_EJ_star_over_origin if local else st.chi_EJ_star
            total = total + _term(st.J, N, nu) * chi
    return total


def monodromy_charpoly(tree: ChartTree, table: DivisorTable, strata: List[Stratum] | None = None) -> UPoly:
    """A'Campo: ``ζ(t) = ∏ (1 - t^N_j)^(χ(E_j° ∩ π⁻¹(0)))``, turned into the
    characteristic polynomial of the monodromy on the middle cohomology of
    the Milnor fibre (variable ``s``)."""
    _check_scope(tree, table)
    n = tree.ring.nvars
    N = multiplicities_N(tree, table)
    num, den = UPoly([1]), UPoly([1])
    if table.divisor_count == 0:
        factors = [(1, 1)]  # the origin on the smooth strict transform
    else:
        if strata is None:
            strata = Stratifier(tree, table).strata()
        factors = [(N[st.J[0] - 1], st.chi_EJ_star_over_origin) for st in strata if len(st.J) == 1]
    for Nj, chi in factors:
        p = UPoly([-1] + [0] * (Nj - 1) + [1])
        if chi > 0:
            num = num * p**chi
        elif chi < 0:
            den = den * p ** (-chi)
    den = den * UPoly([-1, 1])
    if (n - 1) % 2:
        num, den = den, num
    q, r = num.divmod(den)
    if not r.is_zero():
        raise UnsupportedShape("monodromy product is not a polynomial")
    return q.monic()


def zeta_report(tree: ChartTree, table: DivisorTable, d: int = 1, local: bool = False) -> dict:
    strata = Stratifier(tree, table).strata() if table.divisor_count else []
    Z = zeta_top(tree, table, d, local, strata)
    mono = monodromy_charpoly(tree, table, strata)
    return {
        "d": d,
        "scope": "local" if local else "global",
        "numerator": [str(c) for c in Z.num.coeffs],
        "denominator": [str(c) for c in Z.den.coeffs],
        "text": str(Z),
        "monodromy": [str(c) for c in mono.coeffs],
        "monodromy_text": str(mono),
    }

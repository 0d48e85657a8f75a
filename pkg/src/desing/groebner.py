"""Buchberger's algorithm and the ideal operations built on it."""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .order import DEGREVLEX, TermOrder, elimination
from .poly import Monomial, Poly, Ring
from .univariate import UPoly, squarefree_part


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


class _Lead:
    __slots__ = ("poly", "lm", "lc")

    def __init__(self, poly: Poly, order: TermOrder):
        self.poly = poly
        self.lm = poly.leading_monomial(order)
        self.lc = poly.terms[self.lm]


def _reduce(f: Poly, basis: Sequence[_Lead], order: TermOrder, full: bool = True) -> Poly:
    """Remainder of ``f`` on division by ``basis``."""
    p: Dict[Monomial, Fraction] = dict(f.terms)
    rem: Dict[Monomial, Fraction] = {}
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for g in basis:
            if _divides(g.lm, m):
                shift = _sub(m, g.lm)
                factor = c / g.lc
                for e, gc in g.poly.terms.items():
                    ne = tuple(a + b for a, b in zip(e, shift))
                    v = p.get(ne, 0) - factor * gc
                    if v:
                        p[ne] = v
                    else:
                        p.pop(ne, None)
                break
        else:
            rem[m] = c
            del p[m]
            if not full:
                rem.update(p)
                break
    return Poly(f.ring, rem)


def normal_form(f: Poly, G: Sequence[Poly], order: TermOrder = DEGREVLEX) -> Poly:
    """Remainder of ``f`` modulo the Gröbner basis ``G``."""
    return _reduce(f, [_Lead(g, order) for g in G if g], order)


def _spoly(a: _Lead, b: _Lead) -> Poly:
    m = _lcm(a.lm, b.lm)
    return a.poly.mul_term(_sub(m, a.lm), 1 / a.lc) - b.poly.mul_term(_sub(m, b.lm), 1 / b.lc)


def _interreduce(G: List[Poly], order: TermOrder) -> List[Poly]:
    leads = [_Lead(g.monic(order), order) for g in G if g]
    # minimal basis: drop elements whose leading monomial is divisible by another
    leads.sort(key=lambda l: order.key(l.lm))
    minimal: List[_Lead] = []
    for l in leads:
        if not any(_divides(m.lm, l.lm) for m in minimal):
            minimal.append(l)
    out = []
    for i, l in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = _reduce(l.poly, others, order)
        out.append(r.monic(order))
    out.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return out


def buchberger(polys: Iterable[Poly], order: TermOrder = DEGREVLEX) -> List[Poly]:
    """Reduced Gröbner basis of the ideal generated by ``polys``."""
    basis: List[_Lead] = []
    for f in polys:
        if f:
            if f.is_constant():
                return [f.ring.one()]
            basis.append(_Lead(f.monic(order), order))
    if not basis:
        return []
    pairs = set(itertools.combinations(range(len(basis)), 2))
    while pairs:
        i, j = min(pairs, key=lambda ij: (order.key(_lcm(basis[ij[0]].lm, basis[ij[1]].lm)), ij))
        pairs.discard((i, j))
        a, b = basis[i], basis[j]
        m = _lcm(a.lm, b.lm)
        if m == tuple(x + y for x, y in zip(a.lm, b.lm)):
            continue
        if any(
            k not in (i, j)
            and _divides(basis[k].lm, m)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        h = _reduce(_spoly(a, b), basis, order)
        if h:
            if h.is_constant():
                return [h.ring.one()]
            n = len(basis)
            basis.append(_Lead(h.monic(order), order))
            pairs.update((k, n) for k in range(n))
    return _interreduce([l.poly for l in basis], order)


class Ideal:
    """An ideal given by generators, with per-order Gröbner basis caching."""

    def __init__(self, ring: Ring, gens: Iterable[Poly] = ()):
        self.ring = ring
        gens = tuple(g for g in gens)
        for g in gens:
            if g.ring != ring:
                raise ValueError(f"generator {g} not in {ring}")
        self.gens = tuple(g for g in gens if g)
        self._gb: Dict[TermOrder, Tuple[Poly, ...]] = {}
        self._lock = threading.Lock()

    def __getstate__(self):
        state = dict(self.__dict__)
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, ring: Ring, *texts: str) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    def groebner(self, order: TermOrder = DEGREVLEX) -> List[Poly]:
        gb = self._gb.get(order)
        if gb is None:
            gb = tuple(buchberger(self.gens, order))
            with self._lock:
                self._gb.setdefault(order, gb)
        return list(gb)

    def reduce(self, f: Poly, order: TermOrder = DEGREVLEX) -> Poly:
        return normal_form(f, self.groebner(order), order)

    def contains(self, f: Poly) -> bool:
        return not self.reduce(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            return NotImplemented
        return self.groebner() == other.groebner()

    def __hash__(self):
        return hash((self.ring, tuple(self.groebner())))

    def is_unit(self) -> bool:
        return self.groebner() == [self.ring.one()]

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def power(self, k: int) -> "Ideal":
        out = Ideal(self.ring, [self.ring.one()])
        for _ in range(k):
            out = out * self
        return out

    def add(self, *polys: Poly) -> "Ideal":
        return Ideal(self.ring, self.gens + tuple(polys))

    def map(self, fn) -> "Ideal":
        return Ideal(self.ring, [fn(g) for g in self.gens])

    def to_ring(self, ring: Ring) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def is_principal_generated(self) -> bool:
        return len(self.groebner()) <= 1

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.gens)) or '0'}>"


def groebner(I: Ideal, order: TermOrder = DEGREVLEX) -> List[Poly]:
    return I.groebner(order)


def _permuted_ring(ring: Ring, first: Sequence[str]) -> Ring:
    rest = [v for v in ring.vars if v not in first]
    return Ring(list(first) + rest)


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    """``I`` intersected with the subring without the ``drop`` variables.

    The result lives in the ring of the remaining variables.
    """
    drop = [v for v in I.ring.vars if v in set(drop)]
    keep = [v for v in I.ring.vars if v not in drop]
    work = _permuted_ring(I.ring, drop)
    gb = buchberger([g.to_ring(work) for g in I.gens], elimination(len(drop)))
    small = Ring(keep)
    k = len(drop)
    out = [g for g in gb if not any(e[:k] != (0,) * k for e in g.terms)]
    return Ideal(small, [g.to_ring(small) for g in out])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` via elimination of a tag variable."""
    tag = _fresh(I.ring, "tag")
    big = Ring((tag,) + I.ring.vars)
    t = big.gen(tag)
    gens = [t * g.to_ring(big) for g in I.gens] + [(1 - t) * g.to_ring(big) for g in J.gens]
    return eliminate(Ideal(big, gens), [tag]).to_ring(I.ring)


def _fresh(ring: Ring, base: str) -> str:
    name = base
    k = 0
    while name in ring.vars:
        k += 1
        name = f"{base}{k}"
    return name


def quotient(I: Ideal, J: Ideal) -> Ideal:
    """Ideal quotient ``I : J``."""
    if J.is_zero():
        return Ideal(I.ring, [I.ring.one()])
    result = None
    for g in J.gens:
        if I.contains(g):
            part = Ideal(I.ring, [I.ring.one()])
        elif I.is_zero():
            part = I
        else:
            meet = intersect(I, Ideal(I.ring, [g]))
            part = Ideal(I.ring, [exact_divide(h, g) for h in meet.groebner()])
        result = part if result is None else intersect(result, part)
    return Ideal(I.ring, result.groebner())


def exact_divide(f: Poly, g: Poly) -> Poly:
    """``f / g`` when ``g`` divides ``f``; raises ArithmeticError otherwise."""
    q, r = divide(f, g)
    if r:
        raise ArithmeticError(f"{g} does not divide {f}")
    return q


def divide(f: Poly, g: Poly, order: TermOrder = DEGREVLEX) -> Tuple[Poly, Poly]:
    """Multivariate division by a single polynomial: ``f = q*g + r``."""
    lead = _Lead(g, order)
    p = dict(f.terms)
    q: Dict[Monomial, Fraction] = {}
    rem: Dict[Monomial, Fraction] = {}
    while p:
        m = max(p, key=order.key)
        c = p[m]
        if _divides(lead.lm, m):
            shift = _sub(m, lead.lm)
            factor = c / lead.lc
            q[shift] = q.get(shift, 0) + factor
            for e, gc in g.terms.items():
                ne = tuple(a + b for a, b in zip(e, shift))
                v = p.get(ne, 0) - factor * gc
                if v:
                    p[ne] = v
                else:
                    p.pop(ne, None)
        else:
            rem[m] = c
            del p[m]
    return Poly(f.ring, q), Poly(f.ring, rem)


def saturate(I: Ideal, J: Ideal) -> Tuple[Ideal, int]:
    """``I : J^∞`` together with the number of quotient steps until stable."""
    current = Ideal(I.ring, I.groebner())
    k = 0
    while True:
        nxt = quotient(current, J)
        if nxt == current:
            return current, k
        current = nxt
        k += 1


def dimension(I: Ideal) -> int:
    """Krull dimension of ``R/I`` from the leading-term ideal; -1 for ⟨1⟩."""
    gb = I.groebner(DEGREVLEX)
    if gb == [I.ring.one()]:
        return -1
    n = I.ring.nvars
    leads = [g.leading_monomial(DEGREVLEX) for g in gb]
    supports = [frozenset(i for i, k in enumerate(m) if k) for m in leads]
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            s = set(S)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def jacobian(polys: Sequence[Poly], ring: Ring) -> List[List[Poly]]:
    return [[f.diff(v) for v in ring.vars] for f in polys]


def determinant(M: Sequence[Sequence[Poly]]) -> Poly:
    """Laplace expansion; matrices here are at most 4x4."""
    n = len(M)
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else M[0][0].ring.zero()


def minors(M: Sequence[Sequence[Poly]], k: int) -> List[Poly]:
    rows, cols = len(M), len(M[0]) if M else 0
    out = []
    for R in itertools.combinations(range(rows), k):
        for C in itertools.combinations(range(cols), k):
            d = determinant([[M[r][c] for c in C] for r in R])
            if d:
                out.append(d)
    return out


class CodimensionError(ValueError):
    pass


def singular_locus(I: Ideal, codim: int) -> Ideal:
    """``I`` plus all ``codim``-minors of the Jacobian of its generators."""
    gens = list(I.gens) or [I.ring.zero()]
    M = jacobian(gens, I.ring)
    if codim > len(gens) or codim > I.ring.nvars:
        raise CodimensionError(
            f"minor size {codim} exceeds Jacobian shape {len(gens)}x{I.ring.nvars}"
        )
    if codim == 0:
        return Ideal(I.ring, I.gens)
    return I.add(*minors(M, codim))


def codimension(I: Ideal) -> int:
    return I.ring.nvars - dimension(I)


def is_smooth(I: Ideal) -> bool:
    """True when V(I) is empty or smooth and ``I`` is its radical ideal.

    Uses the Jacobian criterion at the codimension of ``I``.
    """
    if I.is_unit():
        return True
    gb = I.groebner()
    return singular_locus(Ideal(I.ring, gb), codimension(I)).is_unit()


def radical_membership(f: Poly, I: Ideal) -> bool:
    """Rabinowitsch trick: ``f ∈ √I`` iff ``I + ⟨1 - t f⟩ = ⟨1⟩``."""
    if not f:
        return True
    t = _fresh(I.ring, "rab")
    big = I.ring.extend([t])
    gens = [g.to_ring(big) for g in I.gens] + [1 - big.gen(t) * f.to_ring(big)]
    return Ideal(big, gens).is_unit()


def radical_contains(I: Ideal, J: Ideal) -> bool:
    """True when ``J ⊆ √I``."""
    return all(radical_membership(g, I) for g in J.gens)


def same_radical(I: Ideal, J: Ideal) -> bool:
    return radical_contains(I, J) and radical_contains(J, I)


# -- zero-dimensional helpers --------------------------------------------


def univariate_eliminant(I: Ideal, var: str) -> UPoly:
    """Monic generator of ``I ∩ K[var]`` (zero polynomial if trivial)."""
    others = [v for v in I.ring.vars if v != var]
    E = eliminate(I, others)
    gb = E.groebner()
    if not gb:
        return UPoly([], var)
    g = gb[0]
    coeffs = [Fraction(0)] * (g.degree() + 1)
    for e, c in g.terms.items():
        coeffs[e[0]] = c
    return UPoly(coeffs, var).monic()


def upoly_to_poly(p: UPoly, ring: Ring, var: str) -> Poly:
    x = ring.gen(var)
    out = ring.zero()
    for k, c in enumerate(p.coeffs):
        if c:
            out = out + (x**k) * c
    return out


def zero_dim_radical(I: Ideal) -> Ideal:
    """Radical of a zero-dimensional ideal (Seidenberg)."""
    extra = []
    for v in I.ring.vars:
        p = univariate_eliminant(I, v)
        if p.is_zero():
            raise ValueError(f"{I} is not zero-dimensional")
        extra.append(upoly_to_poly(squarefree_part(p), I.ring, v))
    return Ideal(I.ring, I.groebner() + extra)


def standard_monomials(I: Ideal, order: TermOrder = DEGREVLEX, limit: int = 100000) -> List[Monomial]:
    """Monomials outside the leading-term ideal (finite for dimension 0)."""
    gb = I.groebner(order)
    if gb == [I.ring.one()]:
        return []
    leads = [g.leading_monomial(order) for g in gb]
    n = I.ring.nvars
    start = (0,) * n
    seen = {start}
    stack = [start]
    out = []
    while stack:
        m = stack.pop()
        out.append(m)
        if len(out) > limit:
            raise ValueError("quotient ring is not finite dimensional")
        for i in range(n):
            nm = m[:i] + (m[i] + 1,) + m[i + 1 :]
            if nm not in seen and not any(_divides(l, nm) for l in leads):
                seen.add(nm)
                stack.append(nm)
    return sorted(out)


def vector_space_dim(I: Ideal) -> int:
    """``dim_Q R/I`` for a zero-dimensional ideal."""
    if dimension(I) > 0:
        raise ValueError(f"{I} is not zero-dimensional")
    return len(standard_monomials(I))


def count_points(I: Ideal) -> int:
    """Number of distinct complex points of a zero-dimensional ideal."""
    if I.is_unit():
        return 0
    return vector_space_dim(zero_dim_radical(I))


def principal_lcm(f: Poly, g: Poly) -> Poly:
    meet = intersect(Ideal(f.ring, [f]), Ideal(f.ring, [g])).groebner()
    return meet[0]


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Greatest common divisor (normalised primitive) of two polynomials."""
    if not f:
        return g.primitive() if g else g
    if not g:
        return f.primitive()
    mf, mg = f.monomial_content(), g.monomial_content()
    mono = f.ring.monomial(tuple(min(a, b) for a, b in zip(mf, mg)))
    f0 = exact_divide(f, f.ring.monomial(mf))
    g0 = exact_divide(g, g.ring.monomial(mg))
    if f0.is_constant() or g0.is_constant():
        return mono
    if not (f0.variables() & g0.variables()):
        return mono
    lcm_ = principal_lcm(f0, g0)
    core = exact_divide(f0 * g0, lcm_).primitive()
    return mono * core

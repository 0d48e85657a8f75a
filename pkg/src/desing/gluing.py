"""Transition maps between charts of one tree and identification of points.

Chart coordinates are rational functions of the root coordinates; two
affine charts that are open pieces of the same blown-up space overlap
exactly where the reduced denominators of the transition functions do not
vanish.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .groebner import Ideal, count_points, dimension, eliminate, exact_divide, poly_gcd
from .poly import Poly, Ring

Fraction_ = Tuple[Poly, Poly]


def reduce_fraction(num: Poly, den: Poly) -> Fraction_:
    if not num:
        return num, den.ring.one()
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = exact_divide(num, g), exact_divide(den, g)
    c = den.leading_coeff(_order())
    return num / c, den / c


def _order():
    from .order import DEGREVLEX

    return DEGREVLEX


def subs_fractions(p: Poly, images: Sequence[Fraction_], ring: Ring) -> Fraction_:
    """Evaluate ``p`` at fractions; returns an unreduced (num, den)."""
    degs = [p.degree(i) if p else 0 for i in range(p.ring.nvars)]
    degs = [max(d, 0) for d in degs]
    den = ring.one()
    for (n, d), k in zip(images, degs):
        if k:
            den = den * d**k
    num = ring.zero()
    npow: List[Dict[int, Poly]] = [dict() for _ in images]
    dpow: List[Dict[int, Poly]] = [dict() for _ in images]

    def pw(cache, base, k):
        if k not in cache:
            cache[k] = base**k
        return cache[k]

    for e, c in p.terms.items():
        term = ring.const(c)
        for i, k in enumerate(e):
            n, d = images[i]
            if k:
                term = term * pw(npow[i], n, k)
            if degs[i] - k:
                term = term * pw(dpow[i], d, degs[i] - k)
        num = num + term
    return num, den


def compose_fractions(inner: Sequence[Fraction_], outer: Sequence[Fraction_], ring: Ring) -> List[Fraction_]:
    """``outer`` expresses new coordinates in mid coordinates; ``inner`` gives
    the mid coordinates as fractions on ``ring``."""
    out = []
    for n, d in outer:
        n1, d1 = subs_fractions(n, inner, ring)
        n2, d2 = subs_fractions(d, inner, ring)
        out.append(reduce_fraction(n1 * d2, d1 * n2))
    return out


class Gluing:
    """Cached transition data for the charts of a tree."""

    def __init__(self, tree):
        self.tree = tree
        self._root_coords: Dict[str, List[Fraction_]] = {}
        self._transitions: Dict[Tuple[str, str], List[Fraction_]] = {}
        self._overlap: Dict[Tuple[str, str], Poly] = {}

    def root_coords(self, label: str) -> List[Fraction_]:
        """Coordinates of chart ``label`` as fractions of the root coordinates."""
        if label in self._root_coords:
            return self._root_coords[label]
        chart = self.tree.charts[label]
        if chart.parent is None:
            coords = [(g, chart.ring.one()) for g in chart.ring.gens()]
        else:
            if not chart.ambient.is_zero():
                raise NotImplementedError("gluing needs affine charts")
            parent = self.root_coords(chart.parent)
            coords = compose_fractions(parent, chart.inverse, self.tree.root.ring)
        self._root_coords[label] = coords
        return coords

    def transition(self, a: str, b: str) -> List[Fraction_]:
        """Coordinates of chart ``b`` as reduced fractions on chart ``a``."""
        key = (a, b)
        if key not in self._transitions:
            ca = self.tree.charts[a]
            if a == b:
                res = [(g, ca.ring.one()) for g in ca.ring.gens()]
            else:
                images = [(img, ca.ring.one()) for img in ca.map_to_root.images]
                res = compose_fractions(images, self.root_coords(b), ca.ring)
            self._transitions[key] = res
        return self._transitions[key]

    def overlap_denominator(self, a: str, b: str) -> Poly:
        """Polynomial on chart ``a`` whose non-vanishing locus is ``a ∩ b``."""
        key = (a, b)
        if key not in self._overlap:
            ring = self.tree.charts[a].ring
            den = ring.one()
            for _, d in self.transition(a, b):
                if not d.is_constant():
                    g = poly_gcd(den, d)
                    den = den * exact_divide(d, g)
            self._overlap[key] = den
        return self._overlap[key]

    def pull_ideal(self, a: str, b: str, I: Ideal) -> Tuple[Ideal, Poly]:
        """Transport an ideal on chart ``b`` to chart ``a``.

        Returns the ideal of the closure in ``a`` of the part of ``V(I)``
        lying in the overlap, and the overlap denominator.
        """
        ring = self.tree.charts[a].ring
        trans = self.transition(a, b)
        D = self.overlap_denominator(a, b)
        gens = []
        for g in I.gens:
            n, d = subs_fractions(g, trans, ring)
            gens.append(n)
        J = Ideal(ring, gens)
        if D.is_constant():
            return J, D
        return saturate_principal(J, D), D

    def new_part(self, label: str, earlier: Sequence[str], I: Ideal) -> Ideal:
        """Part of ``V(I)`` on chart ``label`` not contained in earlier charts."""
        J = I
        for e in earlier:
            D = self.overlap_denominator(label, e)
            if D.is_constant():
                return Ideal(I.ring, [I.ring.one()])
            J = J.add(D)
        return J


def saturate_principal(I: Ideal, g: Poly) -> Ideal:
    """``I : g^∞`` via an inverse variable."""
    if g.is_constant():
        return I
    t = "sat_"
    big = I.ring.extend([t])
    gens = [h.to_ring(big) for h in I.gens] + [1 - big.gen(t) * g.to_ring(big)]
    return Ideal(I.ring, [h.to_ring(I.ring) for h in eliminate(Ideal(big, gens), [t]).groebner()])


def count_points_on_leaves(glue: Gluing, leaves: Sequence[str], ideals: Dict[str, Ideal]) -> int:
    """Distinct points of a finite set given by its ideal in each leaf."""
    total = 0
    for k, label in enumerate(leaves):
        I = ideals.get(label)
        if I is None or I.is_unit():
            continue
        J = glue.new_part(label, leaves[:k], I)
        if J.is_unit():
            continue
        if dimension(J) > 0:
            raise ValueError(f"expected a finite set in chart {label}")
        total += count_points(J)
    return total

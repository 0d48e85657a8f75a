"""Univariate polynomials and rational functions over the rationals."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, lcm
from typing import List, Sequence, Tuple


class UPoly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence = (), var: str = "s"):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)
        self.var = var

    @classmethod
    def from_roots_product(cls, factors: Sequence[Tuple], var="s") -> "UPoly":
        out = cls([1], var)
        for a, b in factors:
            out = out * cls([b, a], var)
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return self.coeffs == UPoly([other]).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _c(self, other) -> "UPoly":
        return other if isinstance(other, UPoly) else UPoly([other], self.var)

    def __add__(self, other):
        other = self._c(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly([x + y for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        other = self._c(other)
        if not self.coeffs or not other.coeffs:
            return UPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UPoly([1], self.var)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 0)
        while len(rem) > other.degree and any(rem):
            shift = len(rem) - 1 - other.degree
            c = rem[-1] / other.lc
            q[shift] = c
            for j, b in enumerate(other.coeffs):
                rem[shift + j] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return UPoly(q, self.var), UPoly(rem, self.var)

    def __floordiv__(self, other):
        return self.divmod(self._c(other))[0]

    def __mod__(self, other):
        return self.divmod(self._c(other))[1]

    def exact_div(self, other) -> "UPoly":
        q, r = self.divmod(self._c(other))
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "UPoly":
        return UPoly([c / self.lc for c in self.coeffs], self.var) if self.coeffs else self

    def derivative(self) -> "UPoly":
        return UPoly([c * i for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        total = Fraction(0) if not isinstance(x, UPoly) else UPoly([], self.var)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def primitive(self) -> Tuple[Fraction, "UPoly"]:
        """Return (content, integer primitive part with positive lead)."""
        if not self.coeffs:
            return Fraction(0), self
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for n in ints:
            g = gcd(g, n)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), UPoly([Fraction(n, g) for n in ints], self.var)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"UPoly({str(self)!r})"


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UPoly) -> UPoly:
    if p.degree < 1:
        return p.monic()
    return p.exact_div(upoly_gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: UPoly) -> List[Tuple[UPoly, int]]:
    """Yun's algorithm; returns monic squarefree factors with multiplicity."""
    out = []
    a = p.monic()
    b = a.derivative()
    c = upoly_gcd(a, b)
    w = a.exact_div(c)
    y = b.exact_div(c)
    i = 1
    while w.degree > 0:
        z = y - w.derivative()
        g = upoly_gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w = w.exact_div(g)
        y = z.exact_div(g)
        i += 1
    return out


def _divisors(n: int) -> List[int]:
    n = abs(n)
    if n == 0:
        return [0]
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_roots(p: UPoly) -> List[Fraction]:
    _, q = p.primitive()
    ints = [int(c) for c in q.coeffs]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
    for a in _divisors(ints[0]):
        for b in _divisors(ints[-1]):
            for r in (Fraction(a, b), Fraction(-a, b)):
                if r not in roots and q(r) == 0:
                    roots.append(r)
    return roots


def _irreducible_mod_p(ints: List[int], p: int) -> bool:
    """Brute-force irreducibility over F_p for small degree."""
    f = [c % p for c in ints]
    n = len(f) - 1
    inv = pow(f[-1], -1, p)
    f = [(c * inv) % p for c in f]
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            r = f[:]
            while len(r) - 1 >= d:
                c = r[-1]
                if c:
                    shift = len(r) - 1 - d
                    for j, b in enumerate(g):
                        r[shift + j] = (r[shift + j] - c * b) % p
                r.pop()
            if not any(r):
                return False
    return True


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> UPoly:
    total = UPoly([])
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        term = UPoly([yi])
        for j, xj in enumerate(xs):
            if j != i:
                term = term * UPoly([Fraction(-xj, xi - xj), Fraction(1, xi - xj)])
        total = total + term
    return total


def _kronecker_split(q: UPoly) -> UPoly | None:
    """Find a proper integer factor of the primitive integer polynomial q."""
    n = q.degree
    for d in range(2, n // 2 + 1):
        xs, ys = [], []
        x = 0
        while len(xs) < d + 1:
            v = int(q(x))
            if v != 0:
                xs.append(x)
                ys.append(v)
            x = -x if x > 0 else -x + 1
        choices = []
        for v in ys:
            ds = _divisors(v)
            choices.append(ds + [-t for t in ds])
        for vals in itertools.product(*choices):
            if vals[0] < 0:
                continue
            g = _interpolate(xs, vals)
            if g.degree != d or any(c.denominator != 1 for c in g.coeffs):
                continue
            quot, rem = q.divmod(g)
            if rem.is_zero():
                return g
    return None


def _factor_squarefree(p: UPoly) -> List[UPoly]:
    """Monic irreducible factors of a monic squarefree polynomial."""
    if p.degree <= 1:
        return [p] if p.degree == 1 else []
    out = []
    for r in _rational_roots(p):
        lin = UPoly([-r, 1], p.var)
        out.append(lin)
        p = p.exact_div(lin)
    if p.degree <= 1:
        return out + ([p.monic()] if p.degree == 1 else [])
    if p.degree <= 3:
        return out + [p.monic()]
    _, q = p.primitive()
    ints = [int(c) for c in q.coeffs]
    for prime in (2, 3, 5, 7, 11, 13):
        if ints[-1] % prime == 0:
            continue
        if _irreducible_mod_p(ints, prime):
            return out + [p.monic()]
    g = _kronecker_split(q)
    if g is None:
        return out + [p.monic()]
    h = q.exact_div(g)
    return out + _factor_squarefree(g.monic()) + _factor_squarefree(h.monic())


def factor_univariate(p: UPoly) -> Tuple[Fraction, List[Tuple[UPoly, int]]]:
    """Factor into ``lc * prod(f_i ** m_i)`` with monic irreducible ``f_i``."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    factors = []
    for part, mult in squarefree_decomposition(p):
        for f in _factor_squarefree(part):
            factors.append((f, mult))
    factors.sort(key=lambda fm: (fm[0].degree, [abs(c) for c in fm[0].coeffs], fm[0].coeffs))
    return p.lc, factors


class RationalFunction:
    """Reduced quotient of univariate polynomials with a monic denominator
    up to a positive leading coefficient normalisation."""

    __slots__ = ("num", "den")

    def __init__(self, num: UPoly, den: UPoly | None = None):
        var = num.var
        den = den if den is not None else UPoly([1], var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = UPoly([], var), UPoly([1], var)
            return
        g = upoly_gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        # integer coefficients, content in the numerator, positive lead below
        dc, dp = den.primitive()
        self.num = UPoly([c / dc for c in num.coeffs], var)
        self.den = dp

    def __add__(self, other):
        other = other if isinstance(other, RationalFunction) else RationalFunction(UPoly([other], self.num.var))
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __mul__(self, other):
        other = other if isinstance(other, RationalFunction) else RationalFunction(UPoly([other], self.num.var))
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(Fraction(x)) / self.den(Fraction(x))

    def __str__(self):
        if self.den == UPoly([1]):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"

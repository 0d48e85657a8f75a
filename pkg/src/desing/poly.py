"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]

_INDEXED = re.compile(r"^([a-zA-Z][a-zA-Z0-9_]*)\((\d+)\)$")


def normalize_name(name: str) -> str:
    """Map ``x(1)`` to ``x_1``; other identifiers pass through."""
    m = _INDEXED.match(name)
    if m:
        return f"{m.group(1)}_{m.group(2)}"
    return name


@dataclass(frozen=True)
class Ring:
    """Polynomial ring over the rationals in the given variables."""

    vars: Tuple[str, ...]

    def __init__(self, vars: Iterable[str]):
        names = tuple(normalize_name(v) for v in vars)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "vars", names)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        return self.vars.index(normalize_name(name))

    def gen(self, name: str) -> "Poly":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list:
        return [self.gen(v) for v in self.vars]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        return Poly(self, {tuple(exps): Fraction(coeff)})

    def parse(self, text: str) -> "Poly":
        from .parse import parse_poly

        return parse_poly(text, self)

    def extend(self, names: Iterable[str]) -> "Ring":
        return Ring(self.vars + tuple(names))

    def __repr__(self):
        return f"Ring({', '.join(self.vars)})"


class Poly:
    """An immutable polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, Fraction]):
        self.ring = ring
        self.terms: Dict[Monomial, Fraction] = {
            e: c for e, c in terms.items() if c != 0
        }
        self._hash = None

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (
            len(self.terms) == 1 and not any(next(iter(self.terms)))
        )

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self, var: str | int | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = var if isinstance(var, int) else self.ring.index(var)
        return max(e[i] for e in self.terms)

    def variables(self) -> set:
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def used_names(self) -> list:
        return [self.ring.vars[i] for i in sorted(self.variables())]

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = Fraction(other)
        return self * (1 / c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_term(self, exps: Monomial, coeff: Fraction) -> "Poly":
        return Poly(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): c * coeff for e, c in self.terms.items()},
        )

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------
    def diff(self, var: str | int) -> "Poly":
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.ring, out)

    def subs(self, images: Mapping[str, "Poly"], ring: Ring | None = None) -> "Poly":
        """Substitute polynomials (all in ``ring``) for variables.

        Variables missing from ``images`` are mapped to the variable of the
        same name in the target ring.
        """
        target = ring if ring is not None else self.ring
        imgs = []
        for v in self.ring.vars:
            if v in images:
                img = images[v]
                imgs.append(img if isinstance(img, Poly) else target.const(img))
            else:
                imgs.append(target.gen(v))
        return self.compose(imgs, target)

    def compose(self, images: Sequence["Poly"], ring: Ring) -> "Poly":
        """Evaluate at ``images[i]`` for variable ``i`` (ring homomorphism)."""
        powers: list = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        out: Dict[Monomial, Fraction] = {}
        for e, c in self.terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                out[te] = out.get(te, 0) + tc
        return Poly(ring, out)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in a ring containing all used variables (by name)."""
        used = self.variables()
        idx = [ring.index(self.ring.vars[i]) if i in used else -1 for i in range(self.ring.nvars)]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    ne[idx[i]] = k
            out[tuple(ne)] = c
        return Poly(ring, out)

    def rename(self, ring: Ring) -> "Poly":
        """Same exponent data, interpreted in a ring with the same arity."""
        if ring.nvars != self.ring.nvars:
            raise ValueError("rename needs rings of equal arity")
        return Poly(ring, self.terms)

    # -- content and normalisation --------------------------------------
    def monic(self, order=None) -> "Poly":
        if not self.terms:
            return self
        from .order import DEGREVLEX

        order = order or DEGREVLEX
        return self / self.leading_coeff(order)

    def leading_monomial(self, order) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_coeff(self, order) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def primitive(self) -> "Poly":
        """Scale to integer coefficients with content 1 and positive lead."""
        from math import gcd, lcm

        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        from .order import DEGREVLEX

        scaled = self * Fraction(den, g)
        if scaled.leading_coeff(DEGREVLEX) < 0:
            scaled = -scaled
        return scaled

    def monomial_content(self) -> Monomial:
        """Exponentwise minimum over all terms (the largest monomial factor)."""
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def sorted_terms(self, order=None):
        from .order import DEGREVLEX

        order = order or DEGREVLEX
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def format_poly(p: Poly) -> str:
    """Render in the text grammar accepted by :func:`desing.parse.parse_poly`."""
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            (v if k == 1 else f"{v}^{k}") for v, k in zip(p.ring.vars, e) if k
        )
        mag = abs(c)
        coef = str(mag)
        if mono:
            body = mono if mag == 1 else f"{coef}*{mono}"
        else:
            body = coef
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out

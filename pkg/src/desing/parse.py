"""Recursive-descent parser for the polynomial text grammar.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power ('*' power)*
    power  := atom ('^' INT)?
    atom   := NUMBER ['/' NUMBER] | IDENT ['(' INT ')'] | '(' expr ')'

Implicit multiplication is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List

from .poly import Poly, Ring

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*^/()]))"
)


class PolySyntaxError(ValueError):
    """Raised for malformed polynomial text."""


def _tokenize(text: str) -> List[tuple]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise PolySyntaxError(f"expected {value!r} at {pos} in {self.text!r}")

    def fail(self, msg):
        kind, val, pos = self.peek()
        raise PolySyntaxError(f"{msg} at {pos} in {self.text!r}")

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected trailing input")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        result = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Poly:
        result = self.power()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            result = result * self.power()
        if self.peek()[0] in ("num", "ident") or self.peek()[1] == "(":
            self.fail("implicit multiplication is not allowed")
        return result

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolySyntaxError(f"exponent must be an integer at {pos}")
            base = base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            value = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num" or int(v2) == 0:
                    raise PolySyntaxError(f"bad rational literal at {p2}")
                value = Fraction(int(val), int(v2))
            return self.ring.const(value)
        if kind == "ident":
            name = val
            if self.peek()[1] == "(" and self.tokens[self.i + 1][0] == "num":
                self.take()
                name = f"{val}_{self.take()[1]}"
                self.expect(")")
            if name not in self.ring.vars:
                raise PolySyntaxError(f"unknown variable {name!r} at {pos}")
            return self.ring.gen(name)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolySyntaxError(f"unexpected token {val!r} at {pos} in {self.text!r}")


def parse_poly(text: str, ring: Ring) -> Poly:
    return _Parser(text, ring).parse()


def parse_polys(text: str, ring: Ring) -> List[Poly]:
    """Parse a comma-separated list of polynomials."""
    parts = [s for s in _split_top(text) if s.strip()]
    return [parse_poly(s, ring) for s in parts]


def _split_top(text: str) -> List[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out

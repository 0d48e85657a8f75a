"""Monomial orders."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TermOrder:
    """A monomial order.

    ``kind`` is ``"lex"``, ``"degrevlex"`` or ``"elim"``; the elimination
    order compares the total degree in the first ``block`` variables first
    and breaks ties with degrevlex on all variables.
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex", "elim"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "elim" and self.block < 0:
            raise ValueError("block size must be non-negative")

    def key(self, e):
        if self.kind == "lex":
            return e
        rev = tuple(-k for k in reversed(e))
        if self.kind == "degrevlex":
            return (sum(e), rev)
        return (sum(e[: self.block]), sum(e), rev)


LEX = TermOrder("lex")
DEGREVLEX = TermOrder("degrevlex")


def elimination(block: int) -> TermOrder:
    return TermOrder("elim", block)

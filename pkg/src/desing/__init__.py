"""Embedded resolution of hypersurface singularities in up to three variables,
with the invariants read off the resolution: multiplicities, discrepancies,
log canonical thresholds, intersection matrices, dual graphs and topological
zeta functions."""

from .blowup import Chart, ChartMap, blow_up_chart
from .divisors import DivisorTable, UnsupportedShape, abstract_resolution, collect_divisors, same_divisor
from .groebner import Ideal
from .invariants import (
    discrepancies,
    dual_graph,
    intersection_matrix,
    invariant_report,
    lct,
    multiplicities_N,
    multiplicities_nu,
)
from .parse import parse_poly, parse_polys
from .poly import Poly, Ring
from .resolve import CenterStrategy, ChartTree, ResolutionLimits, load, prune, resolve, save
from .zeta import monodromy_charpoly, stratify, zeta_report, zeta_top

__all__ = [
    "CenterStrategy",
    "Chart",
    "ChartMap",
    "ChartTree",
    "DivisorTable",
    "Ideal",
    "Poly",
    "ResolutionLimits",
    "Ring",
    "UnsupportedShape",
    "abstract_resolution",
    "blow_up_chart",
    "collect_divisors",
    "discrepancies",
    "dual_graph",
    "intersection_matrix",
    "invariant_report",
    "lct",
    "load",
    "monodromy_charpoly",
    "multiplicities_N",
    "multiplicities_nu",
    "parse_poly",
    "parse_polys",
    "prune",
    "resolve",
    "same_divisor",
    "save",
    "stratify",
    "zeta_report",
    "zeta_top",
]

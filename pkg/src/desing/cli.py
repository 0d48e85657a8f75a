"""Command-line interface.

Exit codes:
  0  success
  2  unreadable input: polynomial syntax, bad input file, missing or malformed tree
  3  the center strategy failed
  4  a resolution limit was hit (the partial tree is still written)
  5  the requested computation does not support this input (including
     non-principal or constant ideals)
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from .divisors import UnsupportedShape, collect_divisors
from .groebner import Ideal
from .invariants import (
    ConsistencyError,
    bernstein_normal_crossing,
    discrepancies,
    dual_graph,
    intersection_matrix,
    lct,
    multiplicities_N,
    multiplicities_nu,
)
from .parse import PolySyntaxError, parse_polys
from .poly import Ring
from .resolve import (
    CenterStrategy,
    LimitExceeded,
    ResolutionError,
    ResolutionLimits,
    SchemaError,
    StrategyError,
    load,
    prune,
    resolve,
    save,
)
from .zeta import zeta_report

EXIT_OK, EXIT_INPUT, EXIT_STRATEGY, EXIT_LIMIT, EXIT_UNSUPPORTED = 0, 2, 3, 4, 5

_IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*(?:\(\d+\))?")


class InputError(ValueError):
    pass


def parse_input(text: str) -> Ideal:
    """Read ``ring: x,y,z`` / ``ideal: f[, g...]``.

    Lines may also be separated by ``;``.  Without a ring line the variables
    are the identifiers of the ideal in sorted order.
    """
    ring_text, ideal_text = None, None
    for part in re.split(r"[;\n]", text):
        part = part.strip()
        if not part or part.startswith("#"):
            continue
        key, sep, rest = part.partition(":")
        key = key.strip().lower()
        if sep and key == "ring":
            ring_text = rest
        elif sep and key == "ideal":
            ideal_text = rest
        elif ideal_text is None and not sep:
            ideal_text = part
        else:
            raise InputError(f"cannot read input line {part!r}")
    if not ideal_text or not ideal_text.strip():
        raise InputError("no ideal given")
    if ring_text is None:
        names = sorted(set(_IDENT.findall(ideal_text)))
    else:
        names = [v.strip() for v in ring_text.split(",") if v.strip()]
    if not names:
        raise InputError("no variables")
    try:
        ring = Ring(names)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return Ideal(ring, parse_polys(ideal_text, ring))


def _read_input(arg: str) -> Ideal:
    path = Path(arg)
    text = path.read_text() if path.is_file() else arg
    return parse_input(text)


def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _frac(x) -> str:
    return str(x)


# -- commands ------------------------------------------------------------------


def cmd_resolve(args) -> int:
    I = _read_input(args.input)
    if args.strategy == "scripted":
        if not args.centers:
            raise InputError("--strategy scripted needs --centers FILE")
        try:
            centers = json.loads(Path(args.centers).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read centers: {exc}") from exc
        strategy = CenterStrategy.scripted(centers)
    else:
        strategy = CenterStrategy()
    limits = ResolutionLimits(max_depth=args.max_depth, max_charts=args.max_charts)
    try:
        tree = resolve(I, strategy, limits, jobs=args.jobs)
    except LimitExceeded as exc:
        save(exc.tree, args.output)
        print(f"limit reached: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if args.prune:
        tree = prune(tree)
    save(tree, args.output, divisors=collect_divisors(tree).to_dict())
    return EXIT_OK


def _tree(args):
    tree = load(args.tree)
    return tree, collect_divisors(tree)


def cmd_divisors(args) -> int:
    tree, table = _tree(args)
    rep = table.to_dict()
    rep["N"] = multiplicities_N(tree, table)
    rep["nu"] = multiplicities_nu(tree, table)
    _emit(_json(rep), args.output)
    return EXIT_OK


def cmd_intersections(args) -> int:
    tree, table = _tree(args)
    m = intersection_matrix(tree, table)
    rep = {
        "labels": m.labels,
        "divisors": m.divisors,
        "matrix": m.matrix,
        "negative_definite": m.is_negative_definite() if m.matrix else True,
        "hyperplane": m.hyperplane,
        "pullback": m.pullback,
    }
    _emit(_json(rep), args.output)
    return EXIT_OK


def cmd_dualgraph(args) -> int:
    tree, table = _tree(args)
    g = dual_graph(intersection_matrix(tree, table))
    if args.dot:
        _emit(g.to_dot(), args.output)
    else:
        rep = {
            "vertices": [{"name": n, "self_intersection": s if s is not None else -2} for n, s in g.vertices],
            "edges": [list(e) for e in g.edges],
        }
        _emit(_json(rep), args.output)
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    tree, table = _tree(args)
    rep = {
        "kind": args.kind,
        "N": multiplicities_N(tree, table),
        "nu": multiplicities_nu(tree, table),
        "discrepancy": discrepancies(tree, table, args.kind),
    }
    _emit(_json(rep), args.output)
    return EXIT_OK


def cmd_lct(args) -> int:
    tree, table = _tree(args)
    value = lct(tree, table, include_strict=args.include_strict)
    _emit(_json({"lct": _frac(value), "include_strict": args.include_strict}), args.output)
    return EXIT_OK


def cmd_zeta(args) -> int:
    tree, table = _tree(args)
    _emit(_json(zeta_report(tree, table, d=args.d, local=args.local)), args.output)
    return EXIT_OK


def _monomial_exponents(I: Ideal) -> Tuple[List[str], List[int]]:
    if len(I.gens) != 1 or len(I.gens[0].terms) != 1:
        raise UnsupportedShape("bernstein needs a single monomial")
    (exps, coeff), = I.gens[0].terms.items()
    return list(I.ring.vars), list(exps)


def cmd_bernstein(args) -> int:
    I = _read_input(args.input)
    names, exps = _monomial_exponents(I)
    r = [e for e in exps if e > 0]
    b = bernstein_normal_crossing(r)
    rep = {
        "exponents": dict(zip(names, exps)),
        "coefficients": [_frac(c) for c in b.coeffs],
        "text": str(b),
    }
    _emit(_json(rep), args.output)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="desing", description="Embedded resolution of surface and curve singularities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=False):
        sp.add_argument("-o", "--output", required=out_required, help="output file (default: stdout)")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")

    r = sub.add_parser("resolve", help="resolve a hypersurface and write the chart tree")
    r.add_argument("input", help="input file or inline text such as 'ring: x,y,z; ideal: x^5+y^2+z^2'")
    r.add_argument("--strategy", choices=["default", "scripted"], default="default")
    r.add_argument("--centers", help="JSON file mapping chart labels to center generators")
    r.add_argument("--max-depth", type=int, default=ResolutionLimits().max_depth)
    r.add_argument("--max-charts", type=int, default=ResolutionLimits().max_charts)
    r.add_argument("--prune", action="store_true", help="drop final charts that add no stratum")
    common(r, out_required=True)
    r.set_defaults(func=cmd_resolve)

    for name, func, text in [
        ("divisors", cmd_divisors, "global exceptional divisors and multiplicities"),
        ("intersections", cmd_intersections, "intersection matrix of the exceptional curves"),
        ("dualgraph", cmd_dualgraph, "dual graph of the exceptional curves"),
        ("discrepancy", cmd_discrepancy, "discrepancies of the exceptional divisors"),
        ("lct", cmd_lct, "log canonical threshold"),
        ("zeta", cmd_zeta, "topological zeta function and monodromy"),
    ]:
        sp = sub.add_parser(name, help=text)
        sp.add_argument("tree", help="chart tree JSON written by 'resolve'")
        common(sp)
        sp.set_defaults(func=func)
        if name == "dualgraph":
            sp.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
        elif name == "discrepancy":
            sp.add_argument("--kind", choices=["plain", "log"], default="plain")
        elif name == "lct":
            sp.add_argument("--include-strict", action="store_true")
        elif name == "zeta":
            sp.add_argument("--d", type=int, default=1)
            sp.add_argument("--local", action="store_true")

    b = sub.add_parser("bernstein", help="Bernstein-Sato polynomial of a monomial")
    b.add_argument("input", help="monomial, e.g. 'x^2*y^3'")
    common(b)
    b.set_defaults(func=cmd_bernstein)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PolySyntaxError, InputError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StrategyError as exc:
        print(f"strategy failed: {exc}", file=sys.stderr)
        return EXIT_STRATEGY
    except (UnsupportedShape, ConsistencyError, ResolutionError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())

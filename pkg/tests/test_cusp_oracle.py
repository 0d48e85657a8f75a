"""The cusp resolved by hand, checked with plain substitution and then
compared with the driver."""

import json
from collections import Counter
from fractions import Fraction
from pathlib import Path

from desing.blowup import ChartMap
from desing.invariants import lct, multiplicities_N, multiplicities_nu
from desing.parse import parse_poly
from desing.poly import Ring

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "cusp_charts.json").read_text())


def _order(p, var):
    return min(e[p.ring.index(var)] for e in p.terms)


def hand_multiplicities():
    R = Ring(FIXTURE["vars"])
    S = Ring(["u", "v"])
    f = parse_poly(FIXTURE["polynomial"], R)
    images = None
    N, nu = {}, {}
    for step in FIXTURE["steps"]:
        sub = {k: parse_poly(v, S) for k, v in step["substitution"].items()}
        images = [sub["x"], sub["y"]] if images is None else [p.subs(sub, S) for p in images]
        m = ChartMap(S, R, tuple(images))
        total, jac = m.pull(f), m.jacobian_det()
        assert total == parse_poly(step["total"], S)
        assert jac == parse_poly(step["jacobian"], S)
        for name, var in step["divisors"].items():
            N.setdefault(name, _order(total, var))
            nu.setdefault(name, _order(jac, var) + 1)
            assert (N[name], nu[name]) == (_order(total, var), _order(jac, var) + 1)
    return N, nu


def test_hand_computation_is_consistent():
    N, nu = hand_multiplicities()
    assert sorted(N.values()) == FIXTURE["N"]
    assert sorted(nu.values()) == FIXTURE["nu"]
    assert min(Fraction(nu[k], N[k]) for k in N) == Fraction(FIXTURE["lct"])


def test_driver_agrees_with_hand_computation(cusp):
    tree, table = cusp
    N, nu = hand_multiplicities()
    assert Counter(multiplicities_N(tree, table)[:-1]) == Counter(N.values())
    assert Counter(multiplicities_nu(tree, table)[:-1]) == Counter(nu.values())
    assert lct(tree, table) == Fraction(FIXTURE["lct"])

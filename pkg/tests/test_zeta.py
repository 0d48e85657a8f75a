import itertools
from fractions import Fraction

import pytest
import sympy
from conftest import run

from desing.divisors import UnsupportedShape
from desing.invariants import lct, multiplicities_N, multiplicities_nu
from desing.resolve import prune
from desing.univariate import UPoly
from desing.zeta import (
    ChiLedger,
    birth_chi,
    build_ledger,
    monodromy_charpoly,
    stratify,
    zeta_report,
    zeta_top,
)


def brieskorn_pham_charpoly(exps):
    """Monodromy of x1^a1 + ... + xn^an from its eigenvalues
    exp(2 pi i sum j_k/a_k), 0 < j_k < a_k, grouped into cyclotomic factors."""
    orders = {}
    for js in itertools.product(*(range(1, a) for a in exps)):
        q = sum(Fraction(j, a) for j, a in zip(js, exps)) % 1
        orders[q.denominator] = orders.get(q.denominator, 0) + 1
    t = sympy.Symbol("t")
    out = sympy.Integer(1)
    for m, count in orders.items():
        assert count % sympy.totient(m) == 0
        out *= sympy.cyclotomic_poly(m, t) ** (count // sympy.totient(m))
    return [Fraction(int(c)) for c in reversed(sympy.Poly(sympy.expand(out), t).all_coeffs())]


def direct_sum(strata, N, nu, s, local=False):
    total = Fraction(0)
    for st in strata:
        chi = st.chi_EJ_star_over_origin if local else st.chi_EJ_star
        term = Fraction(chi)
        for j in st.J:
            term /= nu[j - 1] + N[j - 1] * s
        total += term
    return total


# -- Euler characteristic bookkeeping ---------------------------------------------


def test_birth_chi():
    assert birth_chi(0) == 3
    assert birth_chi(1, 0) == 4
    assert birth_chi(1, 1) == 0
    assert birth_chi(0, ambient_dim=2) == 2
    with pytest.raises(ValueError):
        birth_chi(2)


def test_ledger_records_updates():
    L = ChiLedger({1: 3})
    L.record(1, 2, 1)
    assert L.current(1) == 4


def test_a4_ledger(a4):
    L = build_ledger(*a4)
    assert L.birth == {1: 3, 2: 3, 3: 3, 4: 4}
    # the second and third point centers lie on the previous divisor; the line
    # centers lie inside E2 and E3 and leave them unchanged
    assert L.updates == {1: [(2, 1)], 2: [(3, 1)]}
    assert [L.current(g) for g in (1, 2, 3, 4)] == [4, 4, 3, 4]


def test_plane_point_blowup_of_a_line():
    tree, table = run("x", "xy", {"1": ["x", "y"]})
    strata = {st.J: st for st in stratify(tree, table)}
    # E is a P^1 met once by the strict transform
    assert strata[(1,)].chi_EJ == 2 and strata[(1,)].chi_EJ_star == 1
    assert strata[(1, 2)].chi_EJ == 1
    assert str(zeta_top(tree, table)) == "(1)/(s + 1)"


@pytest.mark.parametrize("name", ["a4", "a4_default", "a4_extra", "cusp", "cusp_extra", "a1"])
def test_inclusion_exclusion(request, name):
    tree, table = request.getfixturevalue(name)
    strata = stratify(tree, table)
    for st in strata:
        supersets = [o for o in strata if set(st.J) <= set(o.J)]
        assert st.chi_EJ == sum(o.chi_EJ_star for o in supersets), (name, st.J)


def test_a1_strata_by_hand(a1):
    # E = P^2 (chi 3) meets the strict transform in a smooth conic (chi 2)
    strata = {st.J: st for st in stratify(*a1)}
    assert set(strata) == {(1,), (1, 2)}
    assert strata[(1,)].chi_EJ_star == 3 - 2
    assert strata[(1, 2)].chi_EJ_star == 2
    s = sympy.Symbol("s")
    hand = sympy.cancel(1 / (2 * s + 3) + 2 / ((2 * s + 3) * (s + 1)))
    assert sympy.simplify(hand - (s + 3) / (2 * s**2 + 5 * s + 3)) == 0
    assert str(zeta_top(*a1)) == "(s + 3)/(2*s^2 + 5*s + 3)"


def test_absent_strata(a4):
    Js = {st.J for st in stratify(*a4)}
    assert (1, 3) not in Js and (1, 4) not in Js


# -- zeta functions ------------------------------------------------------------------


def test_a4_zeta(a4):
    tree, table = a4
    assert str(zeta_top(tree, table)) == "(s + 6)/(5*s^2 + 11*s + 6)"
    assert str(zeta_top(tree, table, local=True)) == "(s + 6)/(5*s^2 + 11*s + 6)"


def test_line_in_one_variable():
    tree, table = run("x", "x")
    assert table.divisor_count == 0
    assert str(zeta_top(tree, table)) == "(1)/(s + 1)"
    assert monodromy_charpoly(tree, table) == UPoly([1], "s")


@pytest.mark.parametrize("name", ["a4", "cusp", "a1", "a4_extra"])
@pytest.mark.parametrize("s", [Fraction(7), Fraction(1000), Fraction(-1, 3)])
def test_assembled_function_matches_direct_sum(request, name, s):
    tree, table = request.getfixturevalue(name)
    strata = stratify(tree, table)
    N, nu = multiplicities_N(tree, table), multiplicities_nu(tree, table)
    Z = zeta_top(tree, table)
    assert Z(s) == direct_sum(strata, N, nu, s)
    Zl = zeta_top(tree, table, local=True)
    assert Zl(s) == direct_sum(strata, N, nu, s, local=True)


@pytest.mark.parametrize("name", ["a4", "cusp", "a1"])
def test_global_zeta_is_one_at_zero(request, name):
    assert zeta_top(*request.getfixturevalue(name))(Fraction(0)) == 1


@pytest.mark.parametrize("name", ["a4", "cusp", "a1"])
def test_poles_are_candidate_ratios(request, name):
    tree, table = request.getfixturevalue(name)
    Z = zeta_top(tree, table)
    N, nu = multiplicities_N(tree, table), multiplicities_nu(tree, table)
    candidates = {Fraction(-v, n) for v, n in zip(nu, N)}
    s = sympy.Symbol("s")
    den = sum(sympy.Rational(c.numerator, c.denominator) * s**k for k, c in enumerate(Z.den.coeffs))
    for r in sympy.roots(den, s):
        assert Fraction(int(sympy.fraction(r)[0]), int(sympy.fraction(r)[1])) in candidates
    # minus the log canonical threshold is a pole
    c = lct(tree, table, include_strict=True)
    assert Z.den(-c) == 0 and Z.num(-c) != 0


def test_zeta_with_d(a4):
    tree, table = a4
    N = multiplicities_N(tree, table)
    for d in (2, 5, 10):
        Z = zeta_top(tree, table, d=d)
        # only strata whose divisors all have d | N contribute
        strata = [st for st in stratify(tree, table) if all(N[j - 1] % d == 0 for j in st.J)]
        nu = multiplicities_nu(tree, table)
        assert Z(Fraction(3)) == direct_sum(strata, N, nu, Fraction(3))
    with pytest.raises(ValueError):
        zeta_top(tree, table, d=0)


# -- monodromy --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "name,exps",
    [("a4", (5, 2, 2)), ("cusp", (3, 2)), ("a1", (2, 2, 2))],
)
def test_monodromy_against_eigenvalue_count(request, name, exps):
    m = monodromy_charpoly(*request.getfixturevalue(name))
    assert list(m.coeffs) == brieskorn_pham_charpoly(exps)


def test_monodromy_named_values(a4, cusp):
    assert str(monodromy_charpoly(*a4)) == "s^4 + s^3 + s^2 + s + 1"
    assert str(monodromy_charpoly(*cusp)) == "s^2 - s + 1"


@pytest.mark.parametrize("text,exps", [("x^3+y^2+z^2", (3, 2, 2)), ("x^4+y^2+z^2", (4, 2, 2))])
def test_more_brieskorn_pham(text, exps):
    tree, table = run(text, "xyz")
    assert list(monodromy_charpoly(tree, table).coeffs) == brieskorn_pham_charpoly(exps)
    assert lct(tree, table) == sum(Fraction(1, a) for a in exps)


# -- strategy independence and scope --------------------------------------------------------


@pytest.mark.parametrize("group", [("a4", "a4_default", "a4_extra"), ("cusp", "cusp_default", "cusp_extra")])
def test_independent_of_resolution(request, group):
    results = []
    for name in group:
        tree, table = request.getfixturevalue(name)
        results.append(
            (
                [str(zeta_top(tree, table, d=d)) for d in (1, 2, 3)],
                str(zeta_top(tree, table, local=True)),
                lct(tree, table),
                monodromy_charpoly(tree, table),
            )
        )
    assert results[0] == results[1] == results[2]


def test_pruned_tree_is_refused(a4):
    tree, table = a4
    pruned = prune(tree)
    from desing.divisors import collect_divisors

    with pytest.raises(UnsupportedShape):
        zeta_top(pruned, collect_divisors(pruned))


def test_non_quasi_homogeneous_is_refused():
    tree, table = run("y^2-x^3-x^4", "xy")
    with pytest.raises(UnsupportedShape):
        zeta_top(tree, table)


def test_report_shape(a4):
    rep = zeta_report(*a4, local=True)
    assert rep["scope"] == "local" and rep["d"] == 1
    assert rep["numerator"] == ["6", "1"] and rep["denominator"] == ["6", "11", "5"]
    assert rep["monodromy"] == ["1"] * 5

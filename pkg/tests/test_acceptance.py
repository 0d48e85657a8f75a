"""Acceptance criteria, one check per criterion.

Each check records a PASS/FAIL line; the lines are printed in the pytest
summary and when this file is run as a script.
"""

import itertools
import time
from collections import Counter
from fractions import Fraction

import pytest
from conftest import (
    A4_CENTERS,
    A4_EXTRA_CENTERS,
    CUSP_CENTERS,
    CUSP_EXTRA_CENTERS,
    run,
)

from desing.blowup import jacobian_det_of_map, strict_transform, weak_transform
from desing.divisors import abstract_resolution
from desing.groebner import Ideal, divide, eliminate, groebner, normal_form, quotient, saturate
from desing.invariants import (
    discrepancies,
    dual_graph,
    intersection_matrix,
    lct,
    multiplicities_N,
    multiplicities_nu,
)
from desing.order import LEX
from desing.parse import parse_poly
from desing.poly import Ring
from desing.resolve import is_final
from desing.zeta import monodromy_charpoly, zeta_top

RESULTS = []

A4 = "x^5+y^2+z^2"
PRINTED_MATRIX = [[-2, 0, 1, 0], [0, -2, 0, 1], [1, 0, -2, 1], [0, 1, 1, -2]]
A4_ZETA = "(s + 6)/(5*s^2 + 11*s + 6)"


def record(number, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    return ok


def _ideal(R, *texts):
    return Ideal(R, [parse_poly(t, R) for t in texts])


# -- criteria ---------------------------------------------------------------------


def check_1():
    t0 = time.perf_counter()
    tree, table = run(A4, "xyz", A4_CENTERS)
    N, nu = multiplicities_N(tree, table), multiplicities_nu(tree, table)
    disc = discrepancies(tree, table, "plain")
    value = lct(tree, table, include_strict=False)
    elapsed = time.perf_counter() - t0
    ok = N == [2, 4, 5, 10, 1] and nu == [3, 5, 7, 12, 1] and disc == [0, 0, 1, 1] and value == Fraction(6, 5)
    ok = ok and elapsed < 300
    return record(1, ok, f"A4 N={N} nu={nu} discrepancy={disc} lct={value} in {elapsed:.1f}s (limit 300s)")


def check_2():
    tree, table = run(A4, "xyz", A4_CENTERS)
    g, l = str(zeta_top(tree, table)), str(zeta_top(tree, table, local=True))
    mono = str(monodromy_charpoly(tree, table))
    ok = g == A4_ZETA and l == A4_ZETA and mono == "s^4 + s^3 + s^2 + s + 1"
    return record(2, ok, f"A4 global {g}, local {l}, monodromy {mono}")


def _permutation_equivalent(M, P):
    n = len(P)
    if len(M) != n:
        return False
    return any(all(M[p[i]][p[j]] == P[i][j] for i in range(n) for j in range(n)) for p in itertools.permutations(range(n)))


def _is_path(graph):
    n = len(graph.vertices)
    deg = Counter()
    adj = {i: set() for i in range(n)}
    for i, j, _ in graph.edges:
        deg[i] += 1
        deg[j] += 1
        adj[i].add(j)
        adj[j].add(i)
    seen, todo = {0}, [0]
    while todo:
        for k in adj[todo.pop()] - seen:
            seen.add(k)
            todo.append(k)
    return len(graph.edges) == n - 1 and len(seen) == n and sorted(deg[i] for i in range(n)) == [1, 1] + [2] * (n - 2)


def check_3():
    tree, table = run(A4, "xyz", A4_CENTERS)
    m = intersection_matrix(tree, table)
    g = dual_graph(m)
    equiv = _permutation_equivalent(m.matrix, PRINTED_MATRIX)
    path = _is_path(g) and len(g.vertices) == 4
    negdef = m.is_negative_definite()
    ok = equiv and path and negdef and all(m.matrix[i][i] == -2 for i in range(4))
    return record(3, ok, f"matrix {m.matrix} permutation-equivalent={equiv}, path on 4 vertices={path}, negative definite={negdef}")


def check_4():
    details, ok = [], True
    for name, text, names, scripted, extra in [
        ("A4", A4, "xyz", A4_CENTERS, A4_EXTRA_CENTERS),
        ("cusp", "y^2-x^3", "xy", CUSP_CENTERS, CUSP_EXTRA_CENTERS),
    ]:
        values, shapes = [], []
        for centers in (None, scripted, extra):
            tree, table = run(text, names, centers)
            values.append((str(zeta_top(tree, table)), str(zeta_top(tree, table, local=True)), lct(tree, table)))
            shapes.append((len(tree.charts), table.divisor_count))
        same = values[0] == values[1] == values[2]
        differ = len(set(shapes)) > 1
        ok = ok and same and differ
        details.append(f"{name}: shapes {shapes} -> zeta {values[0][0]}, lct {values[0][2]}, identical={same}")
    return record(4, ok, "; ".join(details))


def check_5():
    tree, table = run("y^2-x^3", "xy", CUSP_CENTERS)
    N, nu = multiplicities_N(tree, table)[:-1], multiplicities_nu(tree, table)[:-1]
    value = lct(tree, table)
    from test_cusp_oracle import hand_multiplicities

    hN, hnu = hand_multiplicities()
    ok = (
        Counter(N) == Counter([2, 3, 6]) == Counter(hN.values())
        and Counter(nu) == Counter([2, 3, 5]) == Counter(hnu.values())
        and value == Fraction(5, 6)
    )
    return record(5, ok, f"cusp N={sorted(N)} nu={sorted(nu)} lct={value} (hand substitutions agree)")


def check_6():
    tree, table = run("x^2+y^2+z^2", "xyz")
    final, irrelevant = abstract_resolution(tree)
    abstract = sorted(l for l, v in final.items() if v)
    m = intersection_matrix(tree, table)
    embedded = tree.leaves() == ["1.1", "1.2", "1.3"] and all(is_final(tree.charts[l]) for l in tree.leaves())
    ok = abstract == ["1.1", "1.2", "1.3"] and not any(irrelevant.values()) and m.matrix == [[-2]] and embedded
    return record(6, ok, f"A1 abstract final charts {abstract}, matrix {m.matrix}, embedded SNC after one blow-up={embedded}")


def _kernel_examples():
    R = Ring("xy")
    checks = [
        groebner(_ideal(R, "x", "y")) == [R.gen("x"), R.gen("y")],
        groebner(_ideal(R, "x^2", "x*y-1")) == [R.one()],
        quotient(_ideal(R, "x*y"), _ideal(R, "x")) == _ideal(R, "y"),
        quotient(_ideal(R, "x"), _ideal(R, "y")) == _ideal(R, "x"),
        saturate(_ideal(R, "x^2*y"), _ideal(R, "x")) == (_ideal(R, "y"), 2),
        saturate(_ideal(R, "x"), _ideal(R, "y")) == (_ideal(R, "x"), 0),
        eliminate(_ideal(Ring("xt"), "x-t"), ["t"]).groebner() == [],
    ]
    Z = Ring("zyx")
    gb = groebner(_ideal(Z, "y-x^2", "z-x^3"), LEX)
    checks.append(sorted(map(str, gb)) == sorted(map(str, _ideal(Z, "z-x^3", "y-x^2").gens)))
    checks.append(normal_form(parse_poly("x*z-y^2", Z), gb, LEX).is_zero())
    C = Ring(["x", "y1"])
    checks.append(quotient(_ideal(C, "x^2*(y1^2-x)"), _ideal(C, "x")) == _ideal(C, "x*(y1^2-x)"))
    checks.append(saturate(_ideal(C, "x^2*(y1^2-x)"), _ideal(C, "x")) == (_ideal(C, "y1^2-x"), 2))
    E = Ring(["x", "y", "t", "y0", "y1"])
    K = eliminate(_ideal(E, "y0-t*x", "y1-t*y"), ["t"])
    checks.append(K == _ideal(K.ring, "x*y1-y*y0"))
    T = eliminate(_ideal(Ring("txyz"), "x-t", "y-t^2", "z-t^3"), ["t"])
    checks.append(T.contains(parse_poly("y-x^2", T.ring)) and T.contains(parse_poly("z-x^3", T.ring)))
    return sum(checks), len(checks)


def _strip_all(p, gens):
    for e in gens:
        while True:
            q, r = divide(p, e)
            if not r.is_zero():
                break
            p = q
    return p


def _chart_identities():
    fixtures = [
        (A4, "xyz", A4_CENTERS), (A4, "xyz", None), (A4, "xyz", A4_EXTRA_CENTERS),
        ("y^2-x^3", "xy", CUSP_CENTERS), ("y^2-x^3", "xy", None), ("y^2-x^3", "xy", CUSP_EXTRA_CENTERS),
        ("x^2+y^2+z^2", "xyz", None),
    ]
    charts = bad = 0
    for text, names, centers in fixtures:
        tree, _ = run(text, names, centers)
        f = tree.f()
        for c in tree.charts.values():
            if c.parent is None:
                continue
            charts += 1
            gens = [c.exceptional_generator(k) for k in c.visible()]
            q, r = divide(c.map_to_root.pull(f), c.strict_generator())
            jac = _strip_all(jacobian_det_of_map(c.map_to_root), gens)
            parent = tree.charts[c.parent]
            I = Ideal(parent.ring, [parent.strict_generator()])
            weak_ok = weak_transform(c, I) == strict_transform(c, I)[0]
            if not (r.is_zero() and _strip_all(q, gens).is_constant() and jac.is_constant() and weak_ok):
                bad += 1
    return charts, bad


def check_7():
    passed, total = _kernel_examples()
    charts, bad = _chart_identities()
    ok = passed == total and bad == 0
    return record(7, ok, f"kernel examples {passed}/{total}; factorization and weak=strict identities hold in {charts - bad}/{charts} charts")


def note_8():
    tree, _ = run(A4, "xyz", A4_CENTERS)
    RESULTS.append(
        f"NOTE criterion 8: reference counts 11 charts / 6 final are non-normative; "
        f"this scripted run has {len(tree.charts)} charts / {len(tree.leaves())} final"
    )


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 8)])
def test_criterion(check):
    assert check(), RESULTS[-1]


def test_criterion_8_note():
    note_8()


if __name__ == "__main__":
    for check in CHECKS:
        check()
    note_8()
    print("\n".join(RESULTS))

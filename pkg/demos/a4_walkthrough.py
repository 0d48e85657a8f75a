"""Resolve the A4 surface singularity x^5 + y^2 + z^2 = 0 and print the
chart tree, the divisor table and the numerical invariants."""

from desing import (
    CenterStrategy,
    Ideal,
    Ring,
    collect_divisors,
    discrepancies,
    dual_graph,
    intersection_matrix,
    lct,
    multiplicities_N,
    multiplicities_nu,
    parse_poly,
    resolve,
)

# three point blow-ups, then the two exceptional lines of the third
CENTERS = {
    "1": ["x", "y", "z"],
    "1.1": ["x1_0", "x1_1", "x1_2"],
    "1.1.1": ["x2_0", "x2_1", "x2_2"],
    "1.1.1.2": ["x3_0", "x3_1"],
    "1.1.1.3": ["x3_0", "x3_2"],
}


def main():
    R = Ring("xyz")
    tree = resolve(Ideal(R, [parse_poly("x^5+y^2+z^2", R)]), CenterStrategy.scripted(CENTERS))
    table = collect_divisors(tree)

    print("charts:")
    for label in tree.labels():
        c = tree.charts[label]
        mark = "final" if label in tree.leaves() else "blown up"
        print(f"  {label:12s} {mark:9s} strict: {c.strict_generator()}")
        print(f"  {'':12s} images: {', '.join(map(str, c.map_to_root.images))}")

    print("\ndivisor labels per final chart:")
    for label in tree.leaves():
        print(f"  {label:12s} {table.rows[label]}")

    print("\nN           ", multiplicities_N(tree, table))
    print("nu          ", multiplicities_nu(tree, table))
    print("discrepancy ", discrepancies(tree, table, "plain"))
    print("lct         ", lct(tree, table))

    m = intersection_matrix(tree, table)
    print("\nintersection matrix:")
    for row in m.matrix:
        print("  ", row)
    print("negative definite:", m.is_negative_definite())
    print()
    print(dual_graph(m).to_dot())


if __name__ == "__main__":
    main()

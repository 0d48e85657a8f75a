"""Topological zeta functions and monodromy for a few Brieskorn-Pham
polynomials, computed from their resolutions."""

from desing import Ideal, Ring, collect_divisors, lct, monodromy_charpoly, parse_poly, resolve, zeta_top

CASES = [
    ("y^2-x^3", "xy"),
    ("x^2+y^2+z^2", "xyz"),
    ("x^3+y^2+z^2", "xyz"),
    ("x^4+y^2+z^2", "xyz"),
    ("x^5+y^2+z^2", "xyz"),
]


def main():
    for text, names in CASES:
        R = Ring(names)
        tree = resolve(Ideal(R, [parse_poly(text, R)]))
        table = collect_divisors(tree)
        print(text)
        print("  Z_top       ", zeta_top(tree, table))
        print("  Z_top (d=2) ", zeta_top(tree, table, d=2))
        print("  Z_top,0     ", zeta_top(tree, table, local=True))
        print("  monodromy   ", monodromy_charpoly(tree, table))
        print("  lct         ", lct(tree, table))


if __name__ == "__main__":
    main()

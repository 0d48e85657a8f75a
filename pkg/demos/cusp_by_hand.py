"""The plane cusp y^2 = x^3: compare the automatic resolution with the
multiplicities a hand computation gives (N = 2, 3, 6 and nu = 2, 3, 5)."""

from desing import Ideal, Ring, collect_divisors, lct, multiplicities_N, multiplicities_nu, parse_poly, resolve


def main():
    R = Ring("xy")
    tree = resolve(Ideal(R, [parse_poly("y^2-x^3", R)]))
    table = collect_divisors(tree)
    N, nu = multiplicities_N(tree, table), multiplicities_nu(tree, table)
    # the last entry belongs to the strict transform
    for k, (n, v) in enumerate(zip(N[:-1], nu[:-1]), 1):
        print(f"E{k}: N = {n}, nu = {v}, ratio nu/N = {v}/{n}")
    print("lct =", lct(tree, table))
    print("final charts:", ", ".join(tree.leaves()))


if __name__ == "__main__":
    main()

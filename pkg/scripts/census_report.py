#!/usr/bin/env python3
"""Print the census of non-factorizable quotients for a few levels together
with the bounds they must respect."""

import argparse

from etaforge.factor import nonfactorizable_census
from etaforge.numtheory import omega_bound, omega_zero_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("levels", nargs="*", type=int, default=[2, 3, 4, 6, 8, 9])
    ap.add_argument("--list", action="store_true", help="also print every quotient")
    args = ap.parse_args()
    print(f"{'N':>4} {'census':>7} {'Omega':>12} {'level N':>8} {'Omega_0':>12} {'k_max':>6}")
    for N in args.levels:
        es = nonfactorizable_census(N)
        exact = [e for e in es if e.level == N]
        print(f"{N:>4} {len(es):>7} {str(omega_bound(N)):>12} {len(exact):>8} "
              f"{str(omega_zero_bound(N)):>12} {max(e.k for e in exact):>6}")
        if args.list:
            for e in es:
                print(f"       k={e.k:<3} level={e.level:<4} {e.source:<22} {e.quotient}")


if __name__ == "__main__":
    main()

"""Largest upset algebra of a comb-free co-tree with bounded generation rank, for small n and m."""

import argparse

from cotree_lab.bisim import ktable


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--m", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--size-cap", type=int, default=7)
    args = ap.parse_args()

    print(f"{'n':>3} {'m':>3} {'scanned':>8} {'max |A|':>8}  bound (m+1)n on depth")
    for n in args.n:
        for m in args.m:
            row = ktable(n, m, args.size_cap)
            print(f"{n:>3} {m:>3} {row['co_trees_scanned']:>8} {row['max_algebra_size']:>8}  {(m + 1) * n}")


if __name__ == "__main__":
    main()

"""Comparison matrix of T_0..T_k under surjective bi-p-morphisms, with search statistics."""

import argparse
import json
import time

from cotree_lab.morphisms import find_surjective_bi_p_morphism
from cotree_lab.poset import depth, make_hodkinson


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=2, help="largest index k")
    ap.add_argument("--budget", type=int, default=50_000_000)
    args = ap.parse_args()

    trees = [make_hodkinson(i) for i in range(args.max + 1)]
    for i, t in enumerate(trees):
        print(f"T_{i}: {t.n} points, depth {depth(t)}")
    rows = []
    for i, src in enumerate(trees):
        for j, tgt in enumerate(trees):
            if i == j:
                continue
            stats = {}
            start = time.perf_counter()
            f = find_surjective_bi_p_morphism(src, tgt, args.budget, stats)
            rows.append({"from": i, "onto": j, "found": f is not None,
                         "nodes": stats.get("nodes"), "seconds": round(time.perf_counter() - start, 3)})
            print(f"T_{i} ->> T_{j}: {'found' if f else 'none'} ({stats.get('nodes')} nodes)")
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()

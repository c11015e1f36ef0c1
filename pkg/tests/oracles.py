"""Brute-force reference implementations used only by the tests.

Everything here works on frozensets and explicit relations and shares no code
with the package beyond reading a poset's order matrix.
"""

from __future__ import annotations

import itertools
from functools import reduce

from cotree_lab.formula import And, Bot, Coimp, Imp, Or, Top, Var


def order(p):
    return {(x, y) for x in range(p.n) for y in range(p.n) if p.leq(x, y)}


def up(rel, s):
    return frozenset(y for (x, y) in rel if x in s)


def down(rel, s):
    return frozenset(x for (x, y) in rel if y in s)


def upsets(p):
    rel = order(p)
    pts = range(p.n)
    return [frozenset(s) for r in range(p.n + 1) for s in itertools.combinations(pts, r)
            if up(rel, s) == frozenset(s)]


def set_imp(rel, universe, u, v):
    return frozenset(x for x in universe if all(y in v for (z, y) in rel if z == x and y in u))


def set_coimp(rel, u, v):
    return frozenset(x for (y, x) in rel if y in u and y not in v)


def truth(p, coloring, f):
    """Truth set of ``f`` from set operations on upsets."""
    rel = order(p)
    universe = frozenset(range(p.n))
    if isinstance(f, Var):
        return frozenset(coloring[f.name])
    if isinstance(f, Top):
        return universe
    if isinstance(f, Bot):
        return frozenset()
    a, b = truth(p, coloring, f.left), truth(p, coloring, f.right)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Imp):
        return set_imp(rel, universe, a, b)
    assert isinstance(f, Coimp)
    return set_coimp(rel, a, b)


def valid_on_frame(p, f, names):
    ups = upsets(p)
    universe = frozenset(range(p.n))
    for combo in itertools.product(ups, repeat=len(names)):
        if truth(p, dict(zip(names, combo)), f) != universe:
            return False, dict(zip(names, combo))
    return True, None


def maps(p, q):
    return itertools.product(range(q.n), repeat=p.n)


def is_bi_p_morphism(p, q, f):
    rp, rq = order(p), order(q)
    if any((f[x], f[y]) not in rq for (x, y) in rp):
        return False
    for x in range(p.n):
        for z in range(q.n):
            if (f[x], z) in rq and not any(f[y] == z for (w, y) in rp if w == x):
                return False
            if (z, f[x]) in rq and not any(f[y] == z for (y, w) in rp if w == x):
                return False
    return True


def surjections(p, q):
    for f in maps(p, q):
        if len(set(f)) == q.n and is_bi_p_morphism(p, q, f):
            yield f


def embeddings(p, q):
    rp, rq = order(p), order(q)
    for f in itertools.permutations(range(q.n), p.n):
        if all(((x, y) in rp) == ((f[x], f[y]) in rq) for x in range(p.n) for y in range(p.n)):
            yield f


def longest_chain(p):
    rel = order(p)
    best = 0
    for r in range(p.n + 1):
        for s in itertools.combinations(range(p.n), r):
            if all((x, y) in rel or (y, x) in rel for x in s for y in s):
                best = max(best, r)
    return best


def widest_antichain(p):
    rel = order(p)
    best = 0
    for r in range(p.n + 1):
        for s in itertools.combinations(range(p.n), r):
            if all(x == y or ((x, y) not in rel and (y, x) not in rel) for x in s for y in s):
                best = max(best, r)
    return best


def closure(p, gens):
    """Bi-Heyting subalgebra of Up(p) generated by ``gens``, as a set of frozensets."""
    rel = order(p)
    universe = frozenset(range(p.n))
    out = {frozenset(), universe, *map(frozenset, gens)}
    while True:
        new = set(out)
        for u, v in itertools.product(out, repeat=2):
            new |= {u & v, u | v, set_imp(rel, universe, u, v), set_coimp(rel, u, v)}
        if new == out:
            return out
        out = new


def generation_rank(p):
    ups = upsets(p)
    for r in range(len(ups) + 1):
        for gens in itertools.combinations(ups, r):
            if len(closure(p, gens)) == len(ups):
                return r
    raise AssertionError("unreachable")


def is_bi_bisimulation(p, blocks):
    """Up, down and refinement conditions checked literally."""
    rel = order(p)
    cls = {x: i for i, b in enumerate(blocks) for x in b}
    eq = lambda a, b: cls[a] == cls[b]  # noqa: E731
    for x, y in itertools.product(range(p.n), repeat=2):
        if not eq(x, y):
            continue
        for x2 in range(p.n):
            if (x, x2) in rel and not any((y, y2) in rel and eq(x2, y2) for y2 in range(p.n)):
                return False
            if (x2, x) in rel and not any((y2, y) in rel and eq(x2, y2) for y2 in range(p.n)):
                return False
    saturated = [u for u in upsets(p) if all(cls[x] != cls[y] or (x in u) == (y in u)
                                           for x in range(p.n) for y in range(p.n))]
    for x, y in itertools.product(range(p.n), repeat=2):
        if not eq(x, y) and not any((x in u) != (y in u) for u in saturated):
            return False
    return True


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first], *part]
        for i in range(len(part)):
            yield [*part[:i], [first, *part[i]], *part[i + 1:]]


def meet_irreducible_bottom(upset_list):
    bot = frozenset()
    nonzero = [u for u in upset_list if u]
    return all(u & v != bot for u in nonzero for v in nonzero)


def joins(sets):
    return reduce(frozenset.union, sets, frozenset())

"""Maps between finite posets: bi-p-morphisms, order embeddings, and the comb quotient."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poset import (
    SCHEMA,
    Poset,
    PosetError,
    bits,
    canonical_form,
    is_co_forest,
    is_co_tree,
    make_comb,
    mask_of,
    popcount,
)

DEFAULT_NODE_BUDGET = 50_000_000


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PosetMap:
    source: Poset
    target: Poset
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.source.n:
            raise PosetError("map is not total")
        if any(not 0 <= y < self.target.n for y in self.map):
            raise PosetError("map leaves the target")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self, s: int) -> int:
        return mask_of(self.map[x] for x in bits(s))

    @property
    def surjective(self) -> bool:
        return len(set(self.map)) == self.target.n

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "map": list(self.map),
            "labels": {self.source.labels[x]: self.target.labels[y] for x, y in enumerate(self.map)},
        }


def is_order_preserving(f: PosetMap) -> bool:
    p, q = f.source, f.target
    return all(q.leq(f.map[x], f.map[y]) for x in range(p.n) for y in bits(p.up[x]))


def is_bi_p_morphism(f: PosetMap) -> bool:
    """Order preserving, with f[up x] = up f(x) and f[down x] = down f(x) for all x."""
    if not is_order_preserving(f):
        return False
    p, q = f.source, f.target
    for x in range(p.n):
        if f.image(p.up[x]) != q.up[f.map[x]]:
            return False
        if f.image(p.down[x]) != q.down[f.map[x]]:
            return False
    return True


def is_order_embedding(f: PosetMap) -> bool:
    p, q = f.source, f.target
    return all(p.leq(x, y) == q.leq(f.map[x], f.map[y]) for x in range(p.n) for y in range(p.n))


def top_down_order(p: Poset) -> list[int]:
    """Linear extension read from the top: every point comes after its whole strict upset."""
    return sorted(range(p.n), key=lambda x: (popcount(p.up[x]), x))


def find_surjective_bi_p_morphism(p: Poset, q: Poset, budget: int = DEFAULT_NODE_BUDGET,
                                  stats: dict | None = None) -> PosetMap | None:
    """First surjective bi-p-morphism from ``p`` onto ``q`` in search order, or None.

    Points of ``p`` are assigned top-down (see ``top_down_order``) and targets
    are tried in index order, so the witness is the lexicographically least map
    when read along that order. On co-forests, each point may only go to the
    image of its upper cover or to one of that image's lower covers.
    """
    if stats is not None:
        stats["nodes"] = 0
    if q.n == 0:
        return PosetMap(p, q, ()) if p.n == 0 else None
    if q.n > p.n:
        return None
    order = top_down_order(p)
    rank = {x: i for i, x in enumerate(order)}
    forest = is_co_forest(p) and is_co_forest(q)
    q_max, q_min = q.maximal(), q.minimal()
    p_max, p_min = p.maximal(), p.minimal()
    # points whose downset becomes fully assigned at each step
    down_done: list[list[int]] = [[] for _ in order]
    for x in range(p.n):
        down_done[max(rank[y] for y in bits(p.down[x]))].append(x)
    parent = [next(iter(bits(p.upper_covers[x])), -1) if forest else -1 for x in range(p.n)]
    comparable = [[y for y in bits((p.up[x] | p.down[x]) & ~(1 << x))] for x in range(p.n)]

    f = [-1] * p.n
    hits = [0] * q.n
    missing = q.n
    nodes = 0

    def candidates(x: int) -> list[int]:
        if forest and parent[x] >= 0:
            fp = f[parent[x]]
            cands = [fp] + list(bits(q.lower_covers[fp]))
            cands.sort()
        else:
            cands = list(range(q.n))
        mask = q.full
        if p_max >> x & 1:
            mask &= q_max
        if p_min >> x & 1:
            mask &= q_min
        return [c for c in cands if mask >> c & 1]

    def consistent(x: int, y: int) -> bool:
        for z in comparable[x]:
            fz = f[z]
            if fz < 0:
                continue
            if p.leq(x, z) and not q.leq(y, fz):
                return False
            if p.leq(z, x) and not q.leq(fz, y):
                return False
        up_img = 1 << y
        for z in bits(p.up[x]):
            if z != x:
                up_img |= 1 << f[z]
        return up_img == q.up[y]

    def down_ok(x: int) -> bool:
        img = 0
        for z in bits(p.down[x]):
            img |= 1 << f[z]
        return img == q.down[f[x]]

    def rec(i: int) -> bool:
        nonlocal nodes, missing
        if i == len(order):
            return missing == 0
        if missing > len(order) - i:
            return False
        x = order[i]
        for y in candidates(x):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"more than {budget} nodes")
            if not consistent(x, y):
                continue
            f[x] = y
            hits[y] += 1
            if hits[y] == 1:
                missing -= 1
            if all(down_ok(z) for z in down_done[i]) and rec(i + 1):
                return True
            hits[y] -= 1
            if hits[y] == 0:
                missing += 1
            f[x] = -1
        return False

    found = rec(0)
    if stats is not None:
        stats["nodes"] = nodes
    return PosetMap(p, q, tuple(f)) if found else None


def find_order_embedding(p: Poset, q: Poset, budget: int = DEFAULT_NODE_BUDGET) -> PosetMap | None:
    """First order embedding of ``p`` into ``q`` in lexicographic order of the image tuple."""
    if p.n > q.n:
        return None
    f = [-1] * p.n
    used = 0
    nodes = 0
    up_size = [popcount(m) for m in p.up]
    down_size = [popcount(m) for m in p.down]
    q_up = [popcount(m) for m in q.up]
    q_down = [popcount(m) for m in q.down]

    def rec(x: int) -> bool:
        nonlocal used, nodes
        if x == p.n:
            return True
        for y in range(q.n):
            if used >> y & 1 or q_up[y] < up_size[x] or q_down[y] < down_size[x]:
                continue
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"more than {budget} nodes")
            if all(p.leq(x, z) == q.leq(y, f[z]) and p.leq(z, x) == q.leq(f[z], y) for z in range(x)):
                f[x] = y
                used |= 1 << y
                if rec(x + 1):
                    return True
                used &= ~(1 << y)
        f[x] = -1
        return False

    return PosetMap(p, q, tuple(f)) if rec(0) else None


# -- comb quotient ------------------------------------------------------------
class CombQuotientError(ValueError):
    pass


@dataclass(frozen=True)
class CombQuotient:
    morphism: PosetMap
    embedding: PosetMap
    blocks: tuple[int, ...]
    tooth_blocks: tuple[int, ...]


def comb_quotient(x: Poset, n: int, budget: int = DEFAULT_NODE_BUDGET) -> CombQuotient:
    """Bi-p-morphism from the co-tree ``x`` onto the ``n``-comb, built from an embedding.

    The blocks X_i (sent to spine point x_i) and X_i' (sent to tooth x_i') are
    grown inductively with singleton witnesses; after each step the four
    invariants of the construction are checked and the final map is verified.
    """
    if not is_co_tree(x):
        raise CombQuotientError("input is not a co-tree")
    comb = make_comb(n)
    emb = find_order_embedding(comb, x, budget)
    if emb is None:
        raise CombQuotientError(f"the {n}-comb does not embed")
    spine = [emb.map[comb.index(f"x{i}")] for i in range(1, n + 1)]
    teeth = [emb.map[comb.index(f"x{i}'")] for i in range(1, n + 1)]
    spine[-1] = x.greatest()  # the top of the comb may be moved to the co-root
    moved = list(emb.map)
    moved[comb.index(f"x{n}")] = spine[-1]
    embedding = PosetMap(comb, x, tuple(moved))
    if not is_order_embedding(embedding):
        raise AssertionError("promoted embedding is not an order embedding")

    up, down = x.up_closure, x.down_closure
    blocks = [1 << spine[0]]
    tblocks = [down(1 << spine[0]) & ~(1 << spine[0])]
    _check_invariants(x, blocks, tblocks, spine, teeth, 1)
    for m in range(2, n + 1):
        u_m, u_m_t = 1 << spine[m - 1], 1 << teeth[m - 1]
        prev = blocks[-1]
        w_m = down(u_m) & up(prev) & up(down(u_m_t))
        w_m_t = down(u_m_t) & down(w_m)
        ws = [b & down(w_m) for b in blocks]
        ws_t = [b & down(w_m) for b in tblocks]
        w_prev = ws[-1]
        z = up(w_prev) & ~(w_prev | up(w_m))
        v_prev = w_prev | z
        v_prev_t = ws_t[-1] | (down(z) & ~(z | down(w_prev)))
        v_m_t = down(w_m) & ~(w_m | down(v_prev))
        blocks = ws[:-1] + [v_prev, w_m]
        tblocks = ws_t[:-1] + [v_prev_t, v_m_t]
        _check_invariants(x, blocks, tblocks, spine, teeth, m)

    f = [-1] * x.n
    for i in range(n):
        for pt in bits(blocks[i]):
            f[pt] = comb.index(f"x{i + 1}")
        for pt in bits(tblocks[i]):
            if f[pt] >= 0:
                raise AssertionError("blocks overlap")
            f[pt] = comb.index(f"x{i + 1}'")
    if -1 in f:
        raise AssertionError("blocks do not cover the co-tree")
    morphism = PosetMap(x, comb, tuple(f))
    if not (is_bi_p_morphism(morphism) and morphism.surjective):
        raise AssertionError("constructed map is not a surjective bi-p-morphism")
    return CombQuotient(morphism, embedding, tuple(blocks), tuple(tblocks))


def _check_invariants(x: Poset, blocks, tblocks, spine, teeth, m: int) -> None:
    up, down = x.up_closure, x.down_closure
    n = len(spine)
    fails = []
    for i in range(m):
        b, t = blocks[i], tblocks[i]
        if not (x.is_convex(b) and b >> spine[i] & 1):
            fails.append(f"block {i + 1} not convex or misses its spine point")
        if not (x.is_downset(t) and t >> teeth[i] & 1):
            fails.append(f"tooth block {i + 1} not a downset or misses its tooth")
        for j in range(i + 1, n):
            if b & up(down(1 << teeth[j])):
                fails.append(f"block {i + 1} meets the cone of tooth {j + 1}")
    if down(blocks[0]) != blocks[0] | tblocks[0] or blocks[0] & tblocks[0]:
        fails.append("first block decomposition")
    if up(tblocks[0]) != up(blocks[0]) | tblocks[0] or up(blocks[0]) & tblocks[0]:
        fails.append("first tooth upset decomposition")
    for i in range(1, m):
        parts = [blocks[i], down(blocks[i - 1]), tblocks[i]]
        if down(blocks[i]) != parts[0] | parts[1] | parts[2] or sum(map(popcount, parts)) != popcount(down(blocks[i])):
            fails.append(f"downset decomposition at {i + 1}")
        if down(blocks[i - 1]) & up(tblocks[i]):
            fails.append(f"separation at {i + 1}")
        if up(blocks[i]) != up(blocks[i - 1]) & up(tblocks[i]):
            fails.append(f"upset intersection at {i + 1}")
    if fails:
        raise AssertionError("comb construction invariant failed: " + "; ".join(fails))


# -- antichains ------------------------------------------------------------------
def antichain_matrix(posets: Sequence[Poset], budget: int = DEFAULT_NODE_BUDGET) -> list[list[str]]:
    """Entry [i][j] compares posets i and j under "is a bi-p-morphic image of".

    "<=" means poset i is an image of poset j, ">=" the converse.
    """
    k = len(posets)
    out = [["" for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i == j or canonical_form(posets[i]) == canonical_form(posets[j]):
                out[i][j] = "isomorphic"
                continue
            if out[i][j]:
                continue
            i_below = find_surjective_bi_p_morphism(posets[j], posets[i], budget) is not None
            j_below = find_surjective_bi_p_morphism(posets[i], posets[j], budget) is not None
            if i_below and j_below:
                raise AssertionError("mutual images of non-isomorphic finite posets")
            out[i][j] = "<=" if i_below else ">=" if j_below else "incomparable"
            out[j][i] = {"<=": ">=", ">=": "<=", "incomparable": "incomparable"}[out[i][j]]
    return out

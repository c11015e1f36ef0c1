"""Bi-bisimulation equivalences on finite posets and the generation tests built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .algebra import BiHeytingAlgebra, gen_rank, generates, upset_algebra
from .morphisms import find_order_embedding
from .poset import (
    CapExceeded,
    Poset,
    PosetError,
    bits,
    depth,
    enumerate_cotrees,
    is_co_forest,
    is_co_tree,
    make_comb,
    mask_of,
    popcount,
)

DEFAULT_PARTITION_CAP = 8


@dataclass(frozen=True, eq=False)
class EquivPartition:
    owner: Poset
    blocks: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b == 0:
                raise PosetError("empty block")
            if b & seen:
                raise PosetError("blocks overlap")
            seen |= b
        if seen != self.owner.full:
            raise PosetError("blocks do not cover the poset")
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=lambda b: b & -b)))

    @classmethod
    def from_pairs(cls, p: Poset, pairs: Sequence[tuple[int, int]]) -> EquivPartition:
        """Least equivalence containing ``pairs``."""
        parent = list(range(p.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in pairs:
            parent[find(x)] = find(y)
        groups: dict[int, int] = {}
        for x in range(p.n):
            groups[find(x)] = groups.get(find(x), 0) | 1 << x
        return cls(p, tuple(groups.values()))

    @classmethod
    def identity(cls, p: Poset) -> EquivPartition:
        return cls(p, tuple(1 << x for x in range(p.n)))

    def block_of(self, x: int) -> int:
        for b in self.blocks:
            if b >> x & 1:
                return b
        raise PosetError("point outside the poset")

    def related(self, x: int, y: int) -> bool:
        return bool(self.block_of(x) >> y & 1)

    @property
    def proper(self) -> bool:
        return len(self.blocks) < self.owner.n

    def saturate(self, s: int) -> int:
        out = 0
        for b in self.blocks:
            if b & s:
                out |= b
        return out

    def is_saturated(self, s: int) -> bool:
        return self.saturate(s) == s

    def to_json(self) -> dict:
        lab = self.owner.labels
        return {"blocks": [[lab[x] for x in bits(b)] for b in self.blocks]}


@dataclass(frozen=True)
class ColoredFrame:
    poset: Poset
    colors: tuple[int, ...]
    closure_changed: bool = False

    def color(self, x: int) -> tuple[int, ...]:
        return tuple(u >> x & 1 for u in self.colors)


def is_bi_bisimulation(p: Poset, e: EquivPartition) -> bool:
    """Up, Down and Refined conditions, checked exhaustively."""
    if e.owner is not p and e.owner.n != p.n:
        raise PosetError("partition belongs to another poset")
    for b in e.blocks:
        for x in bits(b):
            for y in bits(b):
                if x == y:
                    continue
                # every block reachable upward from x is reachable upward from y
                for x2 in bits(p.up[x]):
                    if not e.block_of(x2) & p.up[y]:
                        return False
                for x2 in bits(p.down[x]):
                    if not e.block_of(x2) & p.down[y]:
                        return False
    least = [_least_saturated_upset(p, e, x) for x in range(p.n)]
    for x in range(p.n):
        for y in range(x + 1, p.n):
            if not e.related(x, y) and least[x] >> y & 1 and least[y] >> x & 1:
                return False
    return True


def _least_saturated_upset(p: Poset, e: EquivPartition, x: int) -> int:
    s = 1 << x
    while True:
        t = e.saturate(p.up_closure(s))
        if t == s:
            return s
        s = t


def saturated_upsets(p: Poset, e: EquivPartition) -> list[int]:
    from .poset import all_upsets

    return [u for u in all_upsets(p) if e.is_saturated(u)]


def induced_partition(p: Poset, family: Sequence[int]) -> EquivPartition:
    """Points equivalent when no member of ``family`` separates them."""
    groups: dict[tuple, int] = {}
    for x in range(p.n):
        key = tuple(u >> x & 1 for u in family)
        groups[key] = groups.get(key, 0) | 1 << x
    return EquivPartition(p, tuple(groups.values()))


# -- isolated chains and twins --------------------------------------------------
def _chain_ends(p: Poset, h: int) -> tuple[int, int]:
    if h == 0 or not p.is_chain(h):
        raise PosetError("H is not a nonempty chain")
    xs = list(bits(h))
    m0 = min(xs, key=lambda x: popcount(p.down[x] & h))
    m1 = max(xs, key=lambda x: popcount(p.down[x] & h))
    return m0, m1


def is_isolated_chain(p: Poset, h: int) -> bool:
    m0, m1 = _chain_ends(p, h)
    return (p.down[m1] & ~h == p.down[m0] & ~(1 << m0)
            and p.up[m0] & ~h == p.up[m1] & ~(1 << m1))


def isolated_chain_partition(p: Poset, h: int) -> EquivPartition:
    _chain_ends(p, h)
    return EquivPartition(p, (h,) + tuple(1 << x for x in range(p.n) if not h >> x & 1))


def _subtree_code(p: Poset, x: int) -> tuple:
    return tuple(sorted((_subtree_code(p, c) for c in bits(p.lower_covers[x])), reverse=True))


def downset_isomorphism(p: Poset, w: int, v: int) -> dict[int, int] | None:
    """An order isomorphism from down w onto down v in a co-forest, if one exists."""
    if _subtree_code(p, w) != _subtree_code(p, v):
        return None
    out = {w: v}
    left = sorted(bits(p.lower_covers[w]), key=lambda c: _subtree_code(p, c))
    right = sorted(bits(p.lower_covers[v]), key=lambda c: _subtree_code(p, c))
    for a, b in zip(left, right):
        out.update(downset_isomorphism(p, a, b))
    return out


def twin_partition(p: Poset, w: int, v: int, iso: dict[int, int]) -> EquivPartition:
    """Pair each x below w with iso(x) below v; the hypotheses are checked first."""
    if w == v:
        raise PosetError("twins must be distinct")
    if not is_co_forest(p):
        raise PosetError("twin partitions need a co-forest")
    if not p.upper_covers[w] or p.upper_covers[w] != p.upper_covers[v]:
        raise PosetError("points do not share an immediate successor")
    if set(iso) != set(bits(p.down[w])) or set(iso.values()) != set(bits(p.down[v])):
        raise PosetError("map is not a bijection between the downsets")
    if any(p.leq(a, b) != p.leq(iso[a], iso[b]) for a in iso for b in iso):
        raise PosetError("map is not an order isomorphism")
    return EquivPartition.from_pairs(p, list(iso.items()))


def twin_pairs(p: Poset) -> Iterator[tuple[int, int, dict[int, int]]]:
    """Distinct points with a common upper cover and isomorphic downsets (co-forests only)."""
    for u in range(p.n):
        kids = list(bits(p.lower_covers[u]))
        for i, w in enumerate(kids):
            for v in kids[i + 1:]:
                iso = downset_isomorphism(p, w, v)
                if iso is not None:
                    yield w, v, iso


def known_bisimulation_pairs(p: Poset) -> list[list[tuple[int, int]]]:
    """Pair lists of proper bi-bisimulations from twin downsets and isolated 2-chains.

    A set of upsets that is saturated for one of these cannot generate Up(p).
    """
    out = []
    if is_co_forest(p):
        for w, v, iso in twin_pairs(p):
            out.append(list(iso.items()))
    for x, y in p.covers():
        if is_isolated_chain(p, 1 << x | 1 << y):
            out.append([(x, y)])
    return out


# -- generation and the coloring theorem --------------------------------------------
def generates_upsets(p: Poset, colors: Sequence[int]) -> bool:
    alg = upset_algebra(p)
    pos = {u: i for i, u in enumerate(alg.upsets)}
    return generates(alg, [pos[u] for u in colors])


def color_respecting_partitions(p: Poset, colors: Sequence[int]) -> Iterator[EquivPartition]:
    """Every partition whose blocks are monochromatic (restricted growth order)."""
    col = [tuple(u >> x & 1 for u in colors) for x in range(p.n)]
    blocks: list[int] = []
    block_color: list[tuple] = []

    def rec(x: int):
        if x == p.n:
            yield EquivPartition(p, tuple(blocks))
            return
        for i in range(len(blocks)):
            if block_color[i] == col[x]:
                blocks[i] |= 1 << x
                yield from rec(x + 1)
                blocks[i] &= ~(1 << x)
        blocks.append(1 << x)
        block_color.append(col[x])
        yield from rec(x + 1)
        blocks.pop()
        block_color.pop()

    yield from rec(0)


@dataclass(frozen=True)
class ColoringReport:
    generated: bool
    every_proper_identifies_colors: bool
    witness: EquivPartition | None
    partitions_checked: int

    @property
    def agree(self) -> bool:
        return self.generated == self.every_proper_identifies_colors

    def to_json(self) -> dict:
        return {"generated": self.generated,
                "every_proper_identifies_colors": self.every_proper_identifies_colors,
                "agree": self.agree, "partitions_checked": self.partitions_checked,
                "witness": self.witness.to_json() if self.witness else None}


def coloring_theorem_check(p: Poset, colors: Sequence[int], cap: int = DEFAULT_PARTITION_CAP) -> ColoringReport:
    """Closure test against the search for a proper monochromatic bi-bisimulation."""
    if p.n > cap:
        raise CapExceeded(f"{p.n} points exceeds partition cap {cap}")
    for u in colors:
        if not p.is_upset(u):
            raise PosetError("color is not an upset")
    generated = generates_upsets(p, colors)
    witness = None
    checked = 0
    for e in color_respecting_partitions(p, colors):
        checked += 1
        if e.proper and is_bi_bisimulation(p, e):
            witness = e
            break
    return ColoringReport(generated, witness is None, witness, checked)


def comb_coloring(n: int) -> ColoredFrame:
    """The single upset {x1} together with the cones over the even teeth, then up-closed."""
    if n < 1:
        raise PosetError("comb needs n >= 1")
    comb = make_comb(n)
    raw = 1 << comb.index("x1")
    for i in range(2, n + 1, 2):
        raw |= comb.up[comb.index(f"x{i}'")]
    closed = comb.up_closure(raw)
    return ColoredFrame(comb, (closed,), closed != raw)


# -- depth bound ------------------------------------------------------------------
@dataclass(frozen=True)
class DepthBoundReport:
    n: int
    rank: int
    depth: int
    max_cone: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.depth <= self.bound and self.max_cone <= self.bound

    def to_json(self) -> dict:
        return {"n": self.n, "gen_rank": self.rank, "depth": self.depth,
                "max_minimal_cone": self.max_cone, "bound": self.bound, "holds": self.holds}


class PreconditionError(ValueError):
    pass


def depth_bound_check(x: Poset, n: int, rank_cap: int = 1 << 10) -> DepthBoundReport:
    """Depth and minimal cones against (gen_rank + 1) * n on a co-tree omitting the n-comb."""
    if not is_co_tree(x):
        raise PreconditionError("input is not a co-tree")
    if find_order_embedding(make_comb(n), x) is not None:
        raise PreconditionError(f"the {n}-comb embeds into the input")
    m = gen_rank(upset_algebra(x), cap=rank_cap)
    cone = max(popcount(x.up[w]) for w in bits(x.minimal()))
    return DepthBoundReport(n, m, depth(x), cone, (m + 1) * n)


def ktable(n: int, m: int, size_cap: int, rank_cap: int = 1 << 10) -> dict:
    """Largest upset algebra among co-trees up to ``size_cap`` omitting the n-comb with gen rank <= m."""
    best = 0
    witness = None
    scanned = 0
    comb = make_comb(n)
    for x in enumerate_cotrees(size_cap):
        if find_order_embedding(comb, x) is not None:
            continue
        alg = upset_algebra(x)
        scanned += 1
        if gen_rank(alg, cap=rank_cap) <= m and alg.k > best:
            best, witness = alg.k, x
    return {"n": n, "m": m, "size_cap": size_cap, "co_trees_scanned": scanned,
            "max_algebra_size": best, "witness": witness.to_json() if witness else None}


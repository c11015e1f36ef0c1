"""Finite posets stored as bit-matrix reachability, plus co-tree combinatorics.

Elements are dense indices ``0..n-1``; a subset of a poset is an ``int`` bitmask.
``up[x]`` is the bitmask of the principal upset of ``x`` (``x`` included) and
``down[x]`` the principal downset.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

SCHEMA = "cotree-lab/1"
DEFAULT_UPSET_CAP = 1 << 16
DEFAULT_ENUM_CAP = 12


class PosetError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Raised when a configurable size or budget cap would be exceeded."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        m |= 1 << e
    return m


@dataclass(frozen=True, eq=False)
class Poset:
    n: int
    up: tuple[int, ...]
    down: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.n)))
        if len(self.up) != self.n or len(self.down) != self.n or len(self.labels) != self.n:
            raise PosetError("inconsistent poset size")

    # -- basic relation -------------------------------------------------
    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    @cached_property
    def leq_matrix(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(self.leq(i, j) for j in range(self.n)) for i in range(self.n))

    @cached_property
    def upper_covers(self) -> tuple[int, ...]:
        """Bitmask of immediate successors of each element."""
        out = []
        for x in range(self.n):
            strict = self.up[x] & ~(1 << x)
            covers = strict
            for y in bits(strict):
                covers &= ~(self.up[y] & ~(1 << y))
            out.append(covers)
        return tuple(out)

    @cached_property
    def lower_covers(self) -> tuple[int, ...]:
        out = [0] * self.n
        for x in range(self.n):
            for y in bits(self.upper_covers[x]):
                out[y] |= 1 << x
        return tuple(out)

    def covers(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in bits(self.upper_covers[x])]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise PosetError(f"unknown label {label!r}") from None

    # -- closures --------------------------------------------------------
    def _check(self, s: int) -> None:
        if s < 0 or s >> self.n:
            raise PosetError("subset does not belong to this poset")

    def up_closure(self, s: int) -> int:
        self._check(s)
        out = 0
        for x in bits(s):
            out |= self.up[x]
        return out

    def down_closure(self, s: int) -> int:
        self._check(s)
        out = 0
        for x in bits(s):
            out |= self.down[x]
        return out

    def is_upset(self, s: int) -> bool:
        return self.up_closure(s) == s

    def is_downset(self, s: int) -> bool:
        return self.down_closure(s) == s

    def is_convex(self, s: int) -> bool:
        return self.up_closure(s) & self.down_closure(s) == s

    def maximal(self) -> int:
        return mask_of(x for x in range(self.n) if self.up[x] == 1 << x)

    def minimal(self) -> int:
        return mask_of(x for x in range(self.n) if self.down[x] == 1 << x)

    def is_chain(self, s: int) -> bool:
        xs = list(bits(s))
        return all(self.comparable(a, b) for a, b in itertools.combinations(xs, 2))

    def is_antichain(self, s: int) -> bool:
        xs = list(bits(s))
        return not any(self.comparable(a, b) for a, b in itertools.combinations(xs, 2))

    def greatest(self) -> int | None:
        for x in range(self.n):
            if self.down[x] == self.full:
                return x
        return None

    # -- substructures ---------------------------------------------------
    def restrict(self, s: int) -> tuple[Poset, list[int]]:
        """Induced subposet on ``s``; returns it with the old index of each new element."""
        keep = list(bits(s))
        pos = {old: new for new, old in enumerate(keep)}
        up = tuple(mask_of(pos[y] for y in bits(self.up[x] & s)) for x in keep)
        down = tuple(mask_of(pos[y] for y in bits(self.down[x] & s)) for x in keep)
        return Poset(len(keep), up, down, tuple(self.labels[x] for x in keep)), keep

    def relabel(self, perm: Sequence[int]) -> Poset:
        """Poset with element ``x`` renamed ``perm[x]``."""
        inv = [0] * self.n
        for x, px in enumerate(perm):
            inv[px] = x
        up = tuple(mask_of(perm[y] for y in bits(self.up[inv[i]])) for i in range(self.n))
        down = tuple(mask_of(perm[y] for y in bits(self.down[inv[i]])) for i in range(self.n))
        return Poset(self.n, up, down, tuple(self.labels[inv[i]] for i in range(self.n)))

    def dual(self) -> Poset:
        return Poset(self.n, self.down, self.up, self.labels)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "elements": list(self.labels),
            "covers": [[self.labels[x], self.labels[y]] for x, y in self.covers()],
        }

    def to_dot(self) -> str:
        lines = ["digraph poset {", "  rankdir=BT;"]
        for lab in self.labels:
            lines.append(f'  "{lab}";')
        for x, y in self.covers():
            lines.append(f'  "{self.labels[x]}" -> "{self.labels[y]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        cov = ", ".join(f"{self.labels[x]}<{self.labels[y]}" for x, y in self.covers())
        return f"Poset(n={self.n}, covers=[{cov}])"

    def __len__(self) -> int:
        return self.n


def build_poset(labels: Sequence[str], covers: Iterable[tuple[str, str]]) -> Poset:
    """Reflexive-transitive closure of ``covers`` (pairs ``(lower, upper)``)."""
    labels = [str(x) for x in labels]
    if len(set(labels)) != len(labels):
        raise PosetError("duplicate label")
    pos = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    succ = [0] * n
    for a, b in covers:
        if str(a) not in pos or str(b) not in pos:
            raise PosetError(f"dangling reference in cover ({a}, {b})")
        succ[pos[str(a)]] |= 1 << pos[str(b)]
    up = [0] * n
    for x in range(n):
        seen = 1 << x
        stack = [x]
        while stack:
            y = stack.pop()
            for z in bits(succ[y] & ~seen):
                seen |= 1 << z
                stack.append(z)
        up[x] = seen
    return _from_up(up, labels)


def _from_up(up: Sequence[int], labels: Sequence[str] | None = None) -> Poset:
    n = len(up)
    for x in range(n):
        for y in bits(up[x]):
            if y != x and up[y] >> x & 1:
                raise PosetError(f"cycle detected between {x} and {y}")
    down = [0] * n
    for x in range(n):
        for y in bits(up[x]):
            down[y] |= 1 << x
    return Poset(n, tuple(up), tuple(down), tuple(labels) if labels else ())


def from_leq(matrix: Sequence[Sequence[bool]], labels: Sequence[str] | None = None) -> Poset:
    n = len(matrix)
    up = [mask_of(j for j in range(n) if matrix[i][j]) for i in range(n)]
    for i in range(n):
        if not matrix[i][i]:
            raise PosetError("relation is not reflexive")
        for j in bits(up[i]):
            if up[j] & ~up[i]:
                raise PosetError("relation is not transitive")
    return _from_up(up, labels)


def from_json(data: dict | str) -> Poset:
    if isinstance(data, str):
        data = json.loads(data)
    return build_poset(data["elements"], [tuple(c) for c in data["covers"]])


def disjoint_union(*posets: Poset) -> Poset:
    up: list[int] = []
    labels: list[str] = []
    offset = 0
    for k, p in enumerate(posets):
        for x in range(p.n):
            up.append(p.up[x] << offset)
            lab = p.labels[x]
            labels.append(lab if len(posets) == 1 else f"{lab}.{k}")
        offset += p.n
    return _from_up(up, labels)


EMPTY = Poset(0, (), (), ())


# -- structural predicates and measures -----------------------------------
def is_co_tree(p: Poset) -> bool:
    if p.n == 0 or p.greatest() is None:
        return False
    return all(p.is_chain(p.up[x]) for x in range(p.n))


def is_co_forest(p: Poset) -> bool:
    return all(p.is_chain(p.up[x]) for x in range(p.n))


def depth(p: Poset) -> int:
    """Cardinality of a longest chain, counted in elements."""
    if p.n == 0:
        raise PosetError("depth of empty poset")
    memo: dict[int, int] = {}

    def height(x: int) -> int:
        if x not in memo:
            memo[x] = 1 + max((height(y) for y in bits(p.upper_covers[x])), default=0)
        return memo[x]

    return max(height(x) for x in range(p.n))


def width(p: Poset) -> int:
    """Cardinality of a largest antichain (exact, by Dilworth via bipartite matching)."""
    if p.n == 0:
        raise PosetError("width of empty poset")
    match_right = [-1] * p.n

    def augment(x: int, seen: list[bool]) -> bool:
        for y in bits(p.up[x] & ~(1 << x)):
            if not seen[y]:
                seen[y] = True
                if match_right[y] < 0 or augment(match_right[y], seen):
                    match_right[y] = x
                    return True
        return False

    matching = sum(augment(x, [False] * p.n) for x in range(p.n))
    return p.n - matching


def antichain_width_bruteforce(p: Poset) -> int:
    best = 0
    for r in range(1, p.n + 1):
        if any(p.is_antichain(mask_of(c)) for c in itertools.combinations(range(p.n), r)):
            best = r
        else:
            break
    return best


def components(p: Poset) -> list[int]:
    """Connected components of the comparability graph, as bitmasks, in order of least element."""
    seen = 0
    out = []
    for x in range(p.n):
        if seen >> x & 1:
            continue
        comp = 1 << x
        frontier = comp
        while frontier:
            nxt = 0
            for y in bits(frontier):
                nxt |= p.up[y] | p.down[y]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(comp)
    return out


def all_upsets(p: Poset, cap: int = DEFAULT_UPSET_CAP) -> list[int]:
    """Every upset once, ordered by (cardinality, bitmask)."""
    # decide points top-down so that a point may join only once its strict upset is in
    order = _linear_extension(p)[::-1]
    out: list[int] = []

    def rec(i: int, cur: int) -> None:
        if len(out) > cap:
            raise CapExceeded(f"more than {cap} upsets")
        if i == len(order):
            out.append(cur)
            return
        x = order[i]
        rec(i + 1, cur)
        if p.up[x] & ~(1 << x) & ~cur == 0:
            rec(i + 1, cur | 1 << x)

    rec(0, 0)
    if len(out) > cap:
        raise CapExceeded(f"more than {cap} upsets")
    out.sort(key=lambda m: (popcount(m), m))
    return out


def _linear_extension(p: Poset) -> list[int]:
    return sorted(range(p.n), key=lambda x: (popcount(p.down[x]), x))


# -- named families -------------------------------------------------------
def make_chain(n: int) -> Poset:
    """``L_n``: elements ``c1 < c2 < ... < cn``."""
    if n < 1:
        raise PosetError("chain needs n >= 1")
    labels = [f"c{i}" for i in range(1, n + 1)]
    return build_poset(labels, list(zip(labels, labels[1:])))


def make_cofork(n: int) -> Poset:
    """``F_n``: co-root ``r`` above ``n`` pairwise incomparable points."""
    if n < 1:
        raise PosetError("co-fork needs n >= 1")
    leaves = [f"x{i}" for i in range(1, n + 1)]
    return build_poset(leaves + ["r"], [(x, "r") for x in leaves])


def make_comb(n: int) -> Poset:
    """``C_n``: spine ``x1 < ... < xn`` with a tooth ``xi'`` covered only by ``xi``."""
    if n < 1:
        raise PosetError("comb needs n >= 1")
    labels, covers = [], []
    for i in range(1, n + 1):
        labels += [f"x{i}'", f"x{i}"]
        covers.append((f"x{i}'", f"x{i}"))
        if i > 1:
            covers.append((f"x{i-1}", f"x{i}"))
    return build_poset(labels, covers)


def make_hodkinson(n: int) -> Poset:
    """The co-tree ``T_n``: a 4-chain ``d<c<b<a`` topped by ``n`` gadgets.

    Gadget ``i`` (stacked from ``n`` at the bottom to ``1`` at the top) has spine
    points ``w_i < u_i``, a 3-chain ending in ``z_i`` covered by ``w_i``, and a
    point ``v_i`` covered by ``u_i`` with two incomparable minimal points below it.
    """
    if n < 0:
        raise PosetError("hodkinson index must be >= 0")
    labels = ["d", "c", "b", "a"]
    covers = [("d", "c"), ("c", "b"), ("b", "a")]
    below = "a"
    for i in range(n, 0, -1):
        w, u, z, v = f"w{i}", f"u{i}", f"z{i}", f"v{i}"
        z1, z2 = f"z{i}_1", f"z{i}_2"
        l1, l2 = f"v{i}_1", f"v{i}_2"
        labels += [z1, z2, z, w, l1, l2, v, u]
        covers += [(below, w), (w, u), (z1, z2), (z2, z), (z, w), (l1, v), (l2, v), (v, u)]
        below = u
    return build_poset(labels, covers)


# -- co-tree canonical forms and enumeration -------------------------------
def _tree_code(p: Poset, root: int) -> tuple:
    return tuple(sorted((_tree_code(p, c) for c in bits(p.lower_covers[root])), reverse=True))


def _is_co_forest_fast(p: Poset) -> bool:
    return all(popcount(c) <= 1 for c in p.upper_covers)


def canonical_form(p: Poset) -> tuple:
    """Deterministic isomorphism invariant that is complete (equal iff isomorphic)."""
    if _is_co_forest_fast(p):
        roots = [x for x in range(p.n) if p.upper_covers[x] == 0]
        return ("forest", tuple(sorted((_tree_code(p, r) for r in roots), reverse=True)))
    return ("poset", _canonical_matrix(p))


def _canonical_matrix(p: Poset) -> tuple:
    """Lexicographically least up-bitmask vector over all invariant-respecting relabelings."""
    inv = [(popcount(p.down[x]), popcount(p.up[x]), popcount(p.lower_covers[x]),
            popcount(p.upper_covers[x])) for x in range(p.n)]
    classes: dict[tuple, list[int]] = {}
    for x in range(p.n):
        classes.setdefault(inv[x], []).append(x)
    keys = sorted(classes)
    best = None
    slots = []
    for k in keys:
        slots.append(classes[k])
    for choice in itertools.product(*(itertools.permutations(c) for c in slots)):
        order = [x for block in choice for x in block]
        pos = {x: i for i, x in enumerate(order)}
        vec = tuple(mask_of(pos[y] for y in bits(p.up[x])) for x in order)
        if best is None or vec < best:
            best = vec
    return (tuple(keys), best or ())


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return p.n == q.n and canonical_form(p) == canonical_form(q)


def _poset_from_code(code: tuple) -> Poset:
    """Co-forest from a tuple of rooted-tree codes; root of each tree is its co-root."""
    up: list[int] = []

    def build(node: tuple, parent_up: int) -> None:
        idx = len(up)
        mine = parent_up | 1 << idx
        up.append(mine)
        for child in node:
            build(child, mine)

    for tree in code:
        build(tree, 0)
    return _from_up(up)


_TREES: dict[int, list[tuple]] = {}


def _rooted_trees(n: int) -> list[tuple]:
    """Canonical codes of unlabeled rooted trees with ``n`` nodes."""
    if n in _TREES:
        return _TREES[n]
    if n == 1:
        _TREES[1] = [()]
        return _TREES[1]
    out = [tuple(f) for f in _forests(n - 1, None)]
    out.sort(reverse=True)
    _TREES[n] = out
    return out


def _forests(size: int, bound: tuple | None) -> Iterator[list[tuple]]:
    """Non-increasing sequences of tree codes (each ``<= bound``) with total size ``size``."""
    if size == 0:
        yield []
        return
    for s in range(size, 0, -1):
        for t in _rooted_trees(s):
            if bound is not None and _code_key(t) > _code_key(bound):
                continue
            for rest in _forests(size - s, t):
                yield [t] + rest


def _code_size(code: tuple) -> int:
    return 1 + sum(_code_size(c) for c in code)


def _code_key(code: tuple) -> tuple:
    return (_code_size(code), code)


def enumerate_cotrees(max_size: int, cap: int = DEFAULT_ENUM_CAP, min_size: int = 1) -> Iterator[Poset]:
    """All co-trees with ``min_size..max_size`` points, one per isomorphism class."""
    if max_size > cap:
        raise CapExceeded(f"max_size {max_size} exceeds cap {cap}")
    for n in range(max(1, min_size), max_size + 1):
        for code in _rooted_trees(n):
            yield _poset_from_code((code,))


def enumerate_coforests(max_size: int, cap: int = DEFAULT_ENUM_CAP, min_size: int = 1) -> Iterator[Poset]:
    """All nonempty co-forests with at most ``max_size`` points, up to isomorphism."""
    if max_size > cap:
        raise CapExceeded(f"max_size {max_size} exceeds cap {cap}")
    for n in range(max(1, min_size), max_size + 1):
        for code in _rooted_trees(n + 1):
            yield _poset_from_code(code)


def enumerate_posets(max_size: int, cap: int = 7, max_upsets: int | None = None) -> Iterator[Poset]:
    """All posets with ``1..max_size`` points up to isomorphism.

    Every poset arises from a smaller one by adding a maximal point above some
    downset, so sizes are grown one point at a time and deduplicated by
    canonical form. With ``max_upsets`` only posets with at most that many
    upsets are kept (the count never decreases as points are added).
    """
    if max_size > cap:
        raise CapExceeded(f"max_size {max_size} exceeds cap {cap}")
    level = [EMPTY]
    for _ in range(max_size):
        seen = set()
        nxt = []
        for p in level:
            for d in _downsets(p):
                up = [p.up[x] | (1 << p.n if d >> x & 1 else 0) for x in range(p.n)] + [1 << p.n]
                q = _from_up(up)
                if max_upsets is not None and _count_upsets(q, max_upsets) > max_upsets:
                    continue
                key = canonical_form(q)
                if key not in seen:
                    seen.add(key)
                    nxt.append(q)
        nxt.sort(key=canonical_form)
        yield from nxt
        level = nxt


def _downsets(p: Poset) -> list[int]:
    return sorted(p.full & ~u for u in all_upsets(p))


def _count_upsets(p: Poset, limit: int) -> int:
    try:
        return len(all_upsets(p, cap=limit))
    except CapExceeded:
        return limit + 1


def random_cotree(size: int, seed: int) -> Poset:
    """Random recursive co-tree: point ``i`` is covered by a uniform earlier point."""
    if size < 1:
        raise PosetError("size must be >= 1")
    rng = random.Random(seed)
    up = [1]
    for i in range(1, size):
        parent = rng.randrange(i)
        up.append(up[parent] | 1 << i)
    return _from_up(up)


def random_coforest(size: int, seed: int) -> Poset:
    rng = random.Random(seed)
    up: list[int] = []
    for i in range(size):
        parent = rng.randrange(-1, i) if i else -1
        up.append((up[parent] if parent >= 0 else 0) | 1 << i)
    return _from_up(up)

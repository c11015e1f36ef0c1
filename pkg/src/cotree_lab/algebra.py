"""Finite bi-Heyting algebras given by operation tables.

An algebra is stored as its lattice order plus the four binary tables. Tables
are tuples of tuples indexed by element index. Upset algebras additionally
remember the poset and the upset bitmask behind every element.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .poset import (
    DEFAULT_UPSET_CAP,
    SCHEMA,
    CapExceeded,
    Poset,
    all_upsets,
    bits,
    canonical_form,
    components,
    from_leq,
    is_co_forest,
    is_co_tree,
    mask_of,
    popcount,
)

OPS = ("meet", "join", "imp", "coimp")
SIGNATURES = {
    "bi-heyting": ("meet", "join", "imp", "coimp"),
    "heyting": ("meet", "join", "imp"),
    "or-coimp": ("join", "coimp"),
}
DEFAULT_GEN_RANK_CAP = 12


class AlgebraError(ValueError):
    pass


Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class BiHeytingAlgebra:
    k: int
    leq: tuple[tuple[bool, ...], ...]
    meet: Table
    join: Table
    imp: Table
    coimp: Table
    bot: int
    top: int
    names: tuple[str, ...] = ()
    poset: Poset | None = None
    upsets: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(self.k)))

    # -- derived operations --------------------------------------------------
    def neg(self, a: int) -> int:
        return self.imp[a][self.bot]

    def coneg(self, a: int) -> int:
        return self.coimp[self.top][a]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def table(self, op: str) -> Table:
        return getattr(self, op)

    @cached_property
    def np_tables(self) -> dict[str, np.ndarray]:
        dtype = np.int16 if self.k < 2 ** 15 else np.int32
        return {op: np.asarray(self.table(op), dtype=dtype) for op in OPS}

    @property
    def elements(self) -> range:
        return range(self.k)

    @property
    def trivial(self) -> bool:
        return self.k == 1

    def element(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AlgebraError(f"unknown element {name!r}") from None

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        out = []
        for j in range(self.k):
            if j == self.bot:
                continue
            below = [a for a in range(self.k) if a != j and self.leq[a][j]]
            sup = self.bot
            for a in below:
                sup = self.join[sup][a]
            if sup != j:
                out.append(j)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "elements": list(self.names),
            "leq": [[self.names[a], self.names[b]] for a in range(self.k)
                    for b in range(self.k) if self.leq[a][b] and a != b],
            "tables": {op: [list(r) for r in self.table(op)] for op in OPS},
        }

    def __repr__(self) -> str:
        return f"BiHeytingAlgebra(k={self.k})"

    def __len__(self) -> int:
        return self.k


# -- construction -------------------------------------------------------------
def _lattice_tables(leq: Sequence[Sequence[bool]]) -> tuple[Table, Table, int, int]:
    k = len(leq)
    if k == 0:
        raise AlgebraError("empty carrier")
    for a in range(k):
        if not leq[a][a]:
            raise AlgebraError("order not reflexive")
        for b in range(k):
            if a != b and leq[a][b] and leq[b][a]:
                raise AlgebraError("order not antisymmetric")
            for c in range(k):
                if leq[a][b] and leq[b][c] and not leq[a][c]:
                    raise AlgebraError("order not transitive")

    def extreme(cands: list[int], lower: bool) -> int:
        for c in cands:
            if all((leq[d][c] if lower else leq[c][d]) for d in cands):
                return c
        raise AlgebraError("not a lattice")

    meet = [[0] * k for _ in range(k)]
    join = [[0] * k for _ in range(k)]
    for a in range(k):
        for b in range(a, k):
            lower = [c for c in range(k) if leq[c][a] and leq[c][b]]
            upper = [c for c in range(k) if leq[a][c] and leq[b][c]]
            if not lower or not upper:
                raise AlgebraError("not a lattice")
            meet[a][b] = meet[b][a] = extreme(lower, lower=True)
            join[a][b] = join[b][a] = extreme(upper, lower=False)
    bot = extreme(list(range(k)), lower=False)
    top = extreme(list(range(k)), lower=True)
    return tuple(map(tuple, meet)), tuple(map(tuple, join)), bot, top


def _residuals(leq, meet, join) -> tuple[Table, Table]:
    k = len(leq)
    imp = [[0] * k for _ in range(k)]
    coimp = [[0] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            cands = [c for c in range(k) if leq[meet[a][c]][b]]
            best = [c for c in cands if all(leq[d][c] for d in cands)]
            if not best:
                raise AlgebraError("implication does not exist")
            imp[a][b] = best[0]
            cands = [c for c in range(k) if leq[a][join[b][c]]]
            best = [c for c in cands if all(leq[c][d] for d in cands)]
            if not best:
                raise AlgebraError("co-implication does not exist")
            coimp[a][b] = best[0]
    return tuple(map(tuple, imp)), tuple(map(tuple, coimp))


def _check_distributive(meet, join) -> None:
    k = len(meet)
    for a, b, c in itertools.product(range(k), repeat=3):
        if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
            raise AlgebraError("lattice is not distributive")


def from_order(leq: Sequence[Sequence[bool]], names: Sequence[str] | None = None) -> BiHeytingAlgebra:
    """Bi-Heyting algebra of a finite distributive lattice given by its order."""
    leq = tuple(tuple(bool(x) for x in row) for row in leq)
    meet, join, bot, top = _lattice_tables(leq)
    _check_distributive(meet, join)
    imp, coimp = _residuals(leq, meet, join)
    return BiHeytingAlgebra(len(leq), leq, meet, join, imp, coimp, bot, top,
                            tuple(names) if names else ())


def from_tables(leq, meet=None, join=None, imp=None, coimp=None, names=None) -> BiHeytingAlgebra:
    """Rebuild from the order and check any supplied tables against the recomputed ones."""
    alg = from_order(leq, names)
    for op, given in zip(OPS, (meet, join, imp, coimp)):
        if given is not None and tuple(map(tuple, given)) != alg.table(op):
            raise AlgebraError(f"supplied {op} table disagrees with the order")
    return alg


def from_json(data: dict | str) -> BiHeytingAlgebra:
    if isinstance(data, str):
        data = json.loads(data)
    names = [str(x) for x in data["elements"]]
    pos = {n: i for i, n in enumerate(names)}
    k = len(names)
    leq = [[a == b for b in range(k)] for a in range(k)]
    for a, b in data.get("leq", []):
        leq[pos[str(a)]][pos[str(b)]] = True
    # accept a generating relation: close transitively
    for m in range(k):
        for a in range(k):
            if leq[a][m]:
                for b in range(k):
                    if leq[m][b]:
                        leq[a][b] = True
    tables = data.get("tables", {})
    return from_tables(leq, *(tables.get(op) for op in OPS), names=names)


def upset_algebra(p: Poset, cap: int = DEFAULT_UPSET_CAP) -> BiHeytingAlgebra:
    """All upsets of ``p`` with U->V = P - down(U-V) and U<=V = up(U-V)."""
    ups = all_upsets(p, cap)
    idx = {u: i for i, u in enumerate(ups)}
    k = len(ups)
    full = p.full
    leq = tuple(tuple(u & ~v == 0 for v in ups) for u in ups)
    meet = tuple(tuple(idx[u & v] for v in ups) for u in ups)
    join = tuple(tuple(idx[u | v] for v in ups) for u in ups)
    imp = tuple(tuple(idx[full & ~p.down_closure(u & ~v)] for v in ups) for u in ups)
    coimp = tuple(tuple(idx[p.up_closure(u & ~v)] for v in ups) for u in ups)
    names = tuple("{" + ",".join(p.labels[x] for x in bits(u)) + "}" for u in ups)
    return BiHeytingAlgebra(k, leq, meet, join, imp, coimp, idx[0], idx[full], names, p, tuple(ups))


def chain_algebra(k: int) -> BiHeytingAlgebra:
    return from_order([[a <= b for b in range(k)] for a in range(k)])


def boolean_algebra(n_atoms: int) -> BiHeytingAlgebra:
    k = 1 << n_atoms
    return from_order([[a & ~b == 0 for b in range(k)] for a in range(k)])


def product(a: BiHeytingAlgebra, b: BiHeytingAlgebra) -> BiHeytingAlgebra:
    pairs = [(x, y) for x in range(a.k) for y in range(b.k)]
    idx = {pr: i for i, pr in enumerate(pairs)}

    def tab(op):
        ta, tb = a.table(op), b.table(op)
        return tuple(tuple(idx[(ta[x][u], tb[y][v])] for (u, v) in pairs) for (x, y) in pairs)

    leq = tuple(tuple(a.leq[x][u] and b.leq[y][v] for (u, v) in pairs) for (x, y) in pairs)
    names = tuple(f"({a.names[x]},{b.names[y]})" for x, y in pairs)
    return BiHeytingAlgebra(len(pairs), leq, tab("meet"), tab("join"), tab("imp"), tab("coimp"),
                            idx[(a.bot, b.bot)], idx[(a.top, b.top)], names)


def subalgebra(a: BiHeytingAlgebra, carrier: Sequence[int], recompute: bool = False) -> BiHeytingAlgebra:
    """Algebra on a subset of ``a``'s carrier, ordered by ``carrier``.

    With ``recompute`` the residuals are recomputed from the induced lattice,
    otherwise the subset must be closed under all four tables.
    """
    carrier = list(carrier)
    pos = {e: i for i, e in enumerate(carrier)}
    leq = tuple(tuple(a.leq[x][y] for y in carrier) for x in carrier)
    names = tuple(a.names[x] for x in carrier)
    if recompute:
        alg = from_order(leq, names)
    else:
        try:
            tabs = [tuple(tuple(pos[a.table(op)[x][y]] for y in carrier) for x in carrier) for op in OPS]
        except KeyError:
            raise AlgebraError("carrier is not closed under the operations") from None
        alg = BiHeytingAlgebra(len(carrier), leq, *tabs, pos[a.bot], pos[a.top], names)
    return alg


# -- maps ----------------------------------------------------------------------
@dataclass(frozen=True)
class AlgebraMap:
    source: BiHeytingAlgebra
    target: BiHeytingAlgebra
    map: tuple[int, ...]
    preserved: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if len(self.map) != self.source.k:
            raise AlgebraError("map is not total")
        for flag in self.preserved:
            if not preserves(self.source, self.target, self.map, flag):
                raise AlgebraError(f"map does not preserve {flag}")

    def __call__(self, a: int) -> int:
        return self.map[a]

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def surjective(self) -> bool:
        return set(self.map) == set(range(self.target.k))

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "map": list(self.map), "preserved": sorted(self.preserved)}


def preserves(src: BiHeytingAlgebra, tgt: BiHeytingAlgebra, h: Sequence[int], flag: str) -> bool:
    if flag == "0":
        return h[src.bot] == tgt.bot
    if flag == "1":
        return h[src.top] == tgt.top
    ts, tt = src.table(flag), tgt.table(flag)
    return all(h[ts[a][b]] == tt[h[a]][h[b]] for a in range(src.k) for b in range(src.k))


ALL_FLAGS = frozenset({"meet", "join", "imp", "coimp", "0", "1"})


def is_isomorphism(src: BiHeytingAlgebra, tgt: BiHeytingAlgebra, h: Sequence[int]) -> bool:
    return (src.k == tgt.k and len(set(h)) == src.k
            and all(preserves(src, tgt, h, f) for f in ALL_FLAGS))


# -- duality -------------------------------------------------------------------
def dual_poset(a: BiHeytingAlgebra) -> tuple[Poset, AlgebraMap]:
    """Join-irreducibles ordered by reverse lattice order, with the iso onto its upset algebra."""
    js = a.join_irreducibles
    matrix = [[a.leq[k][j] for k in js] for j in js]
    p = from_leq(matrix, [a.names[j] for j in js])
    up_alg = upset_algebra(p)
    pos = {u: i for i, u in enumerate(up_alg.upsets)}
    h = tuple(pos[mask_of(i for i, j in enumerate(js) if a.leq[j][x])] for x in range(a.k))
    return p, AlgebraMap(a, up_alg, h, ALL_FLAGS)


def is_isomorphic(a: BiHeytingAlgebra, b: BiHeytingAlgebra) -> bool:
    if a.k != b.k:
        return False
    return canonical_form(dual_of(a)) == canonical_form(dual_of(b))


def dual_of(a: BiHeytingAlgebra) -> Poset:
    if a.poset is not None:
        return a.poset
    js = a.join_irreducibles
    return from_leq([[a.leq[k][j] for k in js] for j in js], [a.names[j] for j in js])


# -- SI and bi-Godel -------------------------------------------------------------
def is_SI_lattice(a: BiHeytingAlgebra) -> bool:
    """Nontrivial with bottom meet-irreducible."""
    if a.trivial:
        return False
    return all(a.meet[x][y] != a.bot for x in range(a.k) for y in range(a.k)
               if x != a.bot and y != a.bot)


def is_SI(a: BiHeytingAlgebra) -> bool:
    verdict = is_SI_lattice(a)
    dual_verdict = not a.trivial and is_co_tree(dual_of(a)) if _gd_valid(a) else None
    if dual_verdict is not None and dual_verdict != verdict:
        raise AssertionError("SI characterizations disagree")
    return verdict


def _gd_valid(a: BiHeytingAlgebra) -> bool:
    """(p->q) | (q->p) evaluated over all pairs."""
    return all(a.join[a.imp[x][y]][a.imp[y][x]] == a.top for x in range(a.k) for y in range(a.k))


def is_bi_godel(a: BiHeytingAlgebra) -> bool:
    verdict = is_co_forest(dual_of(a))
    if verdict != _gd_valid(a):
        raise AssertionError("bi-Godel characterizations disagree")
    return verdict


# -- discriminator -------------------------------------------------------------
def plus_term(a: BiHeytingAlgebra, x: int, y: int) -> int:
    """not((x <= y) | (y <= x)) with <= the co-implication."""
    return a.neg(a.join[a.coimp[x][y]][a.coimp[y][x]])


def discriminator_eval(a: BiHeytingAlgebra, x: int, y: int, z: int) -> int:
    s = plus_term(a, x, y)
    return a.join[a.meet[s][z]][a.meet[a.neg(s)][x]]


# -- subalgebras and generation -------------------------------------------------
def generated_subalgebra(a: BiHeytingAlgebra, gens: Iterable[int], sig: str = "bi-heyting") -> list[int]:
    """Least subset containing ``gens`` (and the constants) closed under ``sig``; sorted."""
    try:
        ops = [a.table(op) for op in SIGNATURES[sig]]
    except KeyError:
        raise AlgebraError(f"unknown signature {sig!r}") from None
    seen = set(gens)
    if any(not 0 <= g < a.k for g in seen):
        raise AlgebraError("generator outside the carrier")
    if sig != "or-coimp":
        seen |= {a.bot, a.top}
    elif seen:
        g = next(iter(seen))
        seen.add(a.coimp[g][g])
    work = list(seen)
    members = list(seen)
    while work:
        x = work.pop()
        for y in list(members):
            for t in ops:
                for z in (t[x][y], t[y][x]):
                    if z not in seen:
                        seen.add(z)
                        members.append(z)
                        work.append(z)
    return sorted(seen)


def inclusion(a: BiHeytingAlgebra, carrier: Sequence[int], sig: str = "bi-heyting") -> AlgebraMap:
    sub = subalgebra(a, carrier, recompute=(sig != "bi-heyting"))
    flags = {"meet", "join", "imp", "0", "1"} if sig != "or-coimp" else {"join"}
    if sig == "bi-heyting":
        flags |= {"coimp"}
    return AlgebraMap(sub, a, tuple(carrier), frozenset(flags))


def generates(a: BiHeytingAlgebra, gens: Iterable[int]) -> bool:
    return len(generated_subalgebra(a, gens)) == a.k


def _upset_closure_masks(p: Poset, gens: Iterable[int]) -> int:
    """Size of the bi-Heyting subalgebra of Up(p) generated by upset masks ``gens``."""
    full = p.full
    seen = {0, full, *gens}
    members = list(seen)
    work = list(seen)
    while work:
        u = work.pop()
        for v in list(members):
            for w in (u & v, u | v, full & ~p.down_closure(u & ~v), full & ~p.down_closure(v & ~u),
                      p.up_closure(u & ~v), p.up_closure(v & ~u)):
                if w not in seen:
                    seen.add(w)
                    members.append(w)
                    work.append(w)
    return len(seen)


def necessary_separations(p: Poset) -> list[int]:
    """Proper bi-bisimulations known a priori, each as a bitmask over pairs to separate.

    Returns pair-lists encoded as lists of (x, y). A generating set must contain,
    for each listed equivalence, an upset splitting one of its pairs.
    """
    from .bisim import known_bisimulation_pairs  # local import: bisim depends on algebra

    return known_bisimulation_pairs(p)


def gen_rank(a: BiHeytingAlgebra, cap: int = DEFAULT_GEN_RANK_CAP) -> int:
    """Least m such that some m elements generate ``a`` as a bi-Heyting algebra."""
    if a.k > cap:
        raise CapExceeded(f"algebra has {a.k} elements, cap is {cap}")
    if a.poset is not None:
        return _gen_rank_upsets(a)
    for m in range(a.k + 1):
        for combo in itertools.combinations(range(a.k), m):
            if generates(a, combo):
                return m
    raise AssertionError("unreachable: the whole carrier generates")


def _gen_rank_upsets(a: BiHeytingAlgebra) -> int:
    p = a.poset
    ups = a.upsets
    required = necessary_separations(p)
    # breaks[i]: which required equivalences element i splits
    breaks = []
    for u in ups:
        m = 0
        for r, pairs in enumerate(required):
            if any((u >> x & 1) != (u >> y & 1) for x, y in pairs):
                m |= 1 << r
        breaks.append(m)
    need = (1 << len(required)) - 1
    best_single = max((popcount(b) for b in breaks), default=0)
    for m in range(a.k + 1):
        if _search_rank(ups, breaks, need, m, best_single, p, a.k):
            return m
    raise AssertionError("unreachable: the whole carrier generates")


def _search_rank(ups, breaks, need, m, best_single, p, k) -> bool:
    chosen: list[int] = []

    def rec(start: int, covered: int) -> bool:
        if len(chosen) == m:
            return covered == need and _upset_closure_masks(p, [ups[i] for i in chosen]) == k
        missing = popcount(need & ~covered)
        if missing > (m - len(chosen)) * best_single:
            return False
        for i in range(start, len(ups) - (m - len(chosen)) + 1):
            chosen.append(i)
            if rec(i + 1, covered | breaks[i]):
                return True
            chosen.pop()
        return False

    return rec(0, 0)


# -- homomorphic images ---------------------------------------------------------
def hom_images(a: BiHeytingAlgebra) -> list[tuple[BiHeytingAlgebra, AlgebraMap]]:
    """One quotient per union of dual components (trivial image included)."""
    p, iso = dual_poset(a)
    comps = components(p)
    up_alg = iso.target
    out = []
    for r in range(len(comps) + 1):
        for combo in itertools.combinations(comps, r):
            keep = 0
            for c in combo:
                keep |= c
            q = p.restrict(keep)
            q_alg = upset_algebra(q[0])
            pos = {u: i for i, u in enumerate(q_alg.upsets)}
            proj = tuple(pos[_compress(up_alg.upsets[iso.map[x]] & keep, q[1])] for x in range(a.k))
            out.append((q_alg, AlgebraMap(a, q_alg, proj, ALL_FLAGS)))
    return out


def si_quotients(a: BiHeytingAlgebra) -> list[tuple[BiHeytingAlgebra, AlgebraMap, tuple[int, ...]]]:
    """Quotients by a single dual component, with a section of each projection.

    For a bi-Godel algebra these are its SI homomorphic images, and ``a`` embeds
    into their product. The section maps a quotient element to the element of
    ``a`` that agrees with it on the component and is empty elsewhere.
    """
    p, iso = dual_poset(a)
    up_alg = iso.target
    inverse = {h: x for x, h in enumerate(iso.map)}
    up_pos = {u: i for i, u in enumerate(up_alg.upsets)}
    out = []
    for comp in components(p):
        q, keep = p.restrict(comp)
        q_alg = upset_algebra(q)
        pos = {u: i for i, u in enumerate(q_alg.upsets)}
        proj = tuple(pos[_compress(up_alg.upsets[iso.map[x]] & comp, keep)] for x in range(a.k))
        lift = tuple(inverse[up_pos[mask_of(keep[i] for i in bits(u))]] for u in q_alg.upsets)
        out.append((q_alg, AlgebraMap(a, q_alg, proj, ALL_FLAGS), lift))
    return out


def si_images(a: BiHeytingAlgebra) -> list[tuple[BiHeytingAlgebra, AlgebraMap]]:
    return [(q, proj) for q, proj, _ in si_quotients(a)]


def _compress(mask: int, keep: list[int]) -> int:
    return mask_of(i for i, old in enumerate(keep) if mask >> old & 1)


# -- filtration ---------------------------------------------------------------
def coimp_by_meet(a: BiHeytingAlgebra, carrier: Sequence[int], x: int, y: int) -> int:
    """Meet over ``carrier`` of every c with x <= c | y, computed in ``a``."""
    out = a.top
    for c in carrier:
        if a.leq[x][a.join[c][y]]:
            out = a.meet[out][c]
    return out


def filtration(b: BiHeytingAlgebra, phi, v: dict) -> tuple[BiHeytingAlgebra, dict, list[int]]:
    """Finite Heyting subalgebra generated by the values of subformulas, co-implication recomputed.

    Returns the new algebra, the valuation re-indexed into it, and the carrier
    as element indices of ``b``.
    """
    from .formula import eval_formula, subformulas

    if eval_formula(b, phi, v) == b.top:
        raise AlgebraError("valuation does not refute the formula")
    theta = {eval_formula(b, s, v) for s in subformulas(phi)}
    carrier = generated_subalgebra(b, theta, "heyting")
    pos = {e: i for i, e in enumerate(carrier)}
    k = len(carrier)
    leq = tuple(tuple(b.leq[x][y] for y in carrier) for x in carrier)
    meet = tuple(tuple(pos[b.meet[x][y]] for y in carrier) for x in carrier)
    join = tuple(tuple(pos[b.join[x][y]] for y in carrier) for x in carrier)
    imp = tuple(tuple(pos[b.imp[x][y]] for y in carrier) for x in carrier)
    coimp = tuple(tuple(pos[coimp_by_meet(b, carrier, x, y)] for y in carrier) for x in carrier)
    out = BiHeytingAlgebra(k, leq, meet, join, imp, coimp, pos[b.bot], pos[b.top],
                           tuple(b.names[x] for x in carrier))
    return out, {name: pos[val] for name, val in v.items()}, carrier


def algebra_to_poset_order(a: BiHeytingAlgebra) -> Poset:
    return from_leq(a.leq, a.names)


def check_bi_heyting(a: BiHeytingAlgebra) -> list[str]:
    """Residuation and distributivity failures, as messages (empty when valid)."""
    errs = []
    for x, y in itertools.product(range(a.k), repeat=2):
        for c in range(a.k):
            if a.leq[c][a.imp[x][y]] != a.leq[a.meet[x][c]][y]:
                errs.append(f"imp residuation fails at {x},{y},{c}")
            if a.leq[a.coimp[x][y]][c] != a.leq[x][a.join[y][c]]:
                errs.append(f"coimp residuation fails at {x},{y},{c}")
    try:
        _check_distributive(a.meet, a.join)
    except AlgebraError as e:
        errs.append(str(e))
    return errs

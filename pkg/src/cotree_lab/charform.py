"""Stable canonical, Jankov and subframe formulas, with two-sided checks of their refutation criteria."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    AlgebraMap,
    BiHeytingAlgebra,
    dual_poset,
    hom_images,
    is_bi_godel,
    is_SI,
    upset_algebra,
)
from .formula import (
    BOT,
    DEFAULT_BUDGET,
    TOP,
    Coimp,
    Formula,
    Iff,
    Neg,
    Coneg,
    Imp,
    Var,
    Verdict,
    conj,
    eval_formula,
    is_valid,
    subformulas,
    sweep,
    variables,
)
from .morphisms import PosetMap, find_order_embedding, find_surjective_bi_p_morphism
from .poset import CapExceeded, Poset, bits, components, enumerate_cotrees, mask_of

DEFAULT_PATTERN_CAP = 5


class CharformError(ValueError):
    pass


@dataclass(frozen=True)
class StableDomain:
    size: int
    pairs: frozenset

    def __post_init__(self):
        for a, b in self.pairs:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise CharformError(f"pair ({a}, {b}) outside the algebra")

    @classmethod
    def full(cls, a: BiHeytingAlgebra) -> StableDomain:
        return cls(a.k, frozenset(itertools.product(range(a.k), repeat=2)))

    @classmethod
    def of(cls, a: BiHeytingAlgebra, pairs: Iterable[tuple[int, int]]) -> StableDomain:
        return cls(a.k, frozenset(tuple(p) for p in pairs))


def _domain(a: BiHeytingAlgebra, d) -> StableDomain:
    if isinstance(d, StableDomain):
        if d.size != a.k:
            raise CharformError("domain belongs to another algebra")
        return d
    return StableDomain.of(a, d)


def _require_si_godel(a: BiHeytingAlgebra) -> None:
    if not is_bi_godel(a) or not is_SI(a):
        raise CharformError("expected a finite SI bi-Godel algebra")


def pvar(i: int) -> Var:
    return Var(f"x{i}")


def _pairs(k: int):
    return itertools.product(range(k), repeat=2)


def _consequent(a: BiHeytingAlgebra) -> Formula:
    kills = [Coimp(pvar(x), pvar(y)) for x, y in _pairs(a.k) if not a.leq[x][y]]
    return Neg(conj(kills))


def gamma(a: BiHeytingAlgebra, d) -> Formula:
    """Stable canonical formula: Heyting structure in full, co-implication only on ``d``."""
    _require_si_godel(a)
    dom = _domain(a, d)
    p = pvar
    parts = [Iff(p(a.join[x][y]), p(x) | p(y)) for x, y in _pairs(a.k)]
    parts += [Iff(p(a.meet[x][y]), p(x) & p(y)) for x, y in _pairs(a.k)]
    parts += [Iff(p(a.imp[x][y]), Imp(p(x), p(y))) for x, y in _pairs(a.k)]
    parts += [Iff(p(a.coimp[x][y]), Coimp(p(x), p(y))) for x, y in sorted(dom.pairs)]
    parts += [Iff(p(a.bot), BOT), Iff(p(a.top), TOP)]
    return Imp(Neg(Coneg(conj(parts))), _consequent(a))


def jankov(a: BiHeytingAlgebra) -> Formula:
    return gamma(a, StableDomain.full(a))


def beta(a: BiHeytingAlgebra) -> Formula:
    """Subframe formula: only the join and co-implication structure is described."""
    _require_si_godel(a)
    p = pvar
    parts = [Iff(p(a.join[x][y]), p(x) | p(y)) for x, y in _pairs(a.k)]
    parts += [Iff(p(a.coimp[x][y]), Coimp(p(x), p(y))) for x, y in _pairs(a.k)]
    return Imp(Neg(Coneg(conj(parts))), _consequent(a))


# -- embeddings with a stable domain -------------------------------------------------
def sdc_embedding_search(a: BiHeytingAlgebra, d, c: BiHeytingAlgebra) -> AlgebraMap | None:
    """First injective Heyting homomorphism a -> c preserving co-implication on ``d``."""
    dom = _domain(a, d)
    if a.k > c.k:
        return None
    h = [-1] * a.k
    # constraints become checkable once their largest element index is assigned
    checks: list[list[tuple[str, int, int]]] = [[] for _ in range(a.k)]
    for x, y in _pairs(a.k):
        for op in ("meet", "join", "imp"):
            z = a.table(op)[x][y]
            checks[max(x, y, z)].append((op, x, y))
    for x, y in dom.pairs:
        z = a.coimp[x][y]
        checks[max(x, y, z)].append(("coimp", x, y))
    used = set()

    def rec(i: int) -> bool:
        if i == a.k:
            return True
        for y in range(c.k):
            if y in used:
                continue
            if i == a.bot and y != c.bot or i == a.top and y != c.top:
                continue
            h[i] = y
            if all(h[a.table(op)[u][v]] == c.table(op)[h[u]][h[v]] for op, u, v in checks[i]):
                used.add(y)
                if rec(i + 1):
                    return True
                used.discard(y)
            h[i] = -1
        return False

    if not rec(0):
        return None
    flags = {"meet", "join", "imp", "0", "1"}
    return AlgebraMap(a, c, tuple(h), frozenset(flags))


# -- two-sided reports --------------------------------------------------------------
@dataclass(frozen=True)
class EquivalenceReport:
    name: str
    refuted: bool
    structural: bool
    countervaluation: dict | None = None
    witness: object = None
    details: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return self.refuted == self.structural

    def to_json(self) -> dict:
        out = {"check": self.name, "semantic_refutation": self.refuted,
               "structural_witness": self.structural, "agree": self.agree}
        if self.countervaluation is not None:
            out["countervaluation"] = self.countervaluation
        if self.witness is not None:
            out["witness"] = self.witness.to_json() if hasattr(self.witness, "to_json") else self.witness
        out.update(self.details)
        return out


def _refutes(b: BiHeytingAlgebra, f: Formula, budget: int) -> Verdict:
    return is_valid(b, f, budget)


def check_stable_refutation(b: BiHeytingAlgebra, a: BiHeytingAlgebra, d,
                            budget: int = DEFAULT_BUDGET) -> EquivalenceReport:
    """B refutes gamma(A, D) iff A embeds with the stable domain condition into an SI image of B."""
    verdict = _refutes(b, gamma(a, d), budget)
    witness = None
    for c, _proj in hom_images(b):
        if c.k > 1 and is_SI(c):
            witness = sdc_embedding_search(a, d, c)
            if witness is not None:
                break
    return EquivalenceReport("stable", not verdict.valid, witness is not None,
                             verdict.countervaluation, witness)


def check_jankov_refutation(b: BiHeytingAlgebra, a: BiHeytingAlgebra,
                            budget: int = DEFAULT_BUDGET) -> EquivalenceReport:
    """B refutes J(A) iff some component of B's dual maps onto A's dual."""
    verdict = _refutes(b, jankov(a), budget)
    pb, _ = dual_poset(b)
    pa, _ = dual_poset(a)
    witness = None
    for comp in components(pb):
        sub, _keep = pb.restrict(comp)
        witness = find_surjective_bi_p_morphism(sub, pa)
        if witness is not None:
            break
    return EquivalenceReport("jankov", not verdict.valid, witness is not None,
                             verdict.countervaluation, witness)


def check_subframe_refutation(b: BiHeytingAlgebra, a: BiHeytingAlgebra,
                              budget: int = DEFAULT_BUDGET) -> EquivalenceReport:
    """B refutes beta(A) iff A's dual order-embeds into B's dual."""
    verdict = _refutes(b, beta(a), budget)
    pb, _ = dual_poset(b)
    pa, _ = dual_poset(a)
    witness = find_order_embedding(pa, pb)
    return EquivalenceReport("subframe", not verdict.valid, witness is not None,
                             verdict.countervaluation, witness)


# -- refutation patterns --------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class RefutationPattern:
    poset: Poset
    algebra: BiHeytingAlgebra
    domain: StableDomain
    valuation: dict

    def to_json(self) -> dict:
        names = self.algebra.names
        return {"dual": self.poset.to_json(),
                "domain": [[names[x], names[y]] for x, y in sorted(self.domain.pairs)],
                "valuation": {k: names[v] for k, v in self.valuation.items()}}


def _automorphisms(p: Poset) -> list[tuple[int, ...]]:
    out = []
    sig = [(bin(p.up[x]).count("1"), bin(p.down[x]).count("1")) for x in range(p.n)]
    for perm in itertools.permutations(range(p.n)):
        if any(sig[x] != sig[perm[x]] for x in range(p.n)):
            continue
        if all(p.leq(x, y) == p.leq(perm[x], perm[y]) for x in range(p.n) for y in range(p.n)):
            out.append(perm)
    return out


def refutation_patterns(phi: Formula, size_cap: int, max_cap: int = DEFAULT_PATTERN_CAP) -> list[RefutationPattern]:
    """Every (A, D) with dual a co-tree up to ``size_cap`` points refuting ``phi``, up to isomorphism.

    For each refuting valuation v, D collects the pairs (a, b) of values of
    subformulas whose co-implication is again such a value.
    """
    if size_cap > max_cap:
        raise CapExceeded(f"size cap {size_cap} exceeds {max_cap}")
    order = variables(phi)
    subs = subformulas(phi)
    out: list[RefutationPattern] = []
    for p in enumerate_cotrees(size_cap):
        alg = upset_algebra(p)
        pos = {u: i for i, u in enumerate(alg.upsets)}
        autos = [tuple(pos[mask_of(perm[x] for x in bits(u))] for u in alg.upsets)
                 for perm in _automorphisms(p)]
        seen: set = set()
        for start, cols, vals in sweep(alg, [phi, *subs], order):
            for i in np.nonzero(vals[0] != alg.top)[0]:
                theta = {int(arr[i]) for arr in vals[1:]}
                dom = frozenset((x, y) for x in theta for y in theta if alg.coimp[x][y] in theta)
                key = min(tuple(sorted((s[x], s[y]) for x, y in dom)) for s in autos)
                if key in seen:
                    continue
                seen.add(key)
                v = {name: int(cols[j][i]) for j, name in enumerate(order)}
                if eval_formula(alg, phi, v) == alg.top:
                    raise AssertionError("pattern valuation does not refute")
                out.append(RefutationPattern(p, alg, StableDomain(alg.k, dom), v))
    return out


def axiomatize_bounded(phi: Formula, size_cap: int, max_cap: int = DEFAULT_PATTERN_CAP) -> Formula:
    """Conjunction of the stable canonical formulas of all refutation patterns up to the cap."""
    patterns = refutation_patterns(phi, size_cap, max_cap)
    if not patterns:
        raise CharformError(f"no refutation on co-trees up to {size_cap} points")
    return conj([gamma(pt.algebra, pt.domain) for pt in patterns])

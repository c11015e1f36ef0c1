"""Verification batteries: each suite compares two independent oracles over a finite family."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import algebra as alg
from .bisim import (
    coloring_theorem_check,
    comb_coloring,
    depth_bound_check,
    generates_upsets,
)
from .charform import (
    StableDomain,
    beta,
    check_jankov_refutation,
    check_stable_refutation,
    check_subframe_refutation,
    jankov,
)
from .formula import (
    BiHeytingAlgebra,
    Var,
    eval_formula,
    inconsistency_lemma_check,
    is_valid,
    random_formula,
    subformulas,
    variables,
)
from .morphisms import (
    antichain_matrix,
    comb_quotient,
    find_order_embedding,
    find_surjective_bi_p_morphism,
)
from .poset import (
    Poset,
    all_upsets,
    bits,
    canonical_form,
    depth,
    enumerate_coforests,
    enumerate_cotrees,
    enumerate_posets,
    from_leq,
    is_co_tree,
    make_chain,
    make_cofork,
    make_comb,
    make_hodkinson,
    width,
)


@dataclass
class RunConfig:
    seed: int = 0
    budget: int = 20_000_000
    output: str = "json"
    duality_forest_size: int = 6
    duality_algebra_size: int = 8
    identity_poset_size: int = 6
    si_size: int = 7
    discriminator_size: int = 5
    max_source: int = 4
    max_target: int = 5
    stable_instances: int = 50
    stable_source_elements: int = 5
    stable_target_elements: int = 7
    depth_width_size: int = 8
    depth_width_n: int = 4
    comb_size: int = 8
    comb_n: int = 3
    hodkinson_max: int = 2
    comb_generation_n: int = 5
    coloring_n: int = 3
    depth_bound_size: int = 8
    gen_rank_cap: int = 1024
    inconsistency_instances: int = 200
    model_cap: int = 5
    filtration_instances: int = 100
    filtration_elements: int = 8

    def __post_init__(self):
        for name, value in asdict(self).items():
            if isinstance(value, int) and name != "seed" and value <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output not in ("json", "text"):
            raise ValueError("output must be json or text")


@dataclass
class VerificationReport:
    suite: str
    instances: int = 0
    discrepancies: list = field(default_factory=list)
    wall_time: float = 0.0
    partial: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.discrepancies and not self.partial

    def to_json(self, timing: bool = False) -> dict:
        out = {"schema": "cotree-lab/1", "suite": self.suite, "instances": self.instances,
               "discrepancies": self.discrepancies, "partial": self.partial, "ok": self.ok}
        if self.notes:
            out["notes"] = self.notes
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


SUITES: dict[str, Callable[[RunConfig], VerificationReport]] = {}


def suite(name: str):
    def register(fn):
        def run(cfg: RunConfig) -> VerificationReport:
            report = VerificationReport(name)
            start = time.perf_counter()
            fn(cfg, report)
            report.wall_time = time.perf_counter() - start
            return report

        run.__doc__ = fn.__doc__
        SUITES[name] = run
        return run

    return register


def verify_suite(name: str, cfg: RunConfig | None = None) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](cfg or RunConfig())


def _poset_json(p: Poset) -> dict:
    return {"elements": list(p.labels), "covers": [[p.labels[x], p.labels[y]] for x, y in p.covers()]}


def scrambled(a: BiHeytingAlgebra, rng: random.Random) -> BiHeytingAlgebra:
    """The same lattice rebuilt from a shuffled order matrix, forgetting where it came from."""
    perm = list(range(a.k))
    rng.shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    leq = [[a.leq[inv[i]][inv[j]] for j in range(a.k)] for i in range(a.k)]
    return alg.from_order(leq)


# -- suites -----------------------------------------------------------------------------
@suite("duality")
def _duality(cfg: RunConfig, rep: VerificationReport) -> None:
    """Dual poset and upset algebra compose to isomorphisms in both directions."""
    for p in enumerate_coforests(cfg.duality_forest_size):
        a = alg.upset_algebra(p)
        q, iso = alg.dual_poset(a)
        rep.instances += 1
        if canonical_form(q) != canonical_form(p) or not alg.is_isomorphism(a, iso.target, iso.map):
            rep.discrepancies.append({"poset": _poset_json(p)})
    rng = random.Random(cfg.seed)
    for p in enumerate_posets(cfg.duality_algebra_size - 1, cap=cfg.duality_algebra_size,
                              max_upsets=cfg.duality_algebra_size):
        a = scrambled(alg.upset_algebra(p), rng)
        q, iso = alg.dual_poset(a)
        rep.instances += 1
        if not alg.is_isomorphism(a, iso.target, iso.map) or canonical_form(q) != canonical_form(p):
            rep.discrepancies.append({"algebra_of": _poset_json(p)})


def identity_failures(a: BiHeytingAlgebra) -> list[str]:
    """Failures of the basic bi-Heyting identities, each recomputed by brute force."""
    out = []
    k = a.k
    for x, y in itertools.product(range(k), repeat=2):
        sup = a.bot
        for d in range(k):
            if a.leq[a.meet[x][d]][y]:
                sup = a.join[sup][d]
        inf = a.top
        for d in range(k):
            if a.leq[x][a.join[d][y]]:
                inf = a.meet[inf][d]
        checks = [
            ("imp is the largest residual", a.imp[x][y] == sup),
            ("imp is top iff below", (a.imp[x][y] == a.top) == a.leq[x][y]),
            ("coimp is the least co-residual", a.coimp[x][y] == inf),
            ("coimp is bottom iff below", (a.coimp[x][y] == a.bot) == a.leq[x][y]),
        ]
        out += [f"{name} at ({x},{y})" for name, ok in checks if not ok]
    for x in range(k):
        checks = [
            ("negation is top iff bottom", (a.neg(x) == a.top) == (x == a.bot)),
            ("a meets its negation in bottom", a.meet[x][a.neg(x)] == a.bot),
            ("co-negation is bottom iff top", (a.coneg(x) == a.bot) == (x == a.top)),
            ("a joins its co-negation in top", a.join[x][a.coneg(x)] == a.top),
        ]
        out += [f"{name} at {x}" for name, ok in checks if not ok]
    return out


@suite("identities")
def _identities(cfg: RunConfig, rep: VerificationReport) -> None:
    """Bi-Heyting identities on upset algebras, and the set form of not-co-not."""
    for p in enumerate_posets(cfg.identity_poset_size, cap=cfg.identity_poset_size):
        a = alg.upset_algebra(p)
        rep.instances += 1
        fails = identity_failures(a)
        for i, u in enumerate(a.upsets):
            expected = sum(1 << x for x in range(p.n) if p.down_closure(p.up[x]) & ~u == 0)
            if a.upsets[a.neg(a.coneg(i))] != expected:
                fails.append(f"not-co-not of {a.names[i]}")
        if fails:
            rep.discrepancies.append({"poset": _poset_json(p), "failures": fails[:5]})


@suite("si")
def _si(cfg: RunConfig, rep: VerificationReport) -> None:
    """Bottom meet-irreducible iff the dual is a co-tree."""
    for p in enumerate_coforests(cfg.si_size):
        a = alg.upset_algebra(p)
        rep.instances += 1
        if alg.is_SI_lattice(a) != is_co_tree(p) or alg.is_SI(a) != is_co_tree(p):
            rep.discrepancies.append({"poset": _poset_json(p)})


@suite("discriminator")
def _discriminator(cfg: RunConfig, rep: VerificationReport) -> None:
    """On SI algebras the ternary term picks c when a = b and a otherwise."""
    for p in enumerate_cotrees(cfg.discriminator_size):
        a = alg.upset_algebra(p)
        for x, y in itertools.product(range(a.k), repeat=2):
            want_plus = a.top if x == y else a.bot
            if alg.plus_term(a, x, y) != want_plus:
                rep.discrepancies.append({"poset": _poset_json(p), "plus": [x, y]})
            for z in range(a.k):
                rep.instances += 1
                if alg.discriminator_eval(a, x, y, z) != (z if x == y else x):
                    rep.discrepancies.append({"poset": _poset_json(p), "triple": [x, y, z]})


def _grid(cfg: RunConfig):
    sources = [alg.upset_algebra(p) for p in enumerate_cotrees(cfg.max_source)]
    targets = [alg.upset_algebra(p) for p in enumerate_coforests(cfg.max_target)]
    return sources, targets


@suite("jankov")
def _jankov(cfg: RunConfig, rep: VerificationReport) -> None:
    """Refuting J(A) iff a component of B's dual maps onto A's dual."""
    sources, targets = _grid(cfg)
    for a in sources:
        for b in targets:
            r = check_jankov_refutation(b, a, cfg.budget)
            rep.instances += 1
            if not r.agree:
                rep.discrepancies.append({"source": _poset_json(a.poset), "target": _poset_json(b.poset),
                                          "report": r.to_json()})


@suite("subframe")
def _subframe(cfg: RunConfig, rep: VerificationReport) -> None:
    """Refuting beta(A) iff A's dual order-embeds into B's dual."""
    sources, targets = _grid(cfg)
    for a in sources:
        for b in targets:
            r = check_subframe_refutation(b, a, cfg.budget)
            rep.instances += 1
            if not r.agree:
                rep.discrepancies.append({"source": _poset_json(a.poset), "target": _poset_json(b.poset),
                                          "report": r.to_json()})


@suite("stable")
def _stable(cfg: RunConfig, rep: VerificationReport) -> None:
    """Refuting gamma(A, D) iff A embeds into an SI image of B respecting D."""
    rng = random.Random(cfg.seed)
    sources = [alg.upset_algebra(p) for p in enumerate_cotrees(cfg.stable_source_elements)]
    sources = [a for a in sources if a.k <= cfg.stable_source_elements]
    targets = [alg.upset_algebra(p) for p in enumerate_coforests(cfg.stable_target_elements)]
    targets = [b for b in targets if b.k <= cfg.stable_target_elements]
    refuted = 0
    for _ in range(cfg.stable_instances):
        a = rng.choice(sources)
        b = rng.choice(targets)
        density = rng.random()
        pairs = [pr for pr in itertools.product(range(a.k), repeat=2) if rng.random() < density]
        r = check_stable_refutation(b, a, StableDomain.of(a, pairs), cfg.budget)
        rep.instances += 1
        refuted += r.refuted
        if not r.agree:
            rep.discrepancies.append({"source": _poset_json(a.poset), "target": _poset_json(b.poset),
                                      "domain": sorted(pairs), "report": r.to_json()})
    rep.notes["refuted_instances"] = refuted


@suite("depth-width")
def _depth_width(cfg: RunConfig, rep: VerificationReport) -> None:
    """Subframe formulas of chains and co-forks axiomatize bounded depth and width."""
    for n in range(1, cfg.depth_width_n + 1):
        chain_f = beta(alg.upset_algebra(make_chain(n)))
        fork_f = beta(alg.upset_algebra(make_cofork(n)))
        for x in enumerate_cotrees(cfg.depth_width_size):
            b = alg.upset_algebra(x)
            for kind, f, measure in (("depth", chain_f, depth(x)), ("width", fork_f, width(x))):
                rep.instances += 1
                valid = is_valid(b, f, cfg.budget).valid
                if valid != (measure < n):
                    rep.discrepancies.append({"n": n, "measure": kind, "value": measure,
                                              "valid": valid, "poset": _poset_json(x)})


@suite("combs")
def _combs(cfg: RunConfig, rep: VerificationReport) -> None:
    """Comb embedding iff comb image; the quotient construction; beta and J of combs agree."""
    for n in range(1, cfg.comb_n + 1):
        comb = make_comb(n)
        comb_alg = alg.upset_algebra(comb)
        j_f, b_f = jankov(comb_alg), beta(comb_alg)
        for x in enumerate_cotrees(cfg.comb_size):
            rep.instances += 1
            emb = find_order_embedding(comb, x)
            sur = find_surjective_bi_p_morphism(x, comb)
            problem = {}
            if (emb is None) != (sur is None):
                problem["embedding_vs_surjection"] = [emb is not None, sur is not None]
            if emb is not None:
                try:
                    comb_quotient(x, n)
                except AssertionError as exc:
                    problem["quotient"] = str(exc)
            b = alg.upset_algebra(x)
            rj = not is_valid(b, j_f, cfg.budget).valid
            rb = not is_valid(b, b_f, cfg.budget).valid
            if rj != rb or rb != (emb is not None):
                problem["formulas"] = {"jankov_refuted": rj, "subframe_refuted": rb}
            if problem:
                rep.discrepancies.append({"n": n, "poset": _poset_json(x), **problem})


@suite("hodkinson")
def _hodkinson(cfg: RunConfig, rep: VerificationReport) -> None:
    """The co-trees T_0, T_1, ... are pairwise incomparable under bi-p-morphic images."""
    trees = [make_hodkinson(i) for i in range(cfg.hodkinson_max + 1)]
    matrix = antichain_matrix(trees, cfg.budget)
    rep.notes["matrix"] = matrix
    for i, j in itertools.permutations(range(len(trees)), 2):
        rep.instances += 1
        if matrix[i][j] != "incomparable":
            rep.discrepancies.append({"pair": [i, j], "relation": matrix[i][j]})


@suite("comb-generation")
def _comb_generation(cfg: RunConfig, rep: VerificationReport) -> None:
    """One upset generates each comb algebra; the coloring criterion agrees with closure."""
    changed = []
    for n in range(1, cfg.comb_generation_n + 1):
        frame = comb_coloring(n)
        changed.append(frame.closure_changed)
        rep.instances += 1
        if not generates_upsets(frame.poset, frame.colors):
            rep.discrepancies.append({"n": n, "generated": False})
        if n <= cfg.coloring_n:
            for colors in (frame.colors, ()):
                rep.instances += 1
                r = coloring_theorem_check(frame.poset, colors)
                if not r.agree or r.generated != bool(colors):
                    rep.discrepancies.append({"n": n, "colors": list(colors), "report": r.to_json()})
    rep.notes["closure_changed"] = changed


@suite("depth-bound")
def _depth_bound(cfg: RunConfig, rep: VerificationReport) -> None:
    """Co-trees omitting the 2-comb have depth and minimal cones within (rank + 1) * 2."""
    comb = make_comb(2)
    ranks = []
    for x in enumerate_cotrees(cfg.depth_bound_size):
        if find_order_embedding(comb, x) is not None:
            continue
        r = depth_bound_check(x, 2, cfg.gen_rank_cap)
        rep.instances += 1
        ranks.append(r.rank)
        if not r.holds:
            rep.discrepancies.append({"poset": _poset_json(x), "report": r.to_json()})
    rep.notes["max_gen_rank"] = max(ranks, default=0)


@suite("inconsistency")
def _inconsistency(cfg: RunConfig, rep: VerificationReport) -> None:
    """Sigma plus ~!~phi explodes iff Sigma entails phi, over co-tree models up to the cap."""
    rng = random.Random(cfg.seed)
    names = ["p", "q"]
    entailed = 0
    for _ in range(cfg.inconsistency_instances):
        sigma = [random_formula(rng, names, rng.randint(1, 3)) for _ in range(rng.randint(0, 2))]
        phi = random_formula(rng, names, rng.randint(1, 3))
        r = inconsistency_lemma_check(sigma, phi, cfg.model_cap, max(cfg.model_cap, 6))
        rep.instances += 1
        entailed += r.right.holds
        if not r.agree:
            rep.discrepancies.append({"sigma": [str(s) for s in sigma], "phi": str(phi), "report": r.to_json()})
    rep.notes["entailed_instances"] = entailed


@suite("filtration")
def _filtration(cfg: RunConfig, rep: VerificationReport) -> None:
    """Filtered algebras still refute, stay bi-Godel, and stay SI."""
    rng = random.Random(cfg.seed)
    pool = [p for p in enumerate_coforests(cfg.filtration_elements - 1)
            if len(all_upsets(p)) <= cfg.filtration_elements]
    names = ["p", "q"]
    attempts = 0
    while rep.instances < cfg.filtration_instances:
        attempts += 1
        if attempts > 200 * cfg.filtration_instances:
            rep.partial = True
            break
        p = rng.choice(pool)
        b = alg.upset_algebra(p)
        phi = random_formula(rng, names, rng.randint(2, 4))
        v = {name: rng.randrange(b.k) for name in variables(phi)}
        if eval_formula(b, phi, v) == b.top:
            continue
        out, w, carrier = alg.filtration(b, phi, v)
        rep.instances += 1
        problem = {}
        if eval_formula(out, phi, w) == out.top:
            problem["refutes"] = False
        if alg.check_bi_heyting(out):
            problem["bi_heyting"] = False
        if not alg.is_bi_godel(out):
            problem["bi_godel"] = False
        if is_co_tree(p) and not alg.is_SI(out):
            problem["si"] = False
        theta = {eval_formula(b, s, v) for s in subformulas(phi)}
        pos = {e: i for i, e in enumerate(carrier)}
        for x, y in itertools.product(theta, repeat=2):
            if b.coimp[x][y] in theta and carrier[out.coimp[pos[x]][pos[y]]] != b.coimp[x][y]:
                problem["coimp_on_values"] = [x, y]
        if problem:
            rep.discrepancies.append({"poset": _poset_json(p), "phi": str(phi), **problem})
    rep.notes["attempts"] = attempts


ACCEPTANCE_ORDER = ["duality", "identities", "si", "discriminator", "jankov", "subframe", "stable",
                    "depth-width", "combs", "hodkinson", "comb-generation", "depth-bound",
                    "inconsistency", "filtration"]

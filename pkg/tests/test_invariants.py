"""Structural invariants swept exhaustively or over random instances."""

import itertools
import random

from hypothesis import given
from hypothesis import strategies as st

from conftest import coforests, cotrees
from cotree_lab import algebra as A
from cotree_lab.charform import (
    StableDomain,
    beta,
    check_jankov_refutation,
    check_subframe_refutation,
    gamma,
    jankov,
)
from cotree_lab.formula import Coneg, Neg, eval_formula, is_valid, kripke_eval, random_formula, truth_set, variables
from cotree_lab.morphisms import find_surjective_bi_p_morphism
from cotree_lab.poset import (
    bits,
    depth,
    enumerate_coforests,
    enumerate_cotrees,
    make_comb,
    popcount,
)


# -- poset ---------------------------------------------------------------------------------
@given(coforests(7), st.integers(0, 2**7 - 1), st.integers(0, 2**7 - 1))
def test_closures_are_closure_operators(p, s, t):
    s, t = s & p.full, t & p.full
    for close in (p.up_closure, p.down_closure):
        assert close(close(s)) == close(s)
        assert s & ~close(s) == 0
        assert close(s & t) & ~close(s) == 0


@given(coforests(7), st.integers(0, 2**7 - 1), st.integers(0, 2**7 - 1))
def test_empty_intersection_equivalences(p, w, v):
    w, v = w & p.full, v & p.full
    dw, dv = p.down_closure(w), p.down_closure(v)
    a = dw & p.up_closure(dv) == 0
    b = dw & dv == 0
    c = p.up_closure(dw) & dv == 0
    assert a == b == c


@given(coforests(7), st.integers(0, 2**7 - 1), st.integers(0, 2**7 - 1))
def test_below_convex_set_misses_its_upset(p, raw_w, raw_v):
    w = raw_w & p.full
    if not p.is_convex(w):
        return
    v = raw_v & p.down_closure(w) & ~w
    assert v & p.up_closure(w) == 0


@given(cotrees(8))
def test_principal_upsets_of_cotrees_are_short_chains(x):
    d = depth(x)
    for y in range(x.n):
        assert x.is_chain(x.up[y]) and popcount(x.up[y]) <= d


def test_combs_nest():
    for n in range(2, 7):
        big, small = make_comb(n), make_comb(n - 1)
        sub, _ = big.restrict(sum(1 << big.index(lab) for lab in small.labels))
        assert sub.labels == small.labels and sub.up == small.up


# -- formulas -----------------------------------------------------------------------------
def test_kripke_and_algebra_agree_on_random_formulas():
    rng = random.Random(0)
    trees = list(enumerate_cotrees(6))
    for _ in range(500):
        x = rng.choice(trees)
        a = A.upset_algebra(x)
        f = random_formula(rng, ["p", "q", "r"], rng.randint(1, 6))
        v = {name: rng.randrange(a.k) for name in variables(f)}
        coloring = {name: a.upsets[val] for name, val in v.items()}
        ts = truth_set(x, coloring, f)
        assert ts == a.upsets[eval_formula(a, f, v)]
        assert x.is_upset(ts)
        for y in range(x.n):
            assert kripke_eval(x, coloring, y, f) == bool(ts >> y & 1)


@given(coforests(5), st.integers(0, 10**6))
def test_derived_connectives(p, seed):
    a = A.upset_algebra(p)
    rng = random.Random(seed)
    f = random_formula(rng, ["p", "q"], 3)
    v = {name: rng.randrange(a.k) for name in variables(f)}
    val = eval_formula(a, f, v)
    assert eval_formula(a, Neg(f), v) == a.imp[val][a.bot] == a.neg(val)
    assert eval_formula(a, Coneg(f), v) == a.coimp[a.top][val] == a.coneg(val)


# -- characteristic formulas ---------------------------------------------------------------
def test_refutation_lemmas_on_all_small_cotree_pairs():
    sources = [A.upset_algebra(p) for p in enumerate_cotrees(5)]
    targets = [A.upset_algebra(q) for q in enumerate_cotrees(6)]
    for a, b in itertools.product(sources, targets):
        assert check_jankov_refutation(b, a).agree
        assert check_subframe_refutation(b, a).agree


def test_comb_formulas_agree_on_coforests():
    for n in range(1, 4):
        comb = A.upset_algebra(make_comb(n))
        jf, bf = jankov(comb), beta(comb)
        for q in enumerate_coforests(6):
            b = A.upset_algebra(q)
            assert is_valid(b, jf).valid == is_valid(b, bf).valid


@given(cotrees(3), coforests(4), st.integers(0, 2**16), st.integers(0, 2**16))
def test_larger_domains_are_harder_to_refute(src, tgt, m1, m2):
    a, b = A.upset_algebra(src), A.upset_algebra(tgt)
    pairs = list(itertools.product(range(a.k), repeat=2))
    small = {pr for i, pr in enumerate(pairs) if m1 >> i & 1}
    big = small | {pr for i, pr in enumerate(pairs) if m2 >> i & 1}
    if not is_valid(b, gamma(a, StableDomain.of(a, big))).valid:
        assert not is_valid(b, gamma(a, StableDomain.of(a, small))).valid


# -- morphisms ------------------------------------------------------------------------------
@given(cotrees(7), cotrees(4))
def test_covers_map_to_covers_or_collapse(p, q):
    f = find_surjective_bi_p_morphism(p, q)
    if f is None:
        return
    for x, y in p.covers():
        fx, fy = f(x), f(y)
        assert fx == fy or fy in bits(q.upper_covers[fx])

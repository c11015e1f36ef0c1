import itertools
import random

import pytest
from hypothesis import given

import oracles as O
from conftest import coforests, cotrees
from cotree_lab import algebra as A
from cotree_lab.formula import eval_formula, parse
from cotree_lab.poset import (
    CapExceeded,
    bits,
    build_poset,
    canonical_form,
    enumerate_cotrees,
    is_co_tree,
    make_chain,
    make_comb,
    make_cofork,
)
from cotree_lab.verify import identity_failures, scrambled


def chain_with_middle(k=3):
    a = A.chain_algebra(k)
    return a, [x for x in range(a.k) if x not in (a.bot, a.top)]


def test_upset_algebra_small():
    a = A.upset_algebra(make_chain(2))
    assert a.k == 3 and all(a.leq[x][y] or a.leq[y][x] for x in range(3) for y in range(3))
    assert A.is_isomorphic(A.upset_algebra(make_comb(1)), A.chain_algebra(3))
    assert A.upset_algebra(make_comb(2)).k == 7


def test_dual_poset_examples():
    q, _ = A.dual_poset(A.chain_algebra(3))
    assert q.n == 2 and q.is_chain(q.full)
    q, iso = A.dual_poset(A.upset_algebra(make_comb(2)))
    assert canonical_form(q) == canonical_form(make_comb(2))
    assert A.is_isomorphism(iso.source, iso.target, iso.map)
    q, _ = A.dual_poset(A.boolean_algebra(1))
    assert q.n == 1


def test_si_examples():
    assert A.is_SI(A.chain_algebra(3))
    assert not A.is_SI(A.boolean_algebra(2))
    assert all(A.is_SI(A.upset_algebra(make_comb(n))) for n in range(1, 4))


def test_discriminator_on_si():
    a = A.upset_algebra(make_comb(2))
    for x, y, z in itertools.product(range(a.k), repeat=3):
        assert A.discriminator_eval(a, x, y, z) == (z if x == y else x)


def test_plus_on_boolean_matches_composition():
    a = A.boolean_algebra(2)
    x, y = [e for e in range(a.k) if e not in (a.bot, a.top)]
    # !((x <- y) | (y <- x)) recomposed from the raw tables
    expected = a.imp[a.join[a.coimp[x][y]][a.coimp[y][x]]][a.bot]
    assert A.plus_term(a, x, y) == expected == a.bot


def test_generated_subalgebras():
    a = A.chain_algebra(3)
    assert A.generated_subalgebra(a, []) == sorted({a.bot, a.top})
    _, mid = chain_with_middle(3)
    assert len(A.generated_subalgebra(a, mid)) == 3
    four = A.chain_algebra(4)
    order = sorted(range(4), key=lambda e: sum(four.leq[f][e] for f in range(4)))
    b = order[2]
    assert A.generated_subalgebra(four, [b], "heyting") == sorted({order[0], b, order[3]})


def test_gen_rank_examples():
    assert A.gen_rank(A.chain_algebra(2)) == 0
    assert A.gen_rank(A.chain_algebra(3)) == 1
    # 15 elements, above the default cap
    assert A.gen_rank(A.upset_algebra(make_comb(3)), cap=16) == 1


def test_gen_rank_cap():
    with pytest.raises(CapExceeded):
        A.gen_rank(A.chain_algebra(20), cap=12)


@pytest.mark.parametrize("p", [make_chain(3), make_cofork(2), make_cofork(3), make_comb(2),
                               build_poset(["a", "b", "c"], [("a", "c")])])
def test_gen_rank_matches_bruteforce(p):
    assert A.gen_rank(A.upset_algebra(p), cap=64) == O.generation_rank(p)


def test_hom_images():
    a = A.upset_algebra(make_comb(2))
    assert len(A.hom_images(a)) == 2
    prod = A.product(A.chain_algebra(3), A.chain_algebra(3))
    assert len(A.hom_images(prod)) == 4
    assert len(A.hom_images(A.chain_algebra(1))) == 1


def test_filtration_example():
    b, mid = chain_with_middle(3)
    phi = parse("p | !p")
    out, w, carrier = A.filtration(b, phi, {"p": mid[0]})
    assert out.k == 3 and A.is_SI(out)
    assert eval_formula(out, phi, w) != out.top


def test_filtration_needs_refutation():
    with pytest.raises(A.AlgebraError):
        A.filtration(A.chain_algebra(3), parse("p -> p"), {"p": 0})


def test_tables_are_verified():
    a = A.chain_algebra(3)
    bad = [list(r) for r in a.imp]
    bad[0][0] = a.bot
    with pytest.raises(A.AlgebraError):
        A.from_tables(a.leq, imp=bad)


def test_json_roundtrip():
    a = A.upset_algebra(make_comb(2))
    b = A.from_json(a.to_json())
    assert b.k == a.k and b.coimp == a.coimp and b.names == a.names


def test_subalgebras_of_si_are_si():
    for p in enumerate_cotrees(5):
        a = A.upset_algebra(p)
        carriers = {tuple(A.generated_subalgebra(a, gens))
                    for r in (1, 2) for gens in itertools.combinations(range(a.k), r)}
        for carrier in carriers:
            assert A.is_SI(A.subalgebra(a, carrier))


# -- invariants over enumerations and random instances -----------------------------------
@given(coforests(6))
def test_identities_hold(p):
    assert identity_failures(A.upset_algebra(p)) == []


@given(coforests(6))
def test_operations_match_set_oracle(p):
    a = A.upset_algebra(p)
    rel = O.order(p)
    universe = frozenset(range(p.n))
    sets = [frozenset(bits(u)) for u in a.upsets]
    pos = {s: i for i, s in enumerate(sets)}
    for x, y in itertools.product(range(a.k), repeat=2):
        u, v = sets[x], sets[y]
        assert a.meet[x][y] == pos[u & v]
        assert a.join[x][y] == pos[u | v]
        assert a.imp[x][y] == pos[O.set_imp(rel, universe, u, v)]
        assert a.coimp[x][y] == pos[O.set_coimp(rel, u, v)]


@given(coforests(6))
def test_not_co_not_is_interior_of_down_up(p):
    a = A.upset_algebra(p)
    for i, u in enumerate(a.upsets):
        expected = {x for x in range(p.n) if p.down_closure(p.up[x]) & ~u == 0}
        assert set(bits(a.upsets[a.neg(a.coneg(i))])) == expected


@given(coforests(6))
def test_si_iff_cotree(p):
    a = A.upset_algebra(p)
    assert A.is_SI(a) == is_co_tree(p) == O.meet_irreducible_bottom(O.upsets(p))


@given(coforests(6))
def test_duality_roundtrip(p):
    a = A.upset_algebra(p)
    q, iso = A.dual_poset(scrambled(a, random.Random(p.n)))
    assert canonical_form(q) == canonical_form(p)
    assert A.is_isomorphism(iso.source, iso.target, iso.map)


@given(coforests(6))
def test_bi_godel_everywhere_on_coforests(p):
    assert A.is_bi_godel(A.upset_algebra(p))


@given(cotrees(6))
def test_nesi_is_top_or_bottom_on_si(p):
    a = A.upset_algebra(p)
    for x in range(a.k):
        assert a.neg(a.coneg(x)) == (a.top if x == a.top else a.bot)


@given(cotrees(5))
def test_si_images_are_trivial_or_self(p):
    a = A.upset_algebra(p)
    assert sorted(img.k for img, _ in A.hom_images(a)) == sorted({1, a.k})

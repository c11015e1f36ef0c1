import pytest
from hypothesis import given

import oracles as O
from conftest import coforests, cotrees
from cotree_lab.poset import (
    EMPTY,
    CapExceeded,
    PosetError,
    all_upsets,
    antichain_width_bruteforce,
    bits,
    build_poset,
    canonical_form,
    components,
    depth,
    disjoint_union,
    enumerate_coforests,
    enumerate_cotrees,
    enumerate_posets,
    from_json,
    is_co_forest,
    is_co_tree,
    is_isomorphic,
    make_chain,
    make_cofork,
    make_comb,
    make_hodkinson,
    mask_of,
    random_cotree,
    width,
)

# Frozen from brute-force enumeration (rooted unlabeled trees, forests, all posets).
COTREE_COUNTS = [1, 1, 2, 4, 9, 20, 48, 115]
COFOREST_COUNTS = [1, 2, 4, 9, 20, 48]
POSET_COUNTS = [1, 2, 5, 16, 63, 318]


def test_build_transitive_closure():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert p.leq(p.index("a"), p.index("c"))
    assert not p.leq(p.index("c"), p.index("a"))


def test_single_point():
    p = build_poset(["a"], [])
    assert p.n == 1 and is_co_tree(p)


def test_cycle_rejected():
    with pytest.raises(PosetError):
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_closures():
    c1 = make_comb(1)
    assert c1.up_closure(0) == 0
    assert c1.up_closure(1 << c1.index("x1'")) == c1.full
    f2 = make_cofork(2)
    assert f2.down_closure(1 << f2.index("r")) == f2.full


def test_foreign_bits_rejected():
    with pytest.raises(PosetError):
        make_chain(2).up_closure(0b100)


def test_shape_predicates():
    assert is_co_tree(make_comb(2))
    anti = build_poset(["a", "b"], [])
    assert not is_co_tree(anti) and is_co_forest(anti)
    diamond = build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    assert not is_co_tree(diamond) and not is_co_forest(diamond)


def test_depth_and_width():
    assert depth(make_chain(3)) == 3
    assert width(make_cofork(3)) == 3
    assert width(make_comb(2)) == O.widest_antichain(make_comb(2)) == 2


def test_named_posets():
    c1 = make_comb(1)
    assert c1.n == 2 and c1.is_chain(c1.full)
    assert is_isomorphic(make_hodkinson(0), make_chain(4))
    assert make_comb(3).n == 6
    assert [make_hodkinson(i).n for i in range(3)] == [4, 12, 20]
    assert all(is_co_tree(make_hodkinson(i)) for i in range(3))


def test_components():
    assert len(components(disjoint_union(make_comb(1), make_comb(1)))) == 2
    assert len(components(make_comb(3))) == 1
    assert components(EMPTY) == []


def test_upset_counts():
    assert len(all_upsets(make_chain(2))) == 3
    assert len(all_upsets(make_comb(2))) == 7
    assert len(all_upsets(build_poset(["a", "b"], []))) == 4


def test_upset_cap():
    with pytest.raises(CapExceeded):
        all_upsets(build_poset([str(i) for i in range(10)], []), cap=100)


def test_enumeration_counts():
    assert [sum(1 for _ in enumerate_cotrees(n, min_size=n)) for n in range(1, 9)] == COTREE_COUNTS
    assert [sum(1 for _ in enumerate_coforests(n, min_size=n)) for n in range(1, 7)] == COFOREST_COUNTS
    counts = [0] * 6
    for p in enumerate_posets(6):
        counts[p.n - 1] += 1
    assert counts == POSET_COUNTS


def test_enumerate_small():
    got = list(enumerate_cotrees(2))
    assert len(got) == 2 and {p.n for p in got} == {1, 2} and all(p.is_chain(p.full) for p in got)


def test_enumeration_distinct_and_shaped():
    trees = list(enumerate_cotrees(6))
    assert len({canonical_form(p) for p in trees}) == len(trees)
    assert all(is_co_tree(p) for p in trees)


def test_random_cotree_deterministic():
    assert canonical_form(random_cotree(6, 3)) == canonical_form(random_cotree(6, 3))
    assert random_cotree(6, 3).to_json() == random_cotree(6, 3).to_json()


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_cotrees(20, cap=12))


@given(coforests(7))
def test_upsets_match_bruteforce(p):
    assert sorted(map(frozenset, (set(bits(u)) for u in all_upsets(p))), key=sorted) == \
        sorted(O.upsets(p), key=sorted)


@given(coforests(7))
def test_depth_width_match_bruteforce(p):
    assert depth(p) == O.longest_chain(p)
    assert width(p) == antichain_width_bruteforce(p) == O.widest_antichain(p)


@given(cotrees(7))
def test_closures_are_idempotent_and_order_preserving(p):
    for x in range(p.n):
        s = 1 << x
        u = p.up_closure(s)
        assert p.up_closure(u) == u and p.is_upset(u)
        assert p.down_closure(p.down_closure(s)) == p.down_closure(s)
        assert u == mask_of(y for y in range(p.n) if p.leq(x, y))


@given(coforests(7))
def test_json_roundtrip(p):
    assert canonical_form(from_json(p.to_json())) == canonical_form(p)


@given(cotrees(7))
def test_canonical_form_is_relabeling_invariant(p):
    perm = list(reversed(range(p.n)))
    assert canonical_form(p.relabel(perm)) == canonical_form(p)


def test_dot_export():
    dot = make_chain(2).to_dot()
    assert dot.startswith("digraph") and '"c1" -> "c2"' in dot

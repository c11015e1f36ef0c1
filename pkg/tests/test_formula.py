import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from conftest import coforests, cotrees, formulas
from cotree_lab import algebra as A
from cotree_lab.charform import beta, jankov
from cotree_lab.formula import (
    BOT,
    GODEL_DUMMETT,
    TOP,
    BudgetExceeded,
    Coimp,
    Coneg,
    FormulaSyntaxError,
    Imp,
    Neg,
    Or,
    Var,
    conj,
    consequence_bounded,
    eval_formula,
    inconsistency_lemma_check,
    is_valid,
    is_valid_sweep,
    kripke_eval,
    parse,
    to_text,
    truth_set,
    variables,
)
from cotree_lab.poset import bits, make_chain, make_cofork, make_comb, mask_of

p, q, r = Var("p"), Var("q"), Var("r")


def middle(a):
    return next(x for x in range(a.k) if x not in (a.bot, a.top))


def test_parse_examples():
    assert parse("(p -> q) | (q -> p)") == Or(Imp(p, q), Imp(q, p)) == GODEL_DUMMETT
    assert parse("~!p") == Coneg(Neg(p))
    assert parse("p <- q <- r") == Coimp(Coimp(p, q), r)
    assert parse("p -> q -> r") == Imp(p, Imp(q, r))


def test_parse_unicode():
    assert parse("(p → q) ∨ ¬∼q") == parse("(p -> q) | !~q")
    assert parse("p ↔ ⊤") == parse("p <-> top")


@pytest.mark.parametrize("text", ["p -> q <- r", "p <- q -> r", "(p", "p q", "p <-> q <-> r", "", "&p"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("p & )")
    assert err.value.pos == 4


def test_variables_natural_order():
    assert variables(parse("x10 & x2 & x1")) == ["x1", "x2", "x10"]


def test_eval_examples():
    a = A.chain_algebra(3)
    assert eval_formula(a, Coimp(TOP, TOP), {}) == a.bot
    m = middle(a)
    assert eval_formula(a, parse("p | !p"), {"p": m}) == m


def test_gd_on_coforest_algebras():
    for shape in (make_cofork(2), make_comb(2), make_chain(3)):
        a = A.upset_algebra(shape)
        for x, y in itertools.product(range(a.k), repeat=2):
            assert eval_formula(a, GODEL_DUMMETT, {"p": x, "q": y}) == a.top


def test_kripke_example():
    chain = make_chain(2)
    col = {"p": 1 << chain.index("c2")}
    f = Coimp(p, BOT)
    assert kripke_eval(chain, col, chain.index("c2"), f)
    assert not kripke_eval(chain, col, chain.index("c1"), f)


def test_validity_examples():
    assert is_valid(A.upset_algebra(make_cofork(2)), GODEL_DUMMETT).valid
    a = A.chain_algebra(3)
    v = is_valid(a, parse("p | !p"))
    assert not v.valid and v.countervaluation == {"p": middle(a)}
    assert is_valid(A.chain_algebra(1), parse("p & !p")).valid


def test_budget():
    with pytest.raises(BudgetExceeded):
        is_valid(A.chain_algebra(4), parse("p | q | r | s"), budget=10)


def test_consequence_examples():
    for cap in (1, 3, 5):
        assert consequence_bounded([p], p, cap).holds
    res = consequence_bounded([], parse("p | !p"), 3)
    assert not res.holds and res.model.n == 2
    res = consequence_bounded([parse("~!p")], p, 3)
    assert not res.holds and res.model.n == 2
    assert res.coloring["p"] == 1 << res.model.greatest()


def test_inconsistency_examples():
    r1 = inconsistency_lemma_check([], TOP, 4)
    assert r1.agree and r1.left.holds and r1.right.holds
    r2 = inconsistency_lemma_check([], p, 4)
    assert r2.agree and not r2.left.holds and not r2.right.holds


def test_inconsistency_with_plain_conegation_disagrees():
    # the weaker premise ~!phi only says phi holds somewhere, which is consistent with phi = top
    left = consequence_bounded([Coneg(Neg(TOP))], BOT, 3)
    right = consequence_bounded([], TOP, 3)
    assert not left.holds and right.holds


def test_guarded_search_matches_sweep_on_charforms():
    for shape in (make_chain(2), make_cofork(2), make_comb(1)):
        src = A.upset_algebra(shape)
        for f in (jankov(src), beta(src)):
            for target in (make_chain(3), make_cofork(2), make_comb(2)):
                b = A.upset_algebra(target)
                fast = is_valid(b, f)
                if b.k ** len(variables(f)) <= 200_000:
                    assert fast.valid == is_valid_sweep(b, f).valid
                if not fast.valid:
                    assert eval_formula(b, f, fast.countervaluation) != b.top


def test_long_conjunctions_do_not_recurse_deeply():
    f = conj([Var(f"x{i}") for i in range(5000)])
    assert len(variables(f)) == 5000 and hash(f) == hash(conj([Var(f"x{i}") for i in range(5000)]))


# -- properties -------------------------------------------------------------------------
@given(formulas(depth=4))
def test_print_parse_roundtrip(f):
    assert parse(to_text(f)) == f
    assert to_text(parse(to_text(f))) == to_text(f)


@given(cotrees(5), formulas(), st.integers(0, 10**6))
def test_kripke_matches_algebra(x, f, seed):
    a = A.upset_algebra(x)
    names = variables(f)
    vals = [(seed // a.k ** i) % a.k for i in range(len(names))]
    v = dict(zip(names, vals))
    col = {n: a.upsets[val] for n, val in v.items()}
    assert a.upsets[eval_formula(a, f, v)] == truth_set(x, col, f)
    expect = O.truth(x, {n: set(bits(u)) for n, u in col.items()}, f)
    assert truth_set(x, col, f) == mask_of(expect)


@given(coforests(5), formulas())
def test_validity_matches_frame_oracle(x, f):
    a = A.upset_algebra(x)
    names = variables(f)
    verdict = is_valid(a, f)
    assert verdict.valid == O.valid_on_frame(x, f, names)[0]
    if not verdict.valid:
        assert verdict.countervaluation == is_valid_sweep(a, f).countervaluation


@given(cotrees(5), formulas())
def test_nesi_and_sinesi_read_globally(x, f):
    a = A.upset_algebra(x)
    names = variables(f)
    for vals in itertools.product(range(a.k), repeat=len(names)):
        v = dict(zip(names, vals))
        holds_everywhere = eval_formula(a, f, v) == a.top
        holds_somewhere = eval_formula(a, f, v) != a.bot
        assert (eval_formula(a, Neg(Coneg(f)), v) == a.top) == holds_everywhere
        assert (eval_formula(a, Coneg(Neg(f)), v) == a.top) == holds_somewhere
        assert (eval_formula(a, Coneg(Neg(Coneg(f))), v) == a.top) == (not holds_everywhere)

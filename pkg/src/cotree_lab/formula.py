"""Formulas over top, bot, &, |, -> and <- (co-implication).

Text grammar, loosest binding first::

    iff   := impl [ "<->" impl ]
    impl  := disj { "->" disj }        right associative
           | disj { "<-" disj }        left associative (no mixing without parens)
    disj  := conj { "|" conj }
    conj  := unary { "&" unary }
    unary := "!" unary | "~" unary | atom
    atom  := NAME | "top" | "bot" | "(" iff ")"

``!a`` abbreviates ``a -> bot``, ``~a`` abbreviates ``top <- a`` and
``a <-> b`` abbreviates ``(a -> b) & (b -> a)``.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .algebra import BiHeytingAlgebra, is_SI_lattice, si_quotients, upset_algebra
from .poset import CapExceeded, Poset, bits, enumerate_cotrees

DEFAULT_BUDGET = 20_000_000
DEFAULT_MODEL_CAP = 6
SWEEP_BLOCK = 1 << 16


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"needs {needed} evaluations, budget is {budget}")
        self.needed = needed
        self.budget = budget


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Imp(self, other)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


def _node_hash(self) -> int:
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__, self.left, self.right))
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    __hash__ = _node_hash


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    __hash__ = _node_hash


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula
    __hash__ = _node_hash


@dataclass(frozen=True)
class Coimp(Formula):
    left: Formula
    right: Formula
    __hash__ = _node_hash


TOP, BOT = Top(), Bot()


def Neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def Coneg(f: Formula) -> Formula:
    return Coimp(TOP, f)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def _balanced(fs: Sequence[Formula], op, empty: Formula) -> Formula:
    # balanced nesting keeps long characteristic formulas shallow; the conjunct order is unchanged
    if not fs:
        return empty
    if len(fs) == 1:
        return fs[0]
    mid = len(fs) // 2
    return op(_balanced(fs[:mid], op, empty), _balanced(fs[mid:], op, empty))


def conj(fs: Sequence[Formula]) -> Formula:
    return _balanced(list(fs), And, TOP)


def disj(fs: Sequence[Formula]) -> Formula:
    return _balanced(list(fs), Or, BOT)


def flatten_and(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return flatten_and(f.left) + flatten_and(f.right)
    return [f]


GODEL_DUMMETT = Or(Imp(Var("p"), Var("q")), Imp(Var("q"), Var("p")))


# -- structure ---------------------------------------------------------------
def natural_key(name: str) -> tuple:
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name))


def variables(f: Formula) -> list[str]:
    """Variables of ``f`` in natural sort order (x2 before x10)."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, (And, Or, Imp, Coimp)):
            stack += [g.left, g.right]
    return sorted(out, key=natural_key)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(g):
        if g in seen:
            return
        if isinstance(g, (And, Or, Imp, Coimp)):
            walk(g.left)
            walk(g.right)
        seen[g] = None

    walk(f)
    return list(seen)


def size(f: Formula) -> int:
    if isinstance(f, (And, Or, Imp, Coimp)):
        return 1 + size(f.left) + size(f.right)
    return 1


# -- parsing -----------------------------------------------------------------
_TOKEN = re.compile(r"\s*(?:(<->|->|<-|[()!~&|])|([A-Za-z_][A-Za-z0-9_']*))")
_UNICODE = {"¬": "!", "∼": "~", "∧": "&", "∨": "|", "→": "->", "⇐": "<-", "↔": "<->",
            "⊤": " top ", "⊥": " bot "}


def _tokens(text: str) -> list[tuple[str, str, int]]:
    for u, a in _UNICODE.items():
        text = text.replace(u, a)
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                                     len(text) - len(text[pos:].lstrip()))
        start = m.start(1) if m.group(1) else m.start(2)
        out.append(("op", m.group(1), start) if m.group(1) else ("name", m.group(2), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return f

    def iff(self) -> Formula:
        left = self.impl()
        if self.peek()[1] == "<->":
            self.take()
            right = self.impl()
            if self.peek()[1] == "<->":
                raise FormulaSyntaxError("'<->' is not associative; add parentheses", self.peek()[2])
            return Iff(left, right)
        return left

    def impl(self) -> Formula:
        first = self.disj()
        op = self.peek()[1]
        if op not in ("->", "<-"):
            return first
        operands = [first]
        while self.peek()[1] in ("->", "<-"):
            tok = self.take()
            if tok[1] != op:
                raise FormulaSyntaxError("mixing '->' and '<-' needs parentheses", tok[2])
            operands.append(self.disj())
        if op == "->":
            out = operands[-1]
            for g in reversed(operands[:-1]):
                out = Imp(g, out)
            return out
        out = operands[0]
        for g in operands[1:]:
            out = Coimp(out, g)
        return out

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[1] == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek()[1] == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        if tok[1] == "!":
            self.take()
            return Neg(self.unary())
        if tok[1] == "~":
            self.take()
            return Coneg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "name":
            if value == "top":
                return TOP
            if value == "bot":
                return BOT
            return Var(value)
        if value == "(":
            f = self.iff()
            self.take(")")
            return f
        raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", pos)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# -- printing ------------------------------------------------------------------
_IFF, _IMPL, _OR, _AND, _UNARY = range(5)


def _iff_parts(f: Formula):
    if (isinstance(f, And) and isinstance(f.left, Imp) and isinstance(f.right, Imp)
            and f.left.left == f.right.right and f.left.right == f.right.left):
        return f.left.left, f.left.right
    return None


def _level(f: Formula) -> int:
    if isinstance(f, Imp) and f.right == BOT:
        return _UNARY
    if isinstance(f, Coimp) and f.left == TOP:
        return _UNARY
    if isinstance(f, (Imp, Coimp)):
        return _IMPL
    if isinstance(f, And):
        return _IFF if _iff_parts(f) else _AND
    if isinstance(f, Or):
        return _OR
    return _UNARY + 1


def to_text(f: Formula) -> str:
    def wrap(g: Formula, ok: bool) -> str:
        s = to_text(g)
        return s if ok else f"({s})"

    if isinstance(f, Var):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    lvl = _level(f)
    if lvl == _UNARY:
        sym, arg = ("!", f.left) if isinstance(f, Imp) else ("~", f.right)
        return sym + wrap(arg, _level(arg) >= _UNARY)
    if lvl == _IFF:
        a, b = _iff_parts(f)
        return f"{wrap(a, _level(a) > _IFF)} <-> {wrap(b, _level(b) > _IFF)}"
    if isinstance(f, And):
        return f"{wrap(f.left, _level(f.left) >= _AND)} & {wrap(f.right, _level(f.right) > _AND)}"
    if isinstance(f, Or):
        return f"{wrap(f.left, _level(f.left) >= _OR)} | {wrap(f.right, _level(f.right) > _OR)}"
    if isinstance(f, Imp):
        right_ok = _level(f.right) > _IMPL or (_level(f.right) == _IMPL and isinstance(f.right, Imp))
        return f"{wrap(f.left, _level(f.left) > _IMPL)} -> {wrap(f.right, right_ok)}"
    left_ok = _level(f.left) > _IMPL or (_level(f.left) == _IMPL and isinstance(f.left, Coimp))
    return f"{wrap(f.left, left_ok)} <- {wrap(f.right, _level(f.right) > _IMPL)}"


# -- algebraic evaluation ----------------------------------------------------------
def _table_for(a: BiHeytingAlgebra, f: Formula):
    if isinstance(f, And):
        return a.meet
    if isinstance(f, Or):
        return a.join
    if isinstance(f, Imp):
        return a.imp
    return a.coimp


def eval_formula(a: BiHeytingAlgebra, f: Formula, v: dict[str, int]) -> int:
    memo: dict[Formula, int] = {}
    for g in subformulas(f):
        if isinstance(g, Var):
            if g.name not in v:
                raise KeyError(f"unbound variable {g.name}")
            memo[g] = v[g.name]
        elif isinstance(g, Top):
            memo[g] = a.top
        elif isinstance(g, Bot):
            memo[g] = a.bot
        else:
            memo[g] = _table_for(a, g)[memo[g.left]][memo[g.right]]
    return memo[f]


def compile_formula(a: BiHeytingAlgebra, f: Formula, order: Sequence[str]) -> Callable[[Sequence[int]], int]:
    """Closure evaluating ``f`` on a tuple of values listed in ``order``."""
    pos = {name: i for i, name in enumerate(order)}
    cache: dict[Formula, Callable] = {}

    def build(g: Formula):
        if g in cache:
            return cache[g]
        if isinstance(g, Var):
            i = pos[g.name]
            fn = lambda val: val[i]  # noqa: E731
        elif isinstance(g, Top):
            t = a.top
            fn = lambda val: t  # noqa: E731
        elif isinstance(g, Bot):
            b = a.bot
            fn = lambda val: b  # noqa: E731
        else:
            tab, lf, rf = _table_for(a, g), build(g.left), build(g.right)
            fn = lambda val: tab[lf(val)][rf(val)]  # noqa: E731
        cache[g] = fn
        return fn

    return build(f)


def eval_vectorized(a: BiHeytingAlgebra, f: Formula, columns: dict[str, np.ndarray]) -> np.ndarray:
    """Evaluate ``f`` on many valuations at once; ``columns`` maps variables to value arrays."""
    tabs = a.np_tables
    n = len(next(iter(columns.values()))) if columns else 1
    memo: dict[Formula, np.ndarray] = {}
    for g in subformulas(f):
        if isinstance(g, Var):
            memo[g] = columns[g.name]
        elif isinstance(g, Top):
            memo[g] = np.full(n, a.top, dtype=tabs["meet"].dtype)
        elif isinstance(g, Bot):
            memo[g] = np.full(n, a.bot, dtype=tabs["meet"].dtype)
        else:
            op = {And: "meet", Or: "join", Imp: "imp", Coimp: "coimp"}[type(g)]
            memo[g] = tabs[op][memo[g.left], memo[g.right]]
    return memo[f]


def _valuation_block(k: int, nvars: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop`` of the lexicographic enumeration of ``range(k) ** nvars``."""
    idx = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((nvars, stop - start), dtype=np.int64)
    for j in range(nvars - 1, -1, -1):
        cols[j] = idx % k
        idx //= k
    return cols


def sweep(a: BiHeytingAlgebra, formulas: Sequence[Formula], order: Sequence[str],
          block: int = SWEEP_BLOCK) -> Iterator[tuple[int, np.ndarray, list[np.ndarray]]]:
    """Yield (offset, value columns, formula values) over all valuations in lexicographic blocks."""
    total = a.k ** len(order)
    for start in range(0, total, block):
        stop = min(total, start + block)
        cols = _valuation_block(a.k, len(order), start, stop)
        columns = {name: cols[j] for j, name in enumerate(order)}
        yield start, cols, [eval_vectorized(a, f, columns) for f in formulas]


# -- Kripke semantics ----------------------------------------------------------------
def _check_coloring(p: Poset, coloring: dict[str, int]) -> None:
    for name, u in coloring.items():
        if not p.is_upset(u):
            raise ValueError(f"color of {name} is not an upset")


def kripke_eval(p: Poset, coloring: dict[str, int], x: int, f: Formula,
                _memo: dict | None = None) -> bool:
    """Forcing at point ``x`` using pointwise clauses; co-implication looks downward."""
    if _memo is None:
        _check_coloring(p, coloring)
        _memo = {}
    key = (f, x)
    if key in _memo:
        return _memo[key]
    if isinstance(f, Var):
        if f.name not in coloring:
            raise KeyError(f"unbound variable {f.name}")
        out = bool(coloring[f.name] >> x & 1)
    elif isinstance(f, Top):
        out = True
    elif isinstance(f, Bot):
        out = False
    elif isinstance(f, And):
        out = kripke_eval(p, coloring, x, f.left, _memo) and kripke_eval(p, coloring, x, f.right, _memo)
    elif isinstance(f, Or):
        out = kripke_eval(p, coloring, x, f.left, _memo) or kripke_eval(p, coloring, x, f.right, _memo)
    elif isinstance(f, Imp):
        out = all(not kripke_eval(p, coloring, y, f.left, _memo) or kripke_eval(p, coloring, y, f.right, _memo)
                  for y in bits(p.up[x]))
    else:
        out = any(kripke_eval(p, coloring, y, f.left, _memo) and not kripke_eval(p, coloring, y, f.right, _memo)
                  for y in bits(p.down[x]))
    _memo[key] = out
    return out


def truth_set(p: Poset, coloring: dict[str, int], f: Formula) -> int:
    _check_coloring(p, coloring)
    memo: dict = {}
    out = 0
    for x in range(p.n):
        if kripke_eval(p, coloring, x, f, memo):
            out |= 1 << x
    return out


# -- validity ------------------------------------------------------------------------
@dataclass(frozen=True)
class Verdict:
    valid: bool
    countervaluation: dict[str, int] | None = None
    checked: int = 0
    method: str = "sweep"

    def to_json(self, a: BiHeytingAlgebra | None = None) -> dict:
        out = {"verdict": "valid" if self.valid else "refuted", "checked": self.checked,
               "method": self.method}
        if self.countervaluation is not None:
            cv = self.countervaluation
            out["countervaluation"] = {k: (a.names[v] if a else v) for k, v in cv.items()}
        return out


def guard_shape(f: Formula) -> tuple[list[Formula], list[Formula]] | None:
    """Split ``!~(G) -> !(K)`` into the conjuncts of G and of K, else None."""
    if not (isinstance(f, Imp) and isinstance(f.left, Imp) and isinstance(f.right, Imp)):
        return None
    lhs, rhs = f.left, f.right
    if lhs.right != BOT or rhs.right != BOT:
        return None
    inner = lhs.left
    if not (isinstance(inner, Coimp) and inner.left == TOP):
        return None
    return flatten_and(inner.right), flatten_and(rhs.left)


def is_valid(a: BiHeytingAlgebra, f: Formula, budget: int = DEFAULT_BUDGET,
             decompose: bool = True) -> Verdict:
    """Decide ``a |= f``; refutations carry a countervaluation.

    Formulas shaped like ``!~G -> !K`` (the characteristic formulas) are decided
    by a pruned depth-first search whose visited nodes count against ``budget``;
    on algebras whose dual is disconnected the search runs on each connected
    quotient and the witness is lifted back. Everything else is swept in
    lexicographic blocks and the first countervaluation is returned.
    """
    order = variables(f)
    shape = guard_shape(f)
    if shape is not None:
        if decompose and a.k > 1 and not is_SI_lattice(a):
            return _decomposed(a, f, budget)
        return _guarded_search(a, f, order, shape, budget)
    total = a.k ** len(order)
    if total > budget:
        raise BudgetExceeded(total, budget)
    checked = 0
    for start, cols, (vals,) in sweep(a, [f], order):
        bad = np.nonzero(vals != a.top)[0]
        if len(bad):
            i = int(bad[0])
            checked += i + 1
            return Verdict(False, {name: int(cols[j][i]) for j, name in enumerate(order)}, checked)
        checked += len(vals)
    return Verdict(True, None, checked)


def _decomposed(a: BiHeytingAlgebra, f: Formula, budget: int) -> Verdict:
    used = 0
    for quotient, _proj, lift in si_quotients(a):
        verdict = is_valid(quotient, f, budget - used, decompose=False)
        used += verdict.checked
        if not verdict.valid:
            cv = {name: lift[val] for name, val in verdict.countervaluation.items()}
            if eval_formula(a, f, cv) == a.top:
                raise AssertionError("lifted countervaluation does not refute")
            return Verdict(False, cv, used, "guarded-search/components")
    return Verdict(True, None, used, "guarded-search/components")


def _guarded_search(a, f, order, shape, budget) -> Verdict:
    guards, kills = shape
    pos = {name: i for i, name in enumerate(order)}
    negconeg = [a.neg(a.coneg(x)) for x in range(a.k)]
    n = len(order)
    # attach every conjunct to the last variable (in search order) it mentions
    at_level: list[list[tuple[Callable, bool]]] = [[] for _ in range(n + 1)]
    for g, is_guard in [(g, True) for g in guards] + [(g, False) for g in kills]:
        vs = variables(g)
        level = max((pos[v] + 1 for v in vs), default=0)
        at_level[level].append((compile_formula(a, g, order), is_guard))
    val = [0] * n
    full = compile_formula(a, f, order)
    for fn, is_guard in at_level[0]:
        w = fn(val)
        if (negconeg[w] if is_guard else w) == a.bot:
            return Verdict(True, None, 1, "guarded-search")
    nodes = 0
    bot = a.bot

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == n:
            return full(val) != a.top
        checks = at_level[i + 1]
        for x in range(a.k):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(nodes, budget)
            val[i] = x
            ok = True
            for fn, is_guard in checks:
                w = fn(val)
                if (negconeg[w] if is_guard else w) == bot:
                    ok = False
                    break
            if ok and rec(i + 1):
                return True
        return False

    if rec(0):
        return Verdict(False, {name: val[j] for j, name in enumerate(order)}, nodes, "guarded-search")
    return Verdict(True, None, nodes, "guarded-search")


def is_valid_sweep(a: BiHeytingAlgebra, f: Formula, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Plain lexicographic sweep, no pruning (reference oracle)."""
    order = variables(f)
    total = a.k ** len(order)
    if total > budget:
        raise BudgetExceeded(total, budget)
    fn = compile_formula(a, f, order)
    for i, val in enumerate(itertools.product(range(a.k), repeat=len(order))):
        if fn(val) != a.top:
            return Verdict(False, dict(zip(order, val)), i + 1)
    return Verdict(True, None, total)


# -- bounded consequence ---------------------------------------------------------------
@dataclass(frozen=True)
class ConsequenceVerdict:
    holds: bool
    cap: int
    model: Poset | None = None
    coloring: dict[str, int] | None = None
    models_checked: int = 0

    def to_json(self) -> dict:
        out = {"verdict": "no-countermodel-up-to-cap" if self.holds else "refuted",
               "cap": self.cap, "models_checked": self.models_checked,
               "scope": "finite co-trees only"}
        if self.model is not None:
            out["model"] = self.model.to_json()
            out["coloring"] = {k: [self.model.labels[x] for x in bits(u)] for k, u in self.coloring.items()}
        return out


def consequence_bounded(sigma: Sequence[Formula], phi: Formula, cap: int,
                        max_cap: int = DEFAULT_MODEL_CAP) -> ConsequenceVerdict:
    """Search co-tree models up to ``cap`` points where all of ``sigma`` holds everywhere but ``phi`` does not."""
    if cap > max_cap:
        raise CapExceeded(f"model cap {cap} exceeds {max_cap}")
    order = sorted({v for g in [*sigma, phi] for v in variables(g)}, key=natural_key)
    checked = 0
    for p in enumerate_cotrees(cap, cap=max_cap):
        alg = upset_algebra(p)
        for start, cols, vals in sweep(alg, [*sigma, phi], order):
            ok = np.ones(len(vals[-1]), dtype=bool)
            for arr in vals[:-1]:
                ok &= arr == alg.top
            ok &= vals[-1] != alg.top
            hit = np.nonzero(ok)[0]
            if len(hit):
                i = int(hit[0])
                checked += start + i + 1
                coloring = {name: alg.upsets[int(cols[j][i])] for j, name in enumerate(order)}
                return ConsequenceVerdict(False, cap, p, coloring, checked)
            checked += len(vals[-1])
    return ConsequenceVerdict(True, cap, models_checked=checked)


def sinesi(f: Formula) -> Formula:
    """``~!~f``: holds (on a co-tree) exactly when ``f`` fails somewhere."""
    return Coneg(Neg(Coneg(f)))


@dataclass(frozen=True)
class InconsistencyReport:
    left: ConsequenceVerdict
    right: ConsequenceVerdict

    @property
    def agree(self) -> bool:
        return self.left.holds == self.right.holds

    def to_json(self) -> dict:
        return {"explodes": self.left.to_json(), "entails": self.right.to_json(), "agree": self.agree}


def inconsistency_lemma_check(sigma: Sequence[Formula], phi: Formula, cap: int,
                              max_cap: int = DEFAULT_MODEL_CAP) -> InconsistencyReport:
    """Compare ``sigma + {~!~phi} |= bot`` with ``sigma |= phi`` over co-tree models up to ``cap``."""
    left = consequence_bounded([*sigma, sinesi(phi)], BOT, cap, max_cap)
    right = consequence_bounded(sigma, phi, cap, max_cap)
    return InconsistencyReport(left, right)


# -- random formulas -----------------------------------------------------------------------
def random_formula(rng: random.Random, names: Sequence[str], depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.08:
            return TOP
        if r < 0.16:
            return BOT
        return Var(rng.choice(list(names)))
    kind = rng.randrange(6)
    if kind == 4:
        return Neg(random_formula(rng, names, depth - 1))
    if kind == 5:
        return Coneg(random_formula(rng, names, depth - 1))
    cls = (And, Or, Imp, Coimp)[kind]
    return cls(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def named_valuation(a: BiHeytingAlgebra, v: dict[str, int]) -> dict[str, str]:
    return {k: a.names[x] for k, x in v.items()}


def parse_many(texts: Iterable[str]) -> list[Formula]:
    return [parse(t) for t in texts]

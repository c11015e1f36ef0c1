"""Command line: ``cotree-lab VERB ACTION ...``.

Exit codes: 0 success, 1 refutation or discrepancy (certificate printed), 2 usage or budget error.

Formula grammar, loosest to tightest binding::

    formula := impl ("<->" impl)?
    impl    := disj ("->" impl)?  |  disj ("<-" disj)*      (-> and <- cannot mix)
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := ("!" | "~") unary | atom
    atom    := name | "top" | "bot" | "(" formula ")"

``!a`` is ``a -> bot`` and ``~a`` is ``top <- a``.  Posets and algebras are read from
JSON files or named shapes: ``chain:N``, ``cofork:N``, ``comb:N``, ``hodkinson:N``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import algebra as alg
from . import bisim, charform, formula, morphisms, poset, verify
from .poset import SCHEMA, CapExceeded, Poset, PosetError, bits, mask_of

NAMED = {"chain": poset.make_chain, "cofork": poset.make_cofork,
         "comb": poset.make_comb, "hodkinson": poset.make_hodkinson}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "")
        raise _HelpShown(message or "")


class _HelpShown(Exception):
    pass


# -- input loading --------------------------------------------------------------------
def _read(arg: str):
    path = Path(arg)
    if path.is_file():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"{arg}: malformed JSON ({exc})") from exc
    kind, _, n = arg.partition(":")
    if kind in NAMED and n.isdigit():
        return NAMED[kind](int(n))
    raise UsageError(f"{arg}: no such file or named shape")


def load_poset(arg: str) -> Poset:
    data = _read(arg)
    if isinstance(data, Poset):
        return data
    if "covers" not in data and "elements" in data and "tables" not in data:
        data = {**data, "covers": []}
    if "covers" not in data:
        raise UsageError(f"{arg}: not a poset file")
    return poset.from_json(data)


def load_algebra(arg: str) -> alg.BiHeytingAlgebra:
    data = _read(arg)
    if isinstance(data, Poset):
        return alg.upset_algebra(data)
    if "covers" in data:
        return alg.upset_algebra(poset.from_json(data))
    return alg.from_json(data)


def _element(a: alg.BiHeytingAlgebra, name: str) -> int:
    if name in a.names:
        return a.names.index(name)
    raise UsageError(f"unknown element {name!r}")


def _subset(p: Poset, text: str) -> int:
    labels = json.loads(text)
    try:
        return mask_of(p.index(str(x)) for x in labels)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"unknown point in {text}") from exc


# -- verbs --------------------------------------------------------------------------------
def _poset(args) -> tuple[int, object]:
    if args.action == "make":
        if args.kind not in NAMED:
            raise UsageError(f"unknown shape {args.kind!r}")
        p = NAMED[args.kind](args.n)
    elif args.action == "show":
        p = load_poset(args.poset)
    elif args.action == "random":
        p = (poset.random_coforest if args.forest else poset.random_cotree)(args.size, args.seed)
    else:
        gen = {"cotree": poset.enumerate_cotrees, "coforest": poset.enumerate_coforests,
               "poset": poset.enumerate_posets}[args.kind]
        return 0, {"schema": SCHEMA, "kind": args.kind, "max_size": args.max_size,
                   "posets": [q.to_json() for q in gen(args.max_size)]}
    if getattr(args, "dot", False):
        return 0, p.to_dot()
    out = p.to_json()
    if args.action == "show":
        out["info"] = {"co_tree": poset.is_co_tree(p), "co_forest": poset.is_co_forest(p),
                       "depth": poset.depth(p), "width": poset.width(p), "upsets": len(poset.all_upsets(p))}
    return 0, out


def _algebra(args) -> tuple[int, object]:
    if args.action == "from-poset":
        return 0, alg.upset_algebra(load_poset(args.source)).to_json()
    a = load_algebra(args.source)
    if args.action == "dual":
        q, iso = alg.dual_poset(a)
        return 0, {**q.to_json(), "iso": list(iso.map)}
    if args.action == "si-check":
        q, _ = alg.dual_poset(a)
        si = alg.is_SI(a)
        return (0 if si else 1), {"schema": SCHEMA, "si": si, "bi_godel": alg.is_bi_godel(a),
                                  "dual_is_co_tree": poset.is_co_tree(q)}
    return 0, {"schema": SCHEMA, "gen_rank": alg.gen_rank(a, cap=args.cap), "size": a.k}


def _formula(args) -> tuple[int, object]:
    f = formula.parse(args.text)
    if args.action == "parse":
        return 0, {"schema": SCHEMA, "formula": formula.to_text(f), "variables": formula.variables(f),
                   "size": formula.size(f)}
    a = load_algebra(args.algebra)
    if args.action == "eval":
        v = {}
        for item in args.valuation:
            name, _, value = item.partition("=")
            v[name] = _element(a, value)
        missing = [x for x in formula.variables(f) if x not in v]
        if missing:
            raise UsageError(f"unbound variables: {', '.join(missing)}")
        value = formula.eval_formula(a, f, v)
        return 0, {"schema": SCHEMA, "value": a.names[value], "is_top": value == a.top}
    verdict = formula.is_valid(a, f, args.budget)
    return (0 if verdict.valid else 1), {"schema": SCHEMA, **verdict.to_json(a)}


def _domain(a, text: str | None):
    if text is None:
        return charform.StableDomain.full(a)
    pairs = json.loads(text)
    return charform.StableDomain.of(a, [(_element(a, str(x)), _element(a, str(y))) for x, y in pairs])


def _charform(args) -> tuple[int, object]:
    if args.action == "patterns":
        f = formula.parse(args.text)
        pats = charform.refutation_patterns(f, args.cap)
        return 0, {"schema": SCHEMA, "size_cap": args.cap, "count": len(pats),
                   "patterns": [pt.to_json() for pt in pats]}
    if args.action == "check":
        a, b = load_algebra(args.source), load_algebra(args.target)
        if args.kind == "stable":
            r = charform.check_stable_refutation(b, a, _domain(a, args.domain), args.budget)
        elif args.kind == "jankov":
            r = charform.check_jankov_refutation(b, a, args.budget)
        else:
            r = charform.check_subframe_refutation(b, a, args.budget)
        return (0 if r.agree else 1), {"schema": SCHEMA, **r.to_json()}
    a = load_algebra(args.source)
    if args.action == "gamma":
        f = charform.gamma(a, _domain(a, args.domain))
    else:
        f = {"jankov": charform.jankov, "subframe": charform.beta}[args.action](a)
    return 0, {"schema": SCHEMA, "formula": formula.to_text(f), "variables": len(formula.variables(f))}


def _morph(args) -> tuple[int, object]:
    if args.action == "antichain":
        ps = [load_poset(x) for x in args.posets]
        return 0, {"schema": SCHEMA, "posets": args.posets,
                   "matrix": morphisms.antichain_matrix(ps, args.budget)}
    if args.action == "comb-quotient":
        x = load_poset(args.poset)
        q = morphisms.comb_quotient(x, args.n, args.budget)
        lab = x.labels
        return 0, {"schema": SCHEMA, "morphism": q.morphism.to_json(), "embedding": q.embedding.to_json(),
                   "blocks": [[lab[y] for y in bits(b)] for b in q.blocks],
                   "tooth_blocks": [[lab[y] for y in bits(b)] for b in q.tooth_blocks]}
    p, q = load_poset(args.source), load_poset(args.target)
    find = (morphisms.find_surjective_bi_p_morphism if args.action == "find-surjection"
            else morphisms.find_order_embedding)
    m = find(p, q, args.budget)
    return 0, {"schema": SCHEMA, "found": m is not None, "map": m.to_json() if m else None}


def _colors(p: Poset, args) -> tuple[Poset, tuple[int, ...]]:
    if args.comb:
        frame = bisim.comb_coloring(args.comb)
        return frame.poset, frame.colors
    return p, tuple(_subset(p, c) for c in args.color)


def _bisim(args) -> tuple[int, object]:
    if args.action == "ktable":
        return 0, {"schema": SCHEMA, **bisim.ktable(args.n, args.m, args.size_cap, args.rank_cap)}
    p = load_poset(args.poset) if args.poset else None
    if args.action == "check":
        blocks = [_subset(p, json.dumps(b)) for b in json.loads(args.blocks)]
        e = bisim.EquivPartition(p, tuple(blocks))
        ok = bisim.is_bi_bisimulation(p, e)
        return (0 if ok else 1), {"schema": SCHEMA, "bi_bisimulation": ok, **e.to_json()}
    if args.action == "depth-bound":
        r = bisim.depth_bound_check(p, args.n, args.rank_cap)
        return (0 if r.holds else 1), {"schema": SCHEMA, **r.to_json()}
    if p is None and not args.comb:
        raise UsageError("give a poset or --comb N")
    p, colors = _colors(p, args)
    if args.action == "generates":
        return 0, {"schema": SCHEMA, "generates": bisim.generates_upsets(p, colors)}
    r = bisim.coloring_theorem_check(p, colors, args.cap)
    return (0 if r.agree else 1), {"schema": SCHEMA, **r.to_json()}


def _verify(args) -> tuple[int, object]:
    overrides = {}
    fields = {f.name: f for f in dataclasses.fields(verify.RunConfig)}
    for item in args.set:
        key, _, value = item.partition("=")
        key = key.replace("-", "_")
        if key not in fields or key == "output":
            raise UsageError(f"unknown setting {key!r}")
        overrides[key] = int(value)
    for key in ("seed", "budget", "max_source", "max_target"):
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    try:
        cfg = verify.RunConfig(**overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    names = verify.ACCEPTANCE_ORDER if args.suite == "all" else [args.suite]
    if any(n not in verify.SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(verify.ACCEPTANCE_ORDER)}")
    reports = [verify.verify_suite(n, cfg) for n in names]
    code = 0 if all(r.ok for r in reports) else 1
    body = [r.to_json(args.timing) for r in reports]
    return code, body[0] if len(body) == 1 else {"schema": SCHEMA, "reports": body}


# -- parser ---------------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="cotree-lab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    top.add_argument("--format", choices=("json", "text"), default="json")
    verbs = top.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = verbs.add_parser("poset").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = p.add_parser("make")
    s.add_argument("kind", help="chain, cofork, comb or hodkinson")
    s.add_argument("n", type=int)
    s.add_argument("--dot", action="store_true")
    s = p.add_parser("show")
    s.add_argument("poset")
    s.add_argument("--dot", action="store_true")
    s = p.add_parser("enumerate")
    s.add_argument("--max-size", type=int, required=True)
    s.add_argument("--kind", choices=("cotree", "coforest", "poset"), default="cotree")
    s = p.add_parser("random")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--forest", action="store_true")
    s.add_argument("--dot", action="store_true")

    a = verbs.add_parser("algebra").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("from-poset", "dual", "si-check", "gen-rank"):
        s = a.add_parser(name)
        s.add_argument("source")
        if name == "gen-rank":
            s.add_argument("--cap", type=int, default=alg.DEFAULT_GEN_RANK_CAP)

    f = verbs.add_parser("formula").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = f.add_parser("parse")
    s.add_argument("text")
    s = f.add_parser("eval")
    s.add_argument("--algebra", required=True)
    s.add_argument("--valuation", action="append", default=[], metavar="VAR=ELEMENT")
    s.add_argument("text")
    s = f.add_parser("valid")
    s.add_argument("--algebra", required=True)
    s.add_argument("--budget", type=int, default=formula.DEFAULT_BUDGET)
    s.add_argument("text")

    c = verbs.add_parser("charform").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("gamma", "jankov", "subframe"):
        s = c.add_parser(name)
        s.add_argument("source")
        if name == "gamma":
            s.add_argument("--domain", help='JSON list of element-name pairs; default all pairs')
    s = c.add_parser("check")
    s.add_argument("kind", choices=("stable", "jankov", "subframe"))
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--domain")
    s.add_argument("--budget", type=int, default=formula.DEFAULT_BUDGET)
    s = c.add_parser("patterns")
    s.add_argument("text")
    s.add_argument("--cap", type=int, default=3)

    m = verbs.add_parser("morph").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("find-surjection", "find-embedding"):
        s = m.add_parser(name)
        s.add_argument("source")
        s.add_argument("target")
        s.add_argument("--budget", type=int, default=morphisms.DEFAULT_NODE_BUDGET)
    s = m.add_parser("comb-quotient")
    s.add_argument("poset")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--budget", type=int, default=morphisms.DEFAULT_NODE_BUDGET)
    s = m.add_parser("antichain")
    s.add_argument("posets", nargs="+")
    s.add_argument("--budget", type=int, default=morphisms.DEFAULT_NODE_BUDGET)

    b = verbs.add_parser("bisim").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = b.add_parser("check")
    s.add_argument("poset")
    s.add_argument("--blocks", required=True, help='JSON list of label lists')
    for name in ("generates", "coloring-theorem"):
        s = b.add_parser(name)
        s.add_argument("poset", nargs="?")
        s.add_argument("--color", action="append", default=[], help="JSON list of labels forming an upset")
        s.add_argument("--comb", type=int, help="use the one-color comb frame of this size")
        s.add_argument("--cap", type=int, default=bisim.DEFAULT_PARTITION_CAP)
    s = b.add_parser("depth-bound")
    s.add_argument("poset")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rank-cap", type=int, default=1024)
    s = b.add_parser("ktable")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--size-cap", type=int, required=True)
    s.add_argument("--rank-cap", type=int, default=1024)
    s.set_defaults(poset=None)

    v = verbs.add_parser("verify")
    v.add_argument("suite", help="suite name or 'all'")
    v.add_argument("--seed", type=int)
    v.add_argument("--budget", type=int)
    v.add_argument("--max-source", type=int)
    v.add_argument("--max-target", type=int)
    v.add_argument("--set", action="append", default=[], metavar="FIELD=INT",
                   help="override any integer RunConfig field")
    v.add_argument("--timing", action="store_true", help="include wall time (output no longer reproducible)")
    return top


HANDLERS = {"poset": _poset, "algebra": _algebra, "formula": _formula, "charform": _charform,
            "morph": _morph, "bisim": _bisim, "verify": _verify}


def _text(body) -> str:
    if isinstance(body, str):
        return body
    if isinstance(body, dict) and body.get("verdict") in ("valid", "refuted"):
        line = body["verdict"]
        if body.get("countervaluation"):
            line += " " + " ".join(f"{k}={v}" for k, v in body["countervaluation"].items())
        return line + "\n"
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def run_command(argv: list[str]) -> tuple[int, str]:
    """Run one command; returns the exit code and everything meant for stdout."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, body = HANDLERS[args.verb](args)
    except _HelpShown:
        return 0, ""  # argparse already printed the help text
    except UsageError as exc:
        return 2, f"error: {exc}\n"
    except (formula.BudgetExceeded, morphisms.SearchBudgetExceeded, CapExceeded) as exc:
        return 2, f"budget error: {exc}\n"
    except formula.FormulaSyntaxError as exc:
        return 2, f"syntax error: {exc}\n"
    except (PosetError, alg.AlgebraError, charform.CharformError, morphisms.CombQuotientError,
            bisim.PreconditionError, KeyError, ValueError, json.JSONDecodeError) as exc:
        return 2, f"input error: {exc}\n"
    if args.format == "text":
        return code, _text(body)
    if isinstance(body, str):
        return code, body
    return code, json.dumps(body, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    (sys.stdout if code != 2 else sys.stderr).write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())

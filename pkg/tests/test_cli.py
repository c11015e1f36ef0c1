import json
import subprocess
import sys

import pytest

from cotree_lab.cli import run_command
from cotree_lab.morphisms import PosetMap, is_bi_p_morphism
from cotree_lab.poset import make_comb
from cotree_lab.verify import RunConfig


def run(*argv):
    code, out = run_command(list(argv))
    return code, out


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "3chain.json"
    code, out = run("poset", "make", "chain", "2")
    assert code == 0
    path.write_text(out)
    return str(path)


def test_formula_valid_example(chain_file):
    code, out = run("formula", "valid", "--algebra", chain_file, "(p->q)|(q->p)")
    assert code == 0 and json.loads(out)["verdict"] == "valid"
    code, out = run("--format", "text", "formula", "valid", "--algebra", chain_file, "(p->q)|(q->p)")
    assert (code, out.strip()) == (0, "valid")


def test_formula_refutation_exit_code(chain_file):
    code, out = run("formula", "valid", "--algebra", chain_file, "p | !p")
    body = json.loads(out)
    assert code == 1 and body["verdict"] == "refuted" and body["countervaluation"] == {"p": "{c2}"}


def test_formula_eval_and_parse(chain_file):
    code, out = run("formula", "eval", "--algebra", chain_file, "--valuation", "p={c2}", "p | !p")
    assert code == 0 and json.loads(out)["value"] == "{c2}"
    code, out = run("formula", "parse", "p <- q <- r")
    assert code == 0 and json.loads(out)["formula"] == "p <- q <- r"


def test_antichain_example(tmp_path):
    files = []
    for i in (0, 1):
        path = tmp_path / f"T{i}.json"
        path.write_text(run("poset", "make", "hodkinson", str(i))[1])
        files.append(str(path))
    code, out = run("morph", "antichain", *files)
    assert code == 0 and json.loads(out)["matrix"][0][1] == "incomparable"


def test_verify_jankov_small():
    code, out = run("verify", "jankov", "--max-source", "3", "--max-target", "4")
    body = json.loads(out)
    assert code == 0 and body["ok"] and body["instances"] > 0


def test_usage_errors():
    assert run("verify", "nosuch")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("formula", "parse", "p -> q <- r")[0] == 2
    assert run("formula", "valid", "--algebra", "missing.json", "p")[0] == 2
    assert run("verify", "duality", "--set", "si_size=0")[0] == 2


def test_malformed_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("poset", "show", str(bad))[0] == 2
    cyc = tmp_path / "cycle.json"
    cyc.write_text(json.dumps({"elements": ["a", "b"], "covers": [["a", "b"], ["b", "a"]]}))
    assert run("poset", "show", str(cyc))[0] == 2


def test_budget_error():
    code, _ = run("formula", "valid", "--algebra", "chain:4", "--budget", "5", "p | q | r")
    assert code == 2


def test_deterministic_output():
    argv = ["verify", "stable", "--seed", "7", "--set", "stable_instances=5"]
    assert run(*argv) == run(*argv)
    assert run("poset", "random", "--size", "6", "--seed", "3") == run("poset", "random", "--size", "6", "--seed", "3")


def test_certificates_recheck():
    code, out = run("morph", "find-surjection", "comb:2", "comb:1")
    body = json.loads(out)
    assert code == 0 and body["found"]
    assert is_bi_p_morphism(PosetMap(make_comb(2), make_comb(1), tuple(body["map"]["map"])))


def test_other_verbs():
    assert run("algebra", "si-check", "comb:2")[0] == 0
    assert json.loads(run("algebra", "gen-rank", "chain:2")[1])["gen_rank"] == 1
    assert run("charform", "check", "jankov", "--source", "chain:1", "--target", "comb:1")[0] == 0
    assert json.loads(run("bisim", "coloring-theorem", "--comb", "2")[1])["agree"]
    assert run("bisim", "check", "chain:3", "--blocks", '[["c1", "c3"], ["c2"]]')[0] == 1
    assert run("bisim", "depth-bound", "chain:5", "--n", "2")[0] == 0
    assert run("poset", "make", "comb", "2", "--dot")[1].startswith("digraph")
    code, out = run("charform", "patterns", "p | !p", "--cap", "2")
    assert code == 0 and json.loads(out)["count"] >= 1


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(budget=0)
    with pytest.raises(ValueError):
        RunConfig(output="xml")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cotree_lab", "poset", "make", "chain", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["schema"] == "cotree-lab/1"

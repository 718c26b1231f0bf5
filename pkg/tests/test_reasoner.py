import math
import random
from pathlib import Path
from statistics import linear_regression

import pytest

from cbdl.frontend import load_ontology, parse_ontology
from cbdl.reasoner import classify, entails, run_entailment, satisfiable
from cbdl.samples import ONTO2, chain_ontology
from cbdl.structure import StrategyKind

from semantics import countermodel_exists, random_alchiq

ONTOLOGIES = Path(__file__).resolve().parent.parent / "ontologies"
ALL = list(StrategyKind)


@pytest.mark.parametrize("k", ALL)
def test_onto2_queries(k):
    o = load_ontology(ONTO2)
    assert entails(o, "B0 SubClassOf B4", k)
    assert not entails(o, "B0 SubClassOf B2", k)
    assert not entails(o, "B0 SubClassOf B3", k)
    assert entails(o, "B0 SubClassOf B2 Or B3", k)
    assert satisfiable(o, "B0", k)


def test_chain_entailment():
    o = load_ontology(chain_ontology(2))
    assert entails(o, "B0 SubClassOf C0")
    assert not entails(o, "C0 SubClassOf B0")


def test_empty_ontology():
    o = load_ontology("")
    assert not entails(o, "B1 SubClassOf B2")
    assert satisfiable(o, "B")


def test_direct_contradiction():
    o = load_ontology("B And B SubClassOf Bottom")
    assert not satisfiable(o, "B")
    assert entails(o, "B SubClassOf C")


def test_query_forms():
    o = load_ontology(ONTO2)
    b0, b4 = (o.symbols.find_unary(n) for n in ("B0", "B4"))
    assert entails(o, ([(1, b0, -1)], [(1, b4, -1)]))
    assert run_entailment(o, "B0 SubClassOf B4").context == 0


def test_classify_examples():
    r = classify(load_ontology(chain_ontology(2)))
    assert {("B0", "C0"), ("B1", "C1"), ("B2", "C2")} <= r.subsumptions
    r = classify(load_ontology(ONTO2))
    assert r.subsumptions == {("B0", "B4"), ("B2", "B4"), ("B3", "B4")}
    assert r.unsatisfiable == frozenset()
    assert classify(load_ontology("")).subsumptions == frozenset()


def test_classify_roles_example():
    r = classify(load_ontology((ONTOLOGIES / "roles.dl").read_text()))
    assert r.subsumptions == {("Orphan", "Person"), ("Parent", "Related")}


def test_classify_reports_unsatisfiable():
    o = load_ontology("A SubClassOf B\nA SubClassOf C\nB And C SubClassOf Bottom\nD SubClassOf A")
    r = classify(o)
    assert r.unsatisfiable == {"A", "D"}
    text = r.to_text(include_stats=False)
    # unsatisfiable concepts are listed against Bottom only
    assert text == "A SubClassOf Bottom\nD SubClassOf Bottom\n"


def test_unsatisfiable_implies_everything():
    o = load_ontology("A SubClassOf AtLeast 1 R B\nB SubClassOf Bottom\nC SubClassOf D")
    assert not satisfiable(o, "A")
    for other in ("B", "C", "D"):
        assert entails(o, f"A SubClassOf {other}")


def test_result_text_has_stats_but_no_timing():
    r = classify(load_ontology(ONTO2))
    text = r.to_text()
    assert "# stats" in text and "wall" not in text
    assert text.splitlines()[:3] == ["B0 SubClassOf B4", "B2 SubClassOf B4", "B3 SubClassOf B4"]


def test_sharded_classification_matches_shared():
    o = load_ontology(chain_ontology(3) + ONTO2.replace("B", "D"))
    shared = classify(o)
    assert classify(o, jobs=1).subsumptions == shared.subsumptions
    assert classify(o, jobs=2).subsumptions == shared.subsumptions


def test_single_run_matches_per_query_runs():
    rng = random.Random(11)
    for _ in range(15):
        text = random_alchiq(rng, 3, ("r",), 6)
        o = load_ontology(text)
        r = classify(o)
        names = [n for n in o.symbols.unary_predicates if "." not in n]
        for a in names:
            for b in names:
                if a != b:
                    got = entails(load_ontology(text), f"{a} SubClassOf {b}")
                    assert got == ((a, b) in r.subsumptions or a in r.unsatisfiable), (text, a, b)


def _answers(text, k, seed=None):
    r = classify(load_ontology(text), k, seed=seed)
    return r.subsumptions, r.unsatisfiable


def test_strategy_independence_on_random_alchiq():
    rng = random.Random(5)
    for i in range(60):
        roles = ("r",) if i % 2 else ("r", "s")
        text = random_alchiq(rng, 3, roles, 8)
        first = _answers(text, StrategyKind.EAGER)
        for k in (StrategyKind.CAUTIOUS, StrategyKind.TRIVIAL):
            assert _answers(text, k) == first, text


def test_no_entailment_has_a_small_countermodel():
    rng = random.Random(9)
    checked = 0
    for i in range(80):
        roles, n = (("r",), 3) if i % 2 else (("r", "s"), 2)
        text = random_alchiq(rng, n, roles, 8)
        o = load_ontology(text)
        subs, unsat = _answers(text, StrategyKind.CAUTIOUS)
        axioms = parse_ontology(text)
        names = [c for c in o.symbols.unary_predicates if "." not in c]
        rnames = [r for r in o.symbols.binary_predicates if "." not in r]
        for a in names:
            for b in names + [None]:
                if a == b:
                    continue
                entailed = a in unsat or (b is not None and (a, b) in subs)
                if entailed:
                    checked += 1
                    assert not countermodel_exists(axioms, names, rnames, a, b), (text, a, b)
    assert checked > 50


def test_clause_growth_on_chain_is_polynomial():
    for k in (StrategyKind.CAUTIOUS, StrategyKind.EAGER):
        ns, sizes = [5, 10, 20, 40], []
        for n in ns:
            sizes.append(classify(load_ontology(chain_ontology(n)), k).stats["clauses"])
        slope, _ = linear_regression([math.log(n) for n in ns], [math.log(c) for c in sizes])
        assert slope <= 3, (k, sizes)

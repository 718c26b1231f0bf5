import pytest

from cbdl.clauses import check_context_clause
from cbdl.engine import Limits, ResourceLimitExceeded, Saturator
from cbdl.frontend import load_ontology
from cbdl.reasoner import make_structure, run_entailment
from cbdl.samples import ONTO2, chain_ontology
from cbdl.structure import StrategyKind

from builders import Builder


def setup(ontology_text, core=(), premises=(), strategy=StrategyKind.EAGER):
    o = load_ontology(ontology_text)
    b = Builder(o.symbols)
    d = make_structure(o, [])
    sat = Saturator(o, d, strategy, trace=True)
    ctx = sat.add_context([b.lit(a) for a in core])
    for text in premises:
        c = b.clause(text)
        ctx.store.add(c)
        ctx.store.activate(c)
    return sat, ctx, b


def live(ctx, b, *texts):
    return all(ctx.store.contains(b.clause(t)) for t in texts)


def test_core():
    sat, ctx, b = setup(ONTO2, core=["S(x,y)", "B1(x)"])
    sat.apply_core(ctx.id)
    assert set(ctx.store) == {b.clause("Top -> S(x,y)"), b.clause("Top -> B1(x)")}


def test_core_empty():
    sat, ctx, _ = setup(ONTO2)
    sat.apply_core(ctx.id)
    assert len(ctx.store) == 0


def test_hyper_single_premise():
    sat, ctx, b = setup(ONTO2, premises=["Top -> B0(x)"])
    sat.apply_hyper(ctx.id, b.clause("Top -> B0(x)"))
    assert live(ctx, b, "Top -> S(f1.1(x),x)", "Top -> B1(f1.1(x))")


def test_hyper_at_most_with_three_role_premises():
    prem = ["Top -> B1(x)", "Top -> S(x,y)", "Top -> S(x,f2.1(x))", "Top -> S(x,f3.1(x))"]
    sat, ctx, b = setup(ONTO2, premises=prem)
    sat.apply_hyper(ctx.id, b.clause("Top -> S(x,f3.1(x))"))
    assert live(ctx, b, "Top -> f2.1(x) = y | f3.1(x) = y | f3.1(x) = f2.1(x)")


def test_hyper_two_unary_premises():
    sat, ctx, b = setup(ONTO2, premises=["Top -> B2(x)", "B3(x) -> B3(x)"])
    sat.apply_hyper(ctx.id, b.clause("B3(x) -> B3(x)"))
    assert live(ctx, b, "B3(x) -> Bottom", "B3(x) -> B4(x)")


EQ_CASES = [
    ("Top -> B3(f3.1(x))", "Top -> f2.1(x) = y | f3.1(x) = y | f3.1(x) = f2.1(x)",
     "Top -> f2.1(x) = y | f3.1(x) = y | B3(f2.1(x))"),
    ("Top -> B3(f3.1(x))", "Top -> f2.1(x) = y | f3.1(x) = y",
     "Top -> B3(y) | f2.1(x) = y"),
    ("Top -> B2(f2.1(x))", "Top -> B3(y) | f2.1(x) = y",
     "Top -> B2(y) | B3(y)"),
]


@pytest.mark.parametrize("into, equation, result", EQ_CASES)
def test_eq(into, equation, result):
    sat, ctx, b = setup(ONTO2, core=["B1(x)", "S(x,y)"], premises=[into, equation])
    sat.apply_eq(ctx.id, b.clause(equation))
    assert live(ctx, b, result)


def test_eq_triggered_from_the_rewritten_side():
    into, equation, result = EQ_CASES[1]
    sat, ctx, b = setup(ONTO2, premises=[equation, into])
    sat.apply_eq(ctx.id, b.clause(into))
    assert live(ctx, b, result)


GF = "A SubClassOf AtLeast 1 S B\nA SubClassOf AtLeast 1 S C\n"   # f1.1 < f2.1


@pytest.mark.parametrize("premise, result", [
    ("Top -> B(x) | y != y", "Top -> B(x)"),
    ("Top -> f1.1(x) != f1.1(x)", "Top -> Bottom"),
])
def test_ineq(premise, result):
    sat, ctx, b = setup(GF, premises=[premise])
    sat.apply_ineq(ctx.id, b.clause(premise))
    assert live(ctx, b, result)


def test_ineq_needs_identical_sides():
    sat, ctx, b = setup(GF, premises=["Top -> f2.1(x) != f1.1(x)"])
    sat.apply_ineq(ctx.id, b.clause("Top -> f2.1(x) != f1.1(x)"))
    assert len(ctx.store) == 1


def test_factor():
    premise = "Top -> f2.1(x) = f1.1(x) | f2.1(x) = y"
    sat, ctx, b = setup(GF, premises=[premise])
    sat.apply_factor(ctx.id, b.clause(premise))
    assert live(ctx, b, "Top -> f1.1(x) != y | f2.1(x) = f1.1(x)")
    assert len(ctx.store) == 2


def test_factor_needs_shared_side():
    premise = "Top -> B(x) | f2.1(x) = y"
    sat, ctx, b = setup(GF, premises=[premise])
    sat.apply_factor(ctx.id, b.clause(premise))
    assert len(ctx.store) == 1


def _two_contexts(text, u_core, v_core, f_name):
    o = load_ontology(text)
    b = Builder(o.symbols)
    d = make_structure(o, [])
    sat = Saturator(o, d, StrategyKind.EAGER, trace=True)
    u = sat.add_context([b.lit(a) for a in u_core])
    v = sat.add_context([b.lit(a) for a in v_core])
    d.add_edge(u.id, v.id, o.symbols.find_function(f_name))
    return sat, u, v, b


def _put(ctx, c):
    ctx.store.add(c)
    ctx.store.activate(c)


def test_pred_with_body():
    sat, u, v, b = _two_contexts(ONTO2, ["B1(x)", "S(x,y)"], ["B2(x)"], "f2.1")
    prem = b.clause("Top -> f2.1(x) = y | f3.1(x) = y | B3(f2.1(x))")
    _put(u, prem)
    _put(v, b.clause("B3(x) -> Bottom"))
    sat.apply_pred_from_clause(v.id, b.clause("B3(x) -> Bottom"))
    assert u.store.contains(b.clause("Top -> f2.1(x) = y | f3.1(x) = y"))


def test_pred_triggered_by_predecessor_clause():
    sat, u, v, b = _two_contexts(ONTO2, ["B1(x)", "S(x,y)"], ["B2(x)"], "f2.1")
    _put(v, b.clause("B3(x) -> Bottom"))
    prem = b.clause("Top -> f2.1(x) = y | f3.1(x) = y | B3(f2.1(x))")
    _put(u, prem)
    sat.apply_pred_from_clause(u.id, prem)
    assert u.store.contains(b.clause("Top -> f2.1(x) = y | f3.1(x) = y"))


def test_pred_empty_body():
    sat, u, v, b = _two_contexts(ONTO2, ["B0(x)"], ["B1(x)", "S(x,y)"], "f1.1")
    c = b.clause("Top -> B2(y) | B3(y)")
    _put(v, c)
    sat.apply_pred_from_clause(v.id, c)
    assert u.store.contains(b.clause("Top -> B2(x) | B3(x)"))


def test_pred_ignores_non_pr_heads():
    sat, u, v, b = _two_contexts(ONTO2, ["B0(x)"], ["B1(x)", "S(x,y)"], "f1.1")
    c = b.clause("Top -> S(x,f2.1(x))")
    _put(v, c)
    sat.apply_pred_from_clause(v.id, c)
    assert len(u.store) == 0


def test_succ_creates_eager_successor_and_seeds():
    sat, ctx, b = setup(ONTO2, core=["B1(x)", "S(x,y)"], premises=[
        "Top -> B2(f2.1(x))", "Top -> S(x,f2.1(x))",
        "Top -> f2.1(x) = y | f3.1(x) = y | B3(f2.1(x))"])
    f2 = sat.ontology.symbols.find_function("f2.1")
    k1, k2 = sat.successor_triggers(ctx.id, f2)
    # S(y,x) is no trigger here: no ontology clause has S(z,x) in its body
    assert k1 == {b.lit("B2(x)")}
    assert k2 == {b.lit("B2(x)"), b.lit("B3(x)")}
    assert sat.apply_succ(ctx.id, f2)
    d = sat.structure
    (edge, target), = d.find_existing_edge(ctx.id, f2)
    assert target.core == k1
    assert target.store.contains(b.clause("B3(x) -> B3(x)"))
    assert not sat.apply_succ(ctx.id, f2)          # covered by the existing edge


def test_succ_needs_function_atoms():
    sat, ctx, b = setup(ONTO2, premises=["Top -> B1(x)"])
    assert not sat.apply_succ(ctx.id, sat.ontology.symbols.find_function("f2.1"))


def test_onto2_trace_is_golden(onto2):
    run = run_entailment(onto2, "B0 SubClassOf B4", StrategyKind.EAGER, trace=True)
    lines = [r.format(onto2.symbols) for r in run.saturator.records]
    assert lines[:3] == ["Init 0#0 <- []  Top -> B0(x)",
                         "Hyper 0#1 <- [O0, 0#0]  Top -> S(f1.1(x),x)",
                         "Hyper 0#2 <- [O1, 0#0]  Top -> B1(f1.1(x))"]
    assert "Pred 0#3 <- [1#10]  Top -> B2(x) | B3(x)" in lines
    assert lines[-3] == "Hyper 0#5 <- [O6, 0#4]  Top -> B4(x)"


def test_every_record_is_a_wellformed_context_clause():
    o = load_ontology(chain_ontology(3) + ONTO2.replace("B", "D"))
    for k in StrategyKind:
        run = run_entailment(o, "B0 SubClassOf C0", k, trace=True)
        for r in run.saturator.records:
            check_context_clause(r.clause)


def test_premises_exist_when_recorded(onto2):
    run = run_entailment(onto2, "B0 SubClassOf B4", StrategyKind.CAUTIOUS, trace=True)
    seen = set()
    for r in run.saturator.records:
        for ref in r.premises:
            if ref[0] != "O":
                assert ref in seen, (r, ref)
        seen.add((r.context, r.seq))


def test_empty_ontology_adds_only_init():
    o = load_ontology("")
    o.symbols.unary("B")
    run = run_entailment(o, "B SubClassOf Bottom", StrategyKind.CAUTIOUS)
    assert [len(c.store) for c in run.structure.contexts] == [1]


def test_clause_limit_aborts():
    o = load_ontology(chain_ontology(5))
    with pytest.raises(ResourceLimitExceeded):
        run_entailment(o, "B0 SubClassOf C0", limits=Limits(max_clauses=10))


def test_timeout_aborts():
    o = load_ontology(chain_ontology(30))
    with pytest.raises(ResourceLimitExceeded):
        run_entailment(o, "B0 SubClassOf C0", limits=Limits(timeout_secs=0.0))


def test_trace_callable_receives_records(onto2):
    got = []
    run_entailment(onto2, "B0 SubClassOf B4", trace=got.append)
    assert got and got[0].rule == "Init"

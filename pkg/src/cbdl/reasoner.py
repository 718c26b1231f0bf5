"""Entailment, satisfiability and classification on top of the saturation engine."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .clauses import ContextClause, QueryClause, query_clause
from .engine import Limits, SaturationStats, Saturator
from .frontend import Ontology, parse_query
from .orders import ContextTermOrder
from .structure import ContextStructure, StrategyKind
from .terms import B_X, NOARG


def _bx(p: int):
    return (B_X, p, NOARG)


def make_structure(ontology: Ontology, query_atoms) -> ContextStructure:
    """An empty structure whose order keeps Pr minimal and satisfies the query-side condition."""
    order = ContextTermOrder(ontology.triggers.pr, query_atoms)
    return ContextStructure(ontology.triggers, order, filler_atoms=ontology.filler_atoms)


@dataclass
class EntailmentRun:
    entailed: bool
    query: QueryClause
    structure: ContextStructure
    saturator: Saturator
    context: int
    stats: SaturationStats


def _as_query(ontology: Ontology, query) -> QueryClause:
    if isinstance(query, QueryClause):
        return query
    if isinstance(query, str):
        return parse_query(query, ontology.symbols)
    body, head = query
    return query_clause(body, head)


def run_entailment(ontology: Ontology, query, strategy: StrategyKind = StrategyKind.CAUTIOUS, *,
                   limits: Limits = Limits(), seed: int | None = None, trace=False) -> EntailmentRun:
    """Decide ``O |= query`` and keep the saturated structure for inspection."""
    q = _as_query(ontology, query)
    d = make_structure(ontology, q.head)
    sat = Saturator(ontology, d, strategy, limits=limits, seed=seed, trace=trace)
    ctx = sat.add_context(q.body, label="query")
    for a in sorted(q.body):
        sat.add_initial_clause(ctx.id, ContextClause(frozenset(), frozenset({a})))
    stats = sat.saturate()
    entailed = ctx.store.contains(ContextClause(q.body, q.head))
    return EntailmentRun(entailed, q, d, sat, ctx.id, stats)


def entails(ontology: Ontology, query, strategy: StrategyKind = StrategyKind.CAUTIOUS, **kw) -> bool:
    return run_entailment(ontology, query, strategy, **kw).entailed


def satisfiable(ontology: Ontology, concept, strategy: StrategyKind = StrategyKind.CAUTIOUS,
                **kw) -> bool:
    p = ontology.symbols.unary(concept) if isinstance(concept, str) else concept
    return not entails(ontology, query_clause([_bx(p)], []), strategy, **kw)


# -- classification ----------------------------------------------------------------

@dataclass
class ClassificationResult:
    subsumptions: frozenset
    unsatisfiable: frozenset
    stats: dict = field(default_factory=dict)
    structure: ContextStructure | None = field(default=None, repr=False, compare=False)

    def superclasses(self, name: str) -> set:
        return {b for a, b in self.subsumptions if a == name}

    def to_text(self, include_stats: bool = True) -> str:
        lines = sorted([f"{a} SubClassOf {b}" for a, b in self.subsumptions]
                       + [f"{a} SubClassOf Bottom" for a in self.unsatisfiable])
        if include_stats:
            lines.append("# stats")
            for key in ("contexts", "edges", "clauses", "inferences"):
                if key in self.stats:
                    lines.append(f"# {key} {self.stats[key]}")
        return "\n".join(lines) + "\n"


def _read_off(ontology: Ontology, store, p: int, candidates) -> tuple[bool, set]:
    name = ontology.symbols.unary_name
    body = frozenset({_bx(p)})
    if store.contains(ContextClause(body, frozenset())):
        return True, set()
    sups = set()
    for b in candidates:
        if b != p and store.contains(ContextClause(body, frozenset({_bx(b)}))):
            sups.add(name(b))
    return False, sups


def _classify_shared(ontology: Ontology, strategy, limits, seed, concepts, trace=False):
    everything = range(len(ontology.symbols.unary_predicates))
    d = make_structure(ontology, [_bx(p) for p in everything])
    sat = Saturator(ontology, d, strategy, limits=limits, seed=seed, trace=trace)
    contexts = {}
    for p in concepts:
        ctx = sat.add_context({_bx(p)}, label=f"query {ontology.symbols.unary_name(p)}")
        sat.add_initial_clause(ctx.id, ContextClause(frozenset(), frozenset({_bx(p)})))
        contexts[p] = ctx
    stats = sat.saturate()
    subs, unsat = set(), set()
    for p, ctx in contexts.items():
        bottom, sups = _read_off(ontology, ctx.store, p, everything)
        name = ontology.symbols.unary_name(p)
        if bottom:
            unsat.add(name)
        subs.update((name, s) for s in sups)
    return subs, unsat, stats, d


def _shard(args):
    ontology, strategy, limits, seed, p = args
    subs, unsat, stats, _ = _classify_shared(ontology, strategy, limits, seed, [p])
    return subs, unsat, stats


def classify(ontology: Ontology, strategy: StrategyKind = StrategyKind.CAUTIOUS, *,
             limits: Limits = Limits(), seed: int | None = None,
             jobs: int | None = None, trace=False) -> ClassificationResult:
    """All atomic subsumptions and unsatisfiable concepts.

    By default one structure holds a query context per concept and is saturated
    once. With ``jobs`` set, each concept gets its own structure and the runs are
    spread over that many worker processes.
    """
    start = time.monotonic()
    concepts = list(range(len(ontology.symbols.unary_predicates)))
    structure = None
    if jobs is None:
        subs, unsat, st, structure = _classify_shared(ontology, strategy, limits, seed,
                                                      concepts, trace)
        stats = st._asdict()
    else:
        subs, unsat = set(), set()
        stats = dict.fromkeys(SaturationStats._fields, 0)
        tasks = [(ontology, strategy, limits, seed, p) for p in concepts]
        if jobs <= 1:
            parts = [_shard(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_shard, tasks))
        for s, u, st in parts:
            subs |= s
            unsat |= u
            for k, val in st._asdict().items():
                stats[k] += val
    stats["wall_time"] = time.monotonic() - start
    return ClassificationResult(frozenset(subs), frozenset(unsat), stats, structure)


__all__ = [
    "ClassificationResult", "EntailmentRun", "classify", "entails",
    "make_structure", "run_entailment", "satisfiable",
]

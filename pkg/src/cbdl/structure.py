"""Context structures: contexts, f-labelled edges, indexed clause stores, expansion strategies."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .clauses import ContextClause, SubsumptionIndex, format_clause, is_head_tautology
from .frontend import TriggerSets
from .orders import ContextTermOrder
from .terms import (B_F, B_X, EQ, EQUALITY_TAGS, NOARG, S_FX, S_XF,
                    function_of, format_literal)


class AddResult(enum.Enum):
    ADDED = "added"
    REDUNDANT = "redundant"


class StrategyKind(enum.Enum):
    EAGER = "eager"
    CAUTIOUS = "cautious"
    TRIVIAL = "trivial"

    @classmethod
    def parse(cls, text: str) -> "StrategyKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown strategy {text!r} (eager, cautious or trivial)") from None


class Edge(NamedTuple):
    source: int
    target: int
    label: int


def eq_premise_key(lit) -> int | None:
    """f when ``lit`` is f(x) = t with f(x) > t, the left premise shape of Eq."""
    tag, l, r = lit
    if tag == EQ and l >= 0 and l > r:
        return l
    return None


def rewritable_function(lit) -> int | None:
    """The f whose f(x) sits in the maximal side of ``lit`` (right premise of Eq)."""
    tag, l, r = lit
    if tag in EQUALITY_TAGS:
        return l if l >= 0 and l > r else None
    return function_of(lit)


class ClauseStore:
    """S(v) together with the retrieval indexes the rules need.

    Every live clause is in ``index`` (used for redundancy). Only clauses that
    the engine has activated appear in the rule indexes, so each inference is
    attempted once, when its last premise becomes active.
    """

    def __init__(self, order: ContextTermOrder, pr: frozenset):
        self.order = order
        self._pr = pr
        self.index = SubsumptionIndex()
        self.seq: dict = {}
        self.eligible: dict = {}
        self.active: set = set()
        self.by_lit: dict = {}
        self.by_role_fn: dict = {}
        self.by_fn: dict = {}
        self.eq_by_f: dict = {}
        self.pred_clauses: set = set()
        self.pred_by_body: dict = {}
        self._next_seq = 0

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self) -> Iterator[ContextClause]:
        return iter(self.index)

    def __contains__(self, c) -> bool:
        return c in self.index

    def contains(self, c: ContextClause) -> bool:
        return self.index.contains(c)

    def is_pred_clause(self, c: ContextClause) -> bool:
        return all(l[0] not in EQUALITY_TAGS and l in self._pr for l in c.head)

    def add(self, c: ContextClause) -> tuple[AddResult, list]:
        if is_head_tautology(c) or self.index.find_subsumer(c) is not None:
            return AddResult.REDUNDANT, []
        removed = self.index.find_subsumed(c)
        for d in removed:
            self.remove(d)
        self.index.add(c)
        self.seq[c] = self._next_seq
        self._next_seq += 1
        self.eligible[c] = self.order.eligible(c.head)
        return AddResult.ADDED, removed

    def remove(self, c: ContextClause) -> None:
        self.index.remove(c)
        self.seq.pop(c, None)
        elig = self.eligible.pop(c, ())
        if c not in self.active:
            return
        self.active.discard(c)
        for lit in elig:
            self.by_lit[lit].discard(c)
            tag = lit[0]
            if tag in (S_XF, S_FX):
                self.by_role_fn[(tag, lit[1])].discard((c, lit))
            f = rewritable_function(lit)
            if f is not None:
                self.by_fn[f].discard((c, lit))
            f = eq_premise_key(lit)
            if f is not None:
                self.eq_by_f[f].discard((c, lit))
        if c in self.pred_clauses:
            self.pred_clauses.discard(c)
            for a in c.body:
                self.pred_by_body[a].discard(c)

    def activate(self, c: ContextClause) -> bool:
        """Put a live clause into the rule indexes; False if it died meanwhile."""
        if c not in self.index or c in self.active:
            return False
        self.active.add(c)
        for lit in self.eligible[c]:
            self.by_lit.setdefault(lit, set()).add(c)
            tag = lit[0]
            if tag in (S_XF, S_FX):
                self.by_role_fn.setdefault((tag, lit[1]), set()).add((c, lit))
            f = rewritable_function(lit)
            if f is not None:
                self.by_fn.setdefault(f, set()).add((c, lit))
            f = eq_premise_key(lit)
            if f is not None:
                self.eq_by_f.setdefault(f, set()).add((c, lit))
        if self.is_pred_clause(c):
            self.pred_clauses.add(c)
            for a in c.body:
                self.pred_by_body.setdefault(a, set()).add(c)
        return True

    def clauses_with_eligible(self, lit) -> Iterable[ContextClause]:
        return self.by_lit.get(lit, ())

    def sorted_clauses(self) -> list:
        return sorted(self.index, key=self.seq.__getitem__)


@dataclass(eq=False)
class Context:
    id: int
    core: frozenset
    order: ContextTermOrder
    store: ClauseStore
    label: str = ""

    def __repr__(self) -> str:
        return f"Context(#{self.id}, core={sorted(self.core)}, clauses={len(self.store)})"


@dataclass
class ContextStructure:
    triggers: TriggerSets
    order: ContextTermOrder
    filler_atoms: dict = field(default_factory=dict)
    contexts: list = field(default_factory=list)
    edges: set = field(default_factory=set)
    out_edges: dict = field(default_factory=dict)
    in_edges: dict = field(default_factory=dict)
    by_core: dict = field(default_factory=dict)

    def new_context(self, core: Iterable, order: ContextTermOrder | None = None,
                    label: str = "") -> Context:
        core = frozenset(core)
        order = order if order is not None else self.order
        ctx = Context(len(self.contexts), core, order, ClauseStore(order, self.triggers.pr), label)
        self.contexts.append(ctx)
        self.by_core.setdefault(core, ctx.id)
        self.out_edges[ctx.id] = {}
        self.in_edges[ctx.id] = set()
        return ctx

    def context(self, v: int) -> Context:
        if not 0 <= v < len(self.contexts):
            raise KeyError(f"unknown context {v}")
        return self.contexts[v]

    def add_clause(self, v: int, c: ContextClause) -> AddResult:
        return self.context(v).store.add(c)[0]

    def add_edge(self, u: int, v: int, f: int) -> bool:
        e = Edge(u, v, f)
        if e in self.edges:
            return False
        self.edges.add(e)
        self.out_edges[u].setdefault(f, set()).add(v)
        self.in_edges[v].add((u, f))
        return True

    def find_existing_edge(self, u: int, f: int) -> list:
        return [(Edge(u, v, f), self.contexts[v])
                for v in sorted(self.out_edges.get(u, {}).get(f, ()))]

    def clauses_with_eligible_atom(self, v: int, lit) -> Iterator[tuple]:
        store = self.context(v).store
        for c in sorted(store.index, key=store.seq.__getitem__):
            if lit in store.eligible[c]:
                yield c, lit

    def num_clauses(self) -> int:
        return sum(len(c.store) for c in self.contexts)

    # -- export --

    def to_text(self, symbols=None, with_clauses: bool = False) -> str:
        fmt = lambda a: format_literal(a, symbols)  # noqa: E731
        lines = [f"# contexts {len(self.contexts)} edges {len(self.edges)}"]
        for ctx in self.contexts:
            core = ", ".join(sorted(fmt(a) for a in ctx.core)) or "Top"
            tag = f" {ctx.label}" if ctx.label else ""
            lines.append(f"context {ctx.id}{tag} core [{core}] clauses {len(ctx.store)}")
            if with_clauses:
                for c in ctx.store.sorted_clauses():
                    lines.append(f"  {ctx.store.seq[c]}: {format_clause(c, symbols)}")
        for e in sorted(self.edges):
            name = symbols.function_name(e.label) if symbols is not None else f"f{e.label}"
            lines.append(f"edge {e.source} {name} {e.target}")
        return "\n".join(lines) + "\n"

    def to_dot(self, symbols=None) -> str:
        fmt = lambda a: format_literal(a, symbols)  # noqa: E731
        lines = ["digraph contexts {", "  node [shape=box];"]
        for ctx in self.contexts:
            core = "\\n".join(sorted(fmt(a) for a in ctx.core)) or "Top"
            label = f"v{ctx.id}\\n{core}".replace('"', '\\"')
            lines.append(f'  v{ctx.id} [label="{label}"];')
        for e in sorted(self.edges):
            name = symbols.function_name(e.label) if symbols is not None else f"f{e.label}"
            lines.append(f'  v{e.source} -> v{e.target} [label="{name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def strategy_apply(kind: StrategyKind, f: int, k1: Iterable, d: ContextStructure):
    """Return ``(existing context id or None, core, order)`` for a Succ step on f."""
    k1 = frozenset(k1)
    if kind is StrategyKind.EAGER:
        core = k1
    elif kind is StrategyKind.CAUTIOUS:
        fillers = d.filler_atoms.get(f, ())
        core = frozenset()
        if len(fillers) == 1:
            (atom,) = fillers
            b = (B_X, atom[1], NOARG)
            if atom[0] == B_F and b in k1:
                core = frozenset({b})
    else:
        core = frozenset()
    return d.by_core.get(core), core, d.order


__all__ = [
    "AddResult", "ClauseStore", "Context", "ContextStructure", "Edge",
    "StrategyKind", "eq_premise_key", "rewritable_function", "strategy_apply",
]

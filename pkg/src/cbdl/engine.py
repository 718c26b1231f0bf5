"""The eight inference rules and a fair saturation loop over a context structure."""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Callable, NamedTuple

from .clauses import ContextClause, check_context_clause, format_clause
from .frontend import Ontology
from .structure import (AddResult, Context, ContextStructure, Edge, StrategyKind,
                        eq_premise_key, rewritable_function, strategy_apply)
from .terms import (B_F, B_X, EQ, EQUALITY_TAGS, NEQ, S_FX, S_XF, S_XY,
                    S_XZ, S_YX, S_ZX, MalformedTermError, Y, apply_hyper_subst,
                    eq, neq, replace_f_subterm, shift_from_successor,
                    shift_to_successor, z_index)


class ResourceLimitExceeded(RuntimeError):
    """Saturation was aborted by a clause-count or wall-clock cap."""


class InvariantViolation(RuntimeError):
    """A rule produced something the calculus can never produce."""


@dataclass(frozen=True)
class Limits:
    max_clauses: int = 10_000_000
    timeout_secs: float = 300.0


class WorkItem(NamedTuple):
    kind: str            # "context", "clause" or "edge"
    context: int
    payload: object = None


class DerivationRecord(NamedTuple):
    rule: str
    context: int
    seq: int
    premises: tuple      # ("O", clause index) or (context id, seq)
    clause: ContextClause

    def format(self, symbols=None) -> str:
        refs = ", ".join(f"O{p[1]}" if p[0] == "O" else f"{p[0]}#{p[1]}" for p in self.premises)
        return f"{self.rule} {self.context}#{self.seq} <- [{refs}]  {format_clause(self.clause, symbols)}"


class SaturationStats(NamedTuple):
    contexts: int
    edges: int
    clauses: int
    derived: int
    inferences: int


# body-atom classes for the Hyper index
_K_B, _K_XZ, _K_ZX = 0, 1, 2
_LIT_CLASS = {B_X: _K_B, S_XY: _K_XZ, S_XF: _K_XZ, S_YX: _K_ZX, S_FX: _K_ZX}
_BODY_CLASS = {B_X: _K_B, S_XZ: _K_XZ, S_ZX: _K_ZX}
_Y_SHAPE = {S_XZ: S_XY, S_ZX: S_YX}
_F_SHAPE = {S_XZ: S_XF, S_ZX: S_FX}
_BIND_SHAPES = {S_XY: Y, S_YX: Y}


class Saturator:
    def __init__(self, ontology: Ontology, structure: ContextStructure,
                 strategy: StrategyKind = StrategyKind.CAUTIOUS, *,
                 limits: Limits = Limits(), seed: int | None = None,
                 trace: bool | Callable = False, check_invariants: bool = True):
        self.ontology = ontology
        self.structure = structure
        self.strategy = strategy
        self.limits = limits
        self.check_invariants = check_invariants
        self.rng = random.Random(seed) if seed is not None else None
        self.records: list[DerivationRecord] | None = [] if trace else None
        self._trace_sink = trace if callable(trace) else None
        self.queue: deque = deque()
        self.succ_pending: dict = {}
        self.inferences = 0
        self.derived = 0
        self._deadline = None
        self._ticks = 0
        self.su = ontology.triggers.su
        self.hyper_index: dict = {}
        self.empty_body: list = []
        for idx, c in enumerate(ontology.clauses):
            if not c.body:
                self.empty_body.append(idx)
            for pos, a in enumerate(c.body):
                key = (_BODY_CLASS[a[0]], a[1])
                self.hyper_index.setdefault(key, []).append((idx, pos))

    # -- bookkeeping -----------------------------------------------------

    def add_context(self, core, label: str = "") -> Context:
        ctx = self.structure.new_context(core, label=label)
        self.queue.append(WorkItem("context", ctx.id))
        return ctx

    def add_initial_clause(self, v: int, c: ContextClause) -> AddResult:
        return self._add(v, c, "Init", ())

    def _add(self, v: int, c: ContextClause, rule: str, premises) -> AddResult:
        self.inferences += 1
        if self.check_invariants:
            try:
                check_context_clause(c)
            except MalformedTermError as exc:
                raise InvariantViolation(f"{rule} produced a malformed clause: {exc}") from None
        store = self.structure.contexts[v].store
        result, _ = store.add(c)
        if result is AddResult.ADDED:
            self.derived += 1
            if self.derived > self.limits.max_clauses:
                raise ResourceLimitExceeded(f"more than {self.limits.max_clauses} clauses derived")
            self.queue.append(WorkItem("clause", v, c))
            if self.records is not None:
                rec = DerivationRecord(rule, v, store.seq[c], tuple(premises), c)
                self.records.append(rec)
                if self._trace_sink is not None:
                    self._trace_sink(rec)
        return result

    def _refs(self, v: int, clauses) -> tuple:
        if self.records is None:
            return ()
        seq = self.structure.contexts[v].store.seq
        return tuple((v, seq.get(c, -1)) for c in clauses)

    def _pop(self, q):
        if self.rng is None or len(q) < 2:
            return q.popleft()
        i = self.rng.randrange(len(q))
        q[i], q[0] = q[0], q[i]
        return q.popleft()

    def _tick(self) -> None:
        self._ticks += 1
        if self._deadline is not None and self._ticks % 512 == 1 and time.monotonic() > self._deadline:
            raise ResourceLimitExceeded(f"timeout after {self.limits.timeout_secs} s")

    # -- main loop -------------------------------------------------------------

    def saturate(self) -> SaturationStats:
        self._deadline = time.monotonic() + self.limits.timeout_secs
        while self.queue or self.succ_pending:
            self._tick()
            if self.queue:
                item = self._pop(self.queue)
                if item.kind == "clause":
                    self._process_clause(item.context, item.payload)
                elif item.kind == "context":
                    self._process_context(item.context)
                else:
                    self._process_edge(item.payload)
            else:
                if self.rng is None:
                    key = next(iter(self.succ_pending))
                else:
                    key = self.rng.choice(list(self.succ_pending))
                del self.succ_pending[key]
                self.apply_succ(*key)
        return self.stats()

    def stats(self) -> SaturationStats:
        d = self.structure
        return SaturationStats(len(d.contexts), len(d.edges), d.num_clauses(),
                               self.derived, self.inferences)

    def _process_context(self, v: int) -> None:
        self.apply_core(v)
        for idx in self.empty_body:
            dl = self.ontology.clauses[idx]
            self._add(v, ContextClause(frozenset(), frozenset(dl.head)), "Hyper", (("O", idx),))

    def _process_clause(self, v: int, c: ContextClause) -> None:
        store = self.structure.contexts[v].store
        if not store.activate(c):
            return
        for lit in store.eligible[c]:
            if lit[0] in (B_F, S_XF, S_FX):
                self.succ_pending[(v, lit[2])] = None
        # a conclusion may subsume c itself; its subsumer takes over from there
        for rule in (self.apply_ineq, self.apply_factor, self.apply_hyper,
                     self.apply_eq, self.apply_pred_from_clause):
            if c not in store.active:
                return
            rule(v, c)

    def _process_edge(self, e: Edge) -> None:
        store_v = self.structure.contexts[e.target].store
        for p in sorted(store_v.pred_clauses, key=store_v.seq.__getitem__):
            self._pred(e, p)

    # -- Core ------------------------------------------------------------------

    def apply_core(self, v: int) -> None:
        ctx = self.structure.contexts[v]
        for a in sorted(ctx.core):
            c = ContextClause(frozenset(), frozenset({a}))
            if c not in ctx.store:
                self._add(v, c, "Core", ())

    # -- Hyper -----------------------------------------------------------------

    def _candidates(self, store, atom, zmap):
        tag, p, zv = atom
        if tag == B_X:
            lit = atom
            return [(c, lit, zmap) for c in store.by_lit.get(lit, ())]
        i = z_index(zv)
        bound = zmap.get(i)
        if bound is not None:
            lit = (_Y_SHAPE[tag], p, -1) if bound == Y else (_F_SHAPE[tag], p, bound)
            return [(c, lit, zmap) for c in store.by_lit.get(lit, ())]
        out = []
        ylit = (_Y_SHAPE[tag], p, -1)
        if ylit in store.by_lit:
            z2 = {**zmap, i: Y}
            out.extend((c, ylit, z2) for c in store.by_lit[ylit])
        for c, lit in store.by_role_fn.get((_F_SHAPE[tag], p), ()):
            out.append((c, lit, {**zmap, i: lit[2]}))
        return out

    @staticmethod
    def _match(atom, lit, zmap):
        tag, p, zv = atom
        if tag == B_X:
            return zmap if atom == lit else None
        if lit[1] != p or _LIT_CLASS.get(lit[0]) != _BODY_CLASS[tag]:
            return None
        t = Y if lit[0] in _BIND_SHAPES else lit[2]
        i = z_index(zv)
        if zmap.get(i, t) != t:
            return None
        return {**zmap, i: t}

    def apply_hyper(self, v: int, c: ContextClause) -> None:
        store = self.structure.contexts[v].store
        results = []
        for lit in store.eligible[c]:
            cls = _LIT_CLASS.get(lit[0])
            if cls is None:
                continue
            for idx, pos in self.hyper_index.get((cls, lit[1]), ()):
                dl = self.ontology.clauses[idx]
                zmap = self._match(dl.body[pos], lit, {})
                if zmap is None:
                    continue
                others = [j for j in range(len(dl.body)) if j != pos]
                chosen = {pos: (c, lit)}
                self._hyper_rec(store, dl, others, 0, zmap, chosen, idx, results)
        for rule_idx, premises, clause in results:
            self._add(v, clause, "Hyper", (("O", rule_idx),) + self._refs(v, premises))

    def _hyper_rec(self, store, dl, others, k, zmap, chosen, idx, results):
        if k == len(others):
            body, head, prem = set(), set(), []
            for c, lit in chosen.values():
                body |= c.body
                head |= c.head - {lit}
                prem.append(c)
            head.update(apply_hyper_subst(d, zmap) for d in dl.head)
            results.append((idx, prem, ContextClause(frozenset(body), frozenset(head))))
            return
        j = others[k]
        for c, lit, z2 in self._candidates(store, dl.body[j], zmap):
            chosen[j] = (c, lit)
            self._hyper_rec(store, dl, others, k + 1, z2, chosen, idx, results)
        chosen.pop(j, None)

    # -- Eq, Ineq, Factor ------------------------------------------------------------

    @staticmethod
    def _paramodulant(c1, l1, c2, l2) -> ContextClause:
        f, t1 = l1[1], l1[2]
        tag, a, b = l2
        if tag in EQUALITY_TAGS:
            new = (eq if tag == EQ else neq)(t1, b)
        else:
            new = replace_f_subterm(l2, f, t1)
        head = (c1.head - {l1}) | (c2.head - {l2})
        return ContextClause(c1.body | c2.body, head | {new})

    def apply_eq(self, v: int, c: ContextClause) -> None:
        store = self.structure.contexts[v].store
        results = []
        for lit in store.eligible[c]:
            f = eq_premise_key(lit)
            if f is not None:
                for d, l2 in store.by_fn.get(f, ()):
                    results.append((c, d, self._paramodulant(c, lit, d, l2)))
            f = rewritable_function(lit)
            if f is not None:
                for d, l1 in store.eq_by_f.get(f, ()):
                    results.append((d, c, self._paramodulant(d, l1, c, lit)))
        for p1, p2, clause in results:
            self._add(v, clause, "Eq", self._refs(v, (p1, p2)))

    def apply_ineq(self, v: int, c: ContextClause) -> None:
        for lit in sorted(c.head):
            if lit[0] == NEQ and lit[1] == lit[2]:
                self._add(v, ContextClause(c.body, c.head - {lit}), "Ineq", self._refs(v, (c,)))

    def apply_factor(self, v: int, c: ContextClause) -> None:
        store = self.structure.contexts[v].store
        results = []
        for lit in store.eligible[c]:
            tag, s, t2 = lit
            if tag != EQ or not s > t2:
                continue
            for other in c.head:
                if other == lit or other[0] != EQ:
                    continue
                if other[1] == s:
                    t = other[2]
                elif other[2] == s:
                    t = other[1]
                else:
                    continue
                head = (c.head - {other}) | {neq(t, t2)}
                results.append(ContextClause(c.body, head))
        for clause in results:
            self._add(v, clause, "Factor", self._refs(v, (c,)))

    # -- Pred ------------------------------------------------------------------

    def _pred(self, e: Edge, p: ContextClause, fixed=None) -> None:
        """Pred over edge ``e`` with successor clause ``p``.

        ``fixed`` = (atom, clause) pins one premise for the given body atom.
        """
        u, _, f = e
        store_u = self.structure.contexts[u].store
        body = sorted(p.body)
        choices = []
        for a in body:
            shifted = shift_to_successor(a, f)
            if fixed is not None and a == fixed[0]:
                cands = [fixed[1]] if shifted in store_u.eligible.get(fixed[1], ()) else []
            else:
                cands = list(store_u.by_lit.get(shifted, ()))
            if not cands:
                return
            choices.append([(c, shifted) for c in cands])
        head_sigma = frozenset(shift_to_successor(a, f) for a in p.head)
        results = []
        for combo in product(*choices):
            b, h = set(), set(head_sigma)
            for c, lit in combo:
                b |= c.body
                h |= c.head - {lit}
            results.append(([c for c, _ in combo], ContextClause(frozenset(b), frozenset(h))))
        for prem, clause in results:
            refs = self._refs(e.target, (p,)) + self._refs(u, prem)
            self._add(u, clause, "Pred", refs)

    def apply_pred_from_clause(self, v: int, c: ContextClause) -> None:
        d = self.structure
        store = d.contexts[v].store
        if c in store.pred_clauses:
            for u, f in sorted(d.in_edges[v]):
                self._pred(Edge(u, v, f), c)
            if c not in store.active:       # self-loop: the conclusion subsumed c
                return
        for lit in store.eligible[c]:
            if lit[0] not in (B_X, B_F, S_XF, S_FX):
                continue
            trigger, g = shift_from_successor(lit)
            out = d.out_edges[v]
            labels = [g] if g is not None else sorted(out)
            for f in labels:
                for w in sorted(out.get(f, ())):
                    store_w = d.contexts[w].store
                    for p in list(store_w.pred_by_body.get(trigger, ())):
                        self._pred(Edge(v, w, f), p, fixed=(trigger, c))

    # -- Succ ------------------------------------------------------------------

    def successor_triggers(self, u: int, f: int):
        """``(K1, K2)`` for function symbol f in context u."""
        store = self.structure.contexts[u].store
        k2 = set()
        for _, lit in store.by_fn.get(f, ()):
            if lit[0] in EQUALITY_TAGS:
                continue
            trigger, _ = shift_from_successor(lit)
            if trigger in self.su:
                k2.add(trigger)
        k1 = {a for a in k2
              if ContextClause(frozenset(), frozenset({shift_to_successor(a, f)})) in store.index}
        return frozenset(k1), frozenset(k2)

    def apply_succ(self, u: int, f: int) -> bool:
        d = self.structure
        store = d.contexts[u].store
        if not any(lit[0] not in EQUALITY_TAGS for _, lit in store.by_fn.get(f, ())):
            return False
        k1, k2 = self.successor_triggers(u, f)
        for _, target in d.find_existing_edge(u, f):
            if all(target.store.contains(ContextClause(frozenset({a}), frozenset({a})))
                   for a in k2 - target.core):
                return False
        vid, core, order = strategy_apply(self.strategy, f, k1, d)
        if vid is None:
            v = self.add_context(core)
        else:
            v = d.contexts[vid]
            v.order = v.order.intersect(order)
        if d.add_edge(u, v.id, f):
            self.queue.append(WorkItem("edge", u, Edge(u, v.id, f)))
        for a in sorted(k2 - v.core):
            self._add(v.id, ContextClause(frozenset({a}), frozenset({a})), "Succ", ())
        return True


__all__ = [
    "DerivationRecord", "InvariantViolation", "Limits", "ResourceLimitExceeded",
    "SaturationStats", "Saturator", "WorkItem",
]

"""DL-clauses, context clauses, query clauses and containment up to redundancy."""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .terms import (B_X, EQ, FUNCTION_FREE_TAGS, NEQ, MalformedTermError,
                    format_literal, is_context_literal)


class ContextClause(NamedTuple):
    """``body -> head``: function-free context atoms on the left, context literals on the right."""

    body: frozenset
    head: frozenset

    @property
    def is_unit(self) -> bool:
        return not self.body and len(self.head) == 1

    def size(self) -> int:
        return len(self.body) + len(self.head)


class DLClause(NamedTuple):
    """An ontology clause over x and z_i. ``body`` is a sorted tuple."""

    body: tuple
    head: frozenset


class QueryClause(NamedTuple):
    """``B1(x) & ... -> C1(x) | ...``; an empty head is bottom."""

    body: frozenset
    head: frozenset


def context_clause(body: Iterable = (), head: Iterable = ()) -> ContextClause:
    return ContextClause(frozenset(body), frozenset(head))


def dl_clause(body: Iterable = (), head: Iterable = ()) -> DLClause:
    return DLClause(tuple(sorted(set(body))), frozenset(head))


def query_clause(body: Iterable = (), head: Iterable = ()) -> QueryClause:
    q = QueryClause(frozenset(body), frozenset(head))
    for a in q.body | q.head:
        if a[0] != B_X:
            raise MalformedTermError("query clauses contain only atoms of the form B(x)")
    return q


def check_context_clause(c: ContextClause) -> None:
    """Raise :class:`MalformedTermError` unless ``c`` is a well-formed context clause."""
    for a in c.body:
        if a[0] not in FUNCTION_FREE_TAGS or not is_context_literal(a):
            raise MalformedTermError(f"illegal body atom {a}")
    for lit in c.head:
        if not is_context_literal(lit):
            raise MalformedTermError(f"illegal head literal {lit}")


def is_head_tautology(c: ContextClause) -> bool:
    """Head contains s = s, or both s = t and s != t."""
    for tag, a, b in c.head:
        if tag == EQ and (a == b or (NEQ, a, b) in c.head):
            return True
    return False


def subsumes(d: ContextClause, c: ContextClause) -> bool:
    return d.body <= c.body and d.head <= c.head


def contains_up_to_redundancy(clauses: Iterable[ContextClause], c: ContextClause) -> bool:
    if is_head_tautology(c):
        return True
    return any(subsumes(d, c) for d in clauses)


def simplify_head(c: ContextClause) -> ContextClause | None:
    """``None`` for a tautology, otherwise ``c`` (heads are sets already)."""
    return None if is_head_tautology(c) else c


def format_clause(c, symbols=None) -> str:
    body = " & ".join(sorted(format_literal(a, symbols) for a in c.body)) or "Top"
    head = " | ".join(sorted(format_literal(l, symbols) for l in c.head)) or "Bottom"
    return f"{body} -> {head}"


class SubsumptionIndex:
    """Occurrence lists over body atoms and head literals.

    A clause D subsumes C iff every literal of D occurs in C, which is found by
    counting how many of D's literals turn up while scanning C's literals.
    """

    def __init__(self) -> None:
        self._body_occ: dict = {}
        self._head_occ: dict = {}
        self._empty: set = set()
        self.members: set = set()

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, c) -> bool:
        return c in self.members

    def __iter__(self):
        return iter(self.members)

    def add(self, c: ContextClause) -> None:
        self.members.add(c)
        if not c.body and not c.head:
            self._empty.add(c)
        for a in c.body:
            self._body_occ.setdefault(a, set()).add(c)
        for l in c.head:
            self._head_occ.setdefault(l, set()).add(c)

    def remove(self, c: ContextClause) -> None:
        self.members.discard(c)
        self._empty.discard(c)
        for a in c.body:
            self._body_occ[a].discard(c)
        for l in c.head:
            self._head_occ[l].discard(c)

    def find_subsumer(self, c: ContextClause) -> ContextClause | None:
        if self._empty:
            return next(iter(self._empty))
        counts: dict = {}
        for a in c.body:
            for d in self._body_occ.get(a, ()):
                counts[d] = counts.get(d, 0) + 1
        for l in c.head:
            for d in self._head_occ.get(l, ()):
                counts[d] = counts.get(d, 0) + 1
        for d, n in counts.items():
            if n == len(d.body) + len(d.head):
                return d
        return None

    def contains(self, c: ContextClause) -> bool:
        """``c`` is contained in the indexed set up to redundancy."""
        return is_head_tautology(c) or self.find_subsumer(c) is not None

    def find_subsumed(self, c: ContextClause) -> list:
        """Indexed clauses other than ``c`` that ``c`` subsumes."""
        lists = [self._body_occ.get(a, ()) for a in c.body]
        lists += [self._head_occ.get(l, ()) for l in c.head]
        if not lists:
            return [d for d in self.members if d != c]
        lists.sort(key=len)
        if not lists[0]:
            return []
        found = set(lists[0])
        for s in lists[1:]:
            found &= s
            if not found:
                return []
        found.discard(c)
        return list(found)


__all__ = [
    "ContextClause", "DLClause", "QueryClause", "SubsumptionIndex",
    "check_context_clause", "contains_up_to_redundancy", "context_clause",
    "dl_clause", "format_clause", "is_head_tautology", "query_clause",
    "simplify_head", "subsumes",
]

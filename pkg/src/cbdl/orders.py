"""Context term orders and the literal orders derived from them.

The base order is a lexicographic path order in which x and y are constants
(x above y), function symbols rank above both, and predicate symbols rank above
every function symbol. T (the right-hand side of every atom) is the smallest
constant of all.

On top of the LPO, two sets of atoms are held down:

* ``minimal_atoms`` (the predecessor triggers) are never greater than any
  context term other than x and y;
* ``query_atoms`` (query heads) may only be greater than x, y and minimal
  atoms; two query atoms are never comparable.

Removing pairs this way keeps the relation transitive, and on the realizable
shapes it keeps monotonicity and the subterm property.
"""

from __future__ import annotations

import enum
from collections import Counter
from typing import Iterable

from .terms import (B_F, B_X, B_Y, EQ, NEQ, S_FX, S_XF, S_XY, S_YX,
                    UNARY_TAGS, X, Y)

TOP = -9


class OrderResult(enum.Enum):
    GT = ">"
    LT = "<"
    EQ = "="
    INCOMPARABLE = "?"


# -- the base LPO -----------------------------------------------------------

_Y_TREE = ((1,), ())
_X_TREE = ((2,), ())
_TOP_TREE = ((0,), ())


def _fterm_tree(t: int):
    if t == X:
        return _X_TREE
    if t == Y:
        return _Y_TREE
    if t == TOP:
        return _TOP_TREE
    if t >= 0:
        return ((3, t), (_X_TREE,))
    raise ValueError(f"not a context F-term: {t}")


def _tree(term):
    if isinstance(term, int):
        return _fterm_tree(term)
    tag, p, f = term
    rank = (4, 0, p) if tag in UNARY_TAGS else (4, 1, p)
    if tag == B_Y:
        args = (_Y_TREE,)
    elif tag == B_X:
        args = (_X_TREE,)
    elif tag == B_F:
        args = (_fterm_tree(f),)
    elif tag == S_XY:
        args = (_X_TREE, _Y_TREE)
    elif tag == S_YX:
        args = (_Y_TREE, _X_TREE)
    elif tag == S_XF:
        args = (_X_TREE, _fterm_tree(f))
    elif tag == S_FX:
        args = (_fterm_tree(f), _X_TREE)
    else:
        raise ValueError(f"not a context P-term: {term}")
    return (rank, args)


def _lpo_gt_tree(s, t) -> bool:
    if s == t:
        return False
    srank, sargs = s
    trank, targs = t
    for a in sargs:
        if a == t or _lpo_gt_tree(a, t):
            return True
    if srank > trank:
        return all(_lpo_gt_tree(s, b) for b in targs)
    if srank == trank:
        for a, b in zip(sargs, targs):
            if a != b:
                if not _lpo_gt_tree(a, b):
                    return False
                break
        else:
            return False
        return all(_lpo_gt_tree(s, b) for b in targs)
    return False


_LPO_CACHE: dict = {}


def lpo_greater(s, t) -> bool:
    """Unrelaxed LPO on context terms (and T)."""
    key = (s, t)
    r = _LPO_CACHE.get(key)
    if r is None:
        r = _lpo_gt_tree(_tree(s), _tree(t))
        _LPO_CACHE[key] = r
    return r


# -- context term orders ------------------------------------------------------

_BOTTOM_TERMS = frozenset({X, Y, TOP})


class ContextTermOrder:
    """A relaxed LPO parameterised by the atoms it must keep small.

    Orders are immutable. :meth:`intersect` is exact: each operand contributes
    its own restriction and a pair survives only if every restriction allows it.
    """

    __slots__ = ("components", "_term_cache", "_lit_cache")

    def __init__(self, minimal_atoms: Iterable = (), query_atoms: Iterable = (),
                 *, _components=None):
        if _components is None:
            _components = frozenset({(frozenset(minimal_atoms), frozenset(query_atoms))})
        self.components: frozenset = _components
        self._term_cache: dict = {}
        self._lit_cache: dict = {}

    @property
    def minimal_atoms(self) -> frozenset:
        return frozenset().union(*(m for m, _ in self.components))

    @property
    def query_atoms(self) -> frozenset:
        return frozenset().union(*(q for _, q in self.components))

    def intersect(self, other: "ContextTermOrder") -> "ContextTermOrder":
        if other.components <= self.components:
            return self
        return ContextTermOrder(_components=self.components | other.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, ContextTermOrder) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return (f"ContextTermOrder(minimal={len(self.minimal_atoms)}, "
                f"query={len(self.query_atoms)})")

    # -- terms --

    def _allowed(self, s, t) -> bool:
        if isinstance(s, int) or t in _BOTTOM_TERMS:
            return True
        for mins, queries in self.components:
            if s in mins:
                return False
            if s in queries and t not in mins:
                return False
        return True

    def greater(self, s, t) -> bool:
        key = (s, t)
        r = self._term_cache.get(key)
        if r is None:
            r = lpo_greater(s, t) and self._allowed(s, t)
            self._term_cache[key] = r
        return r

    def compare_terms(self, s, t) -> OrderResult:
        if s == t:
            return OrderResult.EQ
        if self.greater(s, t):
            return OrderResult.GT
        if self.greater(t, s):
            return OrderResult.LT
        return OrderResult.INCOMPARABLE

    # -- literals --

    def literal_greater(self, l1: tuple, l2: tuple) -> bool:
        key = (l1, l2)
        r = self._lit_cache.get(key)
        if r is None:
            r = l1 != l2 and multiset_greater(self, literal_terms(l1), literal_terms(l2))
            self._lit_cache[key] = r
        return r

    def compare_literals(self, l1: tuple, l2: tuple) -> OrderResult:
        if l1 == l2:
            return OrderResult.EQ
        if self.literal_greater(l1, l2):
            return OrderResult.GT
        if self.literal_greater(l2, l1):
            return OrderResult.LT
        return OrderResult.INCOMPARABLE

    def no_literal_geq(self, lits: Iterable[tuple], lit: tuple) -> bool:
        """True iff no member of ``lits`` is equal to or greater than ``lit``."""
        for other in lits:
            if other == lit or self.literal_greater(other, lit):
                return False
        return True

    def eligible(self, head: Iterable[tuple]) -> tuple:
        """Literals of ``head`` that no other head literal dominates."""
        head = tuple(head)
        return tuple(l for l in head
                     if not any(o != l and self.literal_greater(o, l) for o in head))


def literal_terms(lit: tuple) -> tuple:
    """The term multiset of a literal: {s,t} for s=t, {s,s,t,t} for s!=t."""
    tag, a, b = lit
    if tag == EQ:
        return (a, b)
    if tag == NEQ:
        return (a, a, b, b)
    return (lit, TOP)


def multiset_greater(order: ContextTermOrder, m: Iterable, n: Iterable) -> bool:
    """M >mul N iff M != N and every n in N-M is dominated by some m in M-N."""
    cm, cn = Counter(m), Counter(n)
    if cm == cn:
        return False
    m_minus = cm - cn
    n_minus = cn - cm
    return all(any(order.greater(a, b) for a in m_minus) for b in n_minus)

"""Ontology text -> normalised axioms -> DL-clauses, plus trigger sets.

Axiom syntax, one per line (``#`` starts a comment)::

    A And B SubClassOf C Or D         Top / Bottom allowed alone
    A SubClassOf AtLeast 2 S B        S may be written ``Inv S``; filler may be Top
    Exists S A SubClassOf B           B may be Bottom
    A SubClassOf AtMost 1 S B         filler optional (unqualified)
    R SubRoleOf S
    R SubRoleOf Inv S

A line containing ``->`` is a raw DL-clause instead, e.g.
``B(x) & S(x,z1) & S(x,z2) -> z1 = z2 | f1(x) != z1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .clauses import DLClause, QueryClause, dl_clause, query_clause
from .symbols import SymbolError, SymbolTable
from .terms import (B_F, B_X, B_Y, B_Z, EQUALITY_TAGS, NOARG, S_FX,
                    S_XF, S_XY, S_XZ, S_YX, S_ZX, UNARY_TAGS, eq, is_z, neq, z,
                    z_index)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{detail}")


# -- axioms ---------------------------------------------------------------

@dataclass(frozen=True)
class SubClass:
    """DL1: conjunction of names below a disjunction of names."""
    conjuncts: tuple
    disjuncts: tuple


@dataclass(frozen=True)
class AtLeast:
    """DL2: ``sub`` below at-least-``n`` ``role``-successors in ``filler``."""
    sub: str | None
    n: int
    role: str
    filler: str | None = None
    inverse: bool = False


@dataclass(frozen=True)
class ExistsSub:
    """DL3: some ``role``-successor in ``filler`` implies ``sup``."""
    role: str
    filler: str | None
    sup: str | None
    inverse: bool = False


@dataclass(frozen=True)
class AtMost:
    """DL4: ``sub`` below at-most-``n`` ``role``-successors in ``filler``."""
    sub: str | None
    n: int
    role: str
    filler: str | None = None
    inverse: bool = False


@dataclass(frozen=True)
class SubRole:
    """DL5."""
    sub: str
    sup: str


@dataclass(frozen=True)
class SubRoleInv:
    """DL6: ``sub`` is below the inverse of ``sup``."""
    sub: str
    sup: str


@dataclass(frozen=True)
class RawClause:
    """A DL-clause given literally. Atoms are ``(name, args)``, equalities ``(op, l, r)``."""
    body: tuple
    head: tuple


# -- tokenizer --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)\b|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op>->|!=|[()=,&|]))")
_KEYWORDS = {"SubClassOf", "SubRoleOf", "And", "Or", "Top", "Bottom", "Exists",
             "AtLeast", "AtMost", "Inv"}
_ZVAR = re.compile(r"z(\d+)$")


class _Tok(NamedTuple):
    kind: str
    text: str
    col: int


class _Cursor:
    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.toks: list[_Tok] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if m is None or m.end() == pos:
                col = pos + len(stripped[pos:]) - len(stripped[pos:].lstrip()) + 1
                raise ParseError(lineno, col, f"unexpected character {stripped[col - 1]!r}")
            kind = m.lastgroup
            self.toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.end_col = len(stripped) + 1

    def peek(self, k: int = 0) -> _Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def col(self) -> int:
        t = self.peek()
        return t.col if t else self.end_col

    def fail(self, message: str, expected: Iterable[str] = ()):
        raise ParseError(self.lineno, self.col(), message, expected)

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t is None or t.text != text:
            self.fail(f"found {t.text!r}" if t else "unexpected end of line", [repr(text)])
        self.i += 1
        return t

    def name(self, expected: str = "identifier") -> _Tok:
        t = self.peek()
        if t is None or t.kind != "ident" or t.text in _KEYWORDS:
            self.fail(f"found {t.text!r}" if t else "unexpected end of line", [expected])
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.peek()
        if t is None or t.kind != "int":
            self.fail(f"found {t.text!r}" if t else "unexpected end of line", ["integer"])
        self.i += 1
        return int(t.text)

    def done(self) -> None:
        t = self.peek()
        if t is not None:
            self.fail(f"unexpected {t.text!r}", ["end of line"])


class _Parser:
    def __init__(self) -> None:
        self.sorts: dict[str, str] = {}

    def declare(self, cur: _Cursor, tok: _Tok, sort: str) -> str:
        seen = self.sorts.setdefault(tok.text, sort)
        if seen != sort:
            raise ParseError(cur.lineno, tok.col,
                             f"{tok.text!r} is used as a {sort} but was first used as a {seen}")
        return tok.text

    def concept(self, cur: _Cursor) -> str:
        return self.declare(cur, cur.name("concept name"), "concept")

    def role(self, cur: _Cursor) -> tuple[str, bool]:
        inverse = cur.accept("Inv")
        return self.declare(cur, cur.name("role name"), "role"), inverse

    def filler(self, cur: _Cursor, optional: bool = False) -> str | None:
        if cur.accept("Top") or (optional and cur.peek() is None):
            return None
        return self.concept(cur)

    def axiom(self, cur: _Cursor):
        if cur.accept("Exists"):
            role, inverse = self.role(cur)
            filler = self.filler(cur)
            cur.expect("SubClassOf")
            sup = None if cur.accept("Bottom") else self.concept(cur)
            cur.done()
            return ExistsSub(role, filler, sup, inverse)

        first = cur.peek()
        if first is not None and cur.peek(1) is not None and cur.peek(1).text == "SubRoleOf":
            sub = self.declare(cur, cur.name("role name"), "role")
            cur.expect("SubRoleOf")
            sup, inverse = self.role(cur)
            cur.done()
            return SubRoleInv(sub, sup) if inverse else SubRole(sub, sup)

        if cur.accept("Top"):
            conj: tuple = ()
        else:
            if cur.peek() is None or cur.peek().kind != "ident" or cur.peek().text in _KEYWORDS:
                cur.fail("expected an axiom", ["concept name", "'Top'", "'Exists'"])
            names = [self.concept(cur)]
            while cur.accept("And"):
                names.append(self.concept(cur))
            conj = tuple(names)
        if not cur.at("SubClassOf"):
            cur.fail("expected SubClassOf", ["'SubClassOf'", "'And'", "'SubRoleOf'"])
        cur.expect("SubClassOf")

        if cur.at("AtLeast") or cur.at("AtMost"):
            kind = cur.peek().text
            if len(conj) > 1:
                cur.fail("number restrictions need a single concept on the left")
            cur.i += 1
            n_col = cur.col()
            n = cur.integer()
            role, inverse = self.role(cur)
            filler = self.filler(cur, optional=(kind == "AtMost"))
            cur.done()
            sub = conj[0] if conj else None
            if kind == "AtLeast":
                if n < 1:
                    raise ParseError(cur.lineno, n_col, "AtLeast needs a count of at least 1")
                return AtLeast(sub, n, role, filler, inverse)
            return AtMost(sub, n, role, filler, inverse)

        if cur.accept("Bottom"):
            disj: tuple = ()
        else:
            names = [self.concept(cur)]
            while cur.accept("Or"):
                names.append(self.concept(cur))
            disj = tuple(names)
        cur.done()
        return SubClass(conj, disj)

    # -- raw clauses --

    def raw_term(self, cur: _Cursor):
        t = cur.name("term")
        if t.text == "x":
            return "x"
        m = _ZVAR.match(t.text)
        if m and not cur.at("("):
            return ("z", int(m.group(1)))
        cur.expect("(")
        cur.expect("x")
        cur.expect(")")
        return ("f", self.declare(cur, t, "function"))

    def raw_literal(self, cur: _Cursor, allow_equality: bool):
        start = cur.i
        t = cur.name("atom or term")
        if cur.at("(") and not (cur.peek(1) and cur.peek(1).text == "x"
                                and cur.peek(2) and cur.peek(2).text == ")"
                                and cur.peek(3) and cur.peek(3).text in ("=", "!=")):
            cur.expect("(")
            args = [self.raw_term(cur)]
            while cur.accept(","):
                args.append(self.raw_term(cur))
            cur.expect(")")
            if len(args) > 2:
                raise ParseError(cur.lineno, t.col, "atoms take one or two arguments")
            self.declare(cur, t, "concept" if len(args) == 1 else "role")
            return (t.text, tuple(args))
        if not allow_equality:
            raise ParseError(cur.lineno, t.col, "clause bodies contain atoms only")
        cur.i = start
        left = self.raw_term(cur)
        if cur.accept("="):
            op = "="
        elif cur.accept("!="):
            op = "!="
        else:
            cur.fail("expected an equality", ["'='", "'!='"])
        right = self.raw_term(cur)
        return (op, left, right)

    def raw_clause(self, cur: _Cursor) -> RawClause:
        body = []
        if not cur.accept("Top"):
            body.append(self.raw_literal(cur, allow_equality=False))
            while cur.accept("&"):
                body.append(self.raw_literal(cur, allow_equality=False))
        cur.expect("->")
        head = []
        if not cur.accept("Bottom"):
            head.append(self.raw_literal(cur, allow_equality=True))
            while cur.accept("|"):
                head.append(self.raw_literal(cur, allow_equality=True))
        cur.done()
        return RawClause(tuple(body), tuple(head))


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_ontology(text: str) -> list:
    """Parse ontology text into a list of axiom objects (one per non-blank line)."""
    parser = _Parser()
    axioms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        cur = _Cursor(line, lineno)
        if any(t.text == "->" for t in cur.toks):
            axioms.append(parser.raw_clause(cur))
        else:
            axioms.append(parser.axiom(cur))
    return axioms


# -- ontologies and clausification ------------------------------------------

class TriggerSets(NamedTuple):
    su: frozenset
    pr: frozenset


@dataclass
class Ontology:
    clauses: tuple
    symbols: SymbolTable
    origins: tuple = ()
    axioms: tuple = field(default=(), repr=False)

    @cached_property
    def triggers(self) -> TriggerSets:
        return compute_triggers(self)

    @cached_property
    def unary_predicates(self) -> tuple:
        """Ids of unary predicates occurring in some clause, in id order."""
        found = set()
        for c in self.clauses:
            for lit in (*c.body, *c.head):
                if lit[0] in UNARY_TAGS:
                    found.add(lit[1])
        return tuple(sorted(found))

    @cached_property
    def filler_atoms(self) -> dict:
        """Function id -> distinct atoms B(f(x)) that mention it."""
        out: dict = {}
        for c in self.clauses:
            for lit in c.head:
                if lit[0] == B_F:
                    out.setdefault(lit[2], set()).add(lit)
        return out

    def __len__(self) -> int:
        return len(self.clauses)


def _b(p):
    return (B_X, p, NOARG)


def clausify(axioms: Iterable, symbols: SymbolTable | None = None) -> Ontology:
    """Translate normalised axioms into DL-clauses.

    Fresh function symbols and roles are named after the axiom's 1-based index,
    e.g. ``f3.2`` for the second successor introduced by axiom 3.
    """
    symbols = symbols if symbols is not None else SymbolTable()
    axioms = list(axioms)
    # intern user symbols first so that declaration order fixes the precedence
    for ax in axioms:
        _intern_user_symbols(ax, symbols)
    clauses: list[DLClause] = []
    origins: list[int] = []

    def emit(idx, body, head):
        c = dl_clause(body, head)
        if c not in clauses:
            clauses.append(c)
            origins.append(idx)

    for idx, ax in enumerate(axioms):
        tag = idx + 1
        if isinstance(ax, SubClass):
            emit(idx, [_b(symbols.unary(n)) for n in ax.conjuncts],
                 [_b(symbols.unary(n)) for n in ax.disjuncts])
        elif isinstance(ax, AtLeast):
            body = [_b(symbols.unary(ax.sub))] if ax.sub else []
            s = symbols.binary(ax.role)
            fs = [symbols.fresh_function(f"f{tag}.{i}") for i in range(1, ax.n + 1)]
            for f in fs:
                emit(idx, body, [(S_FX if ax.inverse else S_XF, s, f)])
            if ax.filler is not None:
                b2 = symbols.unary(ax.filler)
                for f in fs:
                    emit(idx, body, [(B_F, b2, f)])
            for i in range(len(fs)):
                for j in range(i + 1, len(fs)):
                    emit(idx, body, [neq(fs[i], fs[j])])
        elif isinstance(ax, ExistsSub):
            s = symbols.binary(ax.role)
            body = [(S_XZ if ax.inverse else S_ZX, s, z(1))]
            if ax.filler is not None:
                body.append(_b(symbols.unary(ax.filler)))
            head = [(B_Z, symbols.unary(ax.sup), z(1))] if ax.sup is not None else []
            emit(idx, body, head)
        elif isinstance(ax, AtMost):
            s = symbols.binary(ax.role)
            if ax.filler is None and not ax.inverse:
                counted = s
            else:
                hint = f"{ax.role}_{ax.filler or 'Top'}.{tag}"
                counted = symbols.fresh_binary(hint)
                filter_body = [(S_XZ if ax.inverse else S_ZX, s, z(1))]
                if ax.filler is not None:
                    filter_body.append(_b(symbols.unary(ax.filler)))
                emit(idx, filter_body, [(S_ZX, counted, z(1))])
            body = [_b(symbols.unary(ax.sub))] if ax.sub else []
            body += [(S_XZ, counted, z(i)) for i in range(1, ax.n + 2)]
            head = [eq(z(i), z(j)) for i in range(1, ax.n + 2) for j in range(i + 1, ax.n + 2)]
            emit(idx, body, head)
        elif isinstance(ax, SubRole):
            emit(idx, [(S_ZX, symbols.binary(ax.sub), z(1))],
                 [(S_ZX, symbols.binary(ax.sup), z(1))])
        elif isinstance(ax, SubRoleInv):
            emit(idx, [(S_ZX, symbols.binary(ax.sub), z(1))],
                 [(S_XZ, symbols.binary(ax.sup), z(1))])
        elif isinstance(ax, RawClause):
            c = _raw_to_dl(ax, symbols)
            problems = validate_dl_clause(c)
            if problems:
                raise ValueError(f"axiom {tag}: " + "; ".join(problems))
            emit(idx, c.body, c.head)
        else:
            raise TypeError(f"not an axiom: {ax!r}")
    return Ontology(tuple(clauses), symbols, tuple(origins), tuple(axioms))


def _intern_user_symbols(ax, symbols: SymbolTable) -> None:
    if isinstance(ax, SubClass):
        for n in (*ax.conjuncts, *ax.disjuncts):
            symbols.unary(n)
    elif isinstance(ax, (AtLeast, AtMost)):
        if ax.sub:
            symbols.unary(ax.sub)
        symbols.binary(ax.role)
        if ax.filler:
            symbols.unary(ax.filler)
    elif isinstance(ax, ExistsSub):
        symbols.binary(ax.role)
        if ax.filler:
            symbols.unary(ax.filler)
        if ax.sup:
            symbols.unary(ax.sup)
    elif isinstance(ax, (SubRole, SubRoleInv)):
        symbols.binary(ax.sub)
        symbols.binary(ax.sup)
    elif isinstance(ax, RawClause):
        for lit in (*ax.body, *ax.head):
            if lit[0] in ("=", "!="):
                terms = lit[1:]
            else:
                name, terms = lit
                (symbols.unary if len(terms) == 1 else symbols.binary)(name)
            for t in terms:
                if isinstance(t, tuple) and t[0] == "f":
                    symbols.function(t[1])


def _raw_term(t, symbols: SymbolTable) -> int:
    if t == "x":
        return -1
    kind, v = t
    return z(v) if kind == "z" else symbols.function(v)


def _raw_to_dl(ax: RawClause, symbols: SymbolTable) -> DLClause:
    def convert(lit):
        if lit[0] in ("=", "!="):
            l, r = _raw_term(lit[1], symbols), _raw_term(lit[2], symbols)
            if -1 in (l, r):
                raise ValueError("x may not appear in an equality literal")
            return eq(l, r) if lit[0] == "=" else neq(l, r)
        name, args = lit
        terms = [_raw_term(a, symbols) for a in args]
        if len(terms) == 1:
            (t,) = terms
            p = symbols.unary(name)
            if t == -1:
                return (B_X, p, NOARG)
            return (B_Z if is_z(t) else B_F, p, t)
        s = symbols.binary(name)
        a, b = terms
        if a == -1 and b != -1:
            return (S_XZ if is_z(b) else S_XF, s, b)
        if b == -1 and a != -1:
            return (S_ZX if is_z(a) else S_FX, s, a)
        raise ValueError(f"unsupported role atom {name}{args}")

    return dl_clause([convert(a) for a in ax.body], [convert(l) for l in ax.head])


_DL_BODY_TAGS = frozenset({B_X, S_XZ, S_ZX})
_DL_HEAD_ATOM_TAGS = frozenset({B_Z, B_X, B_F, S_XZ, S_ZX, S_XF, S_FX})


def _dl_vars(lit) -> set:
    tag, a, b = lit
    if tag in EQUALITY_TAGS:
        return {t for t in (a, b) if is_z(t)}
    return {b} if tag in (B_Z, S_XZ, S_ZX) else set()


def validate_dl_clause(c: DLClause) -> list[str]:
    """Return the list of violated DL-clause constraints (empty when valid)."""
    problems = []
    body_vars: set = set()
    for a in c.body:
        if a[0] not in _DL_BODY_TAGS:
            problems.append(f"body atom {a} is not of the form B(x), S(x,zi) or S(zi,x)")
        body_vars |= _dl_vars(a)
    for lit in c.head:
        tag, a, b = lit
        if tag in EQUALITY_TAGS:
            if not all(t >= 0 or is_z(t) for t in (a, b)):
                problems.append(f"equality {lit} must relate f(x) and z terms")
        elif tag not in _DL_HEAD_ATOM_TAGS:
            problems.append(f"head literal {lit} has an illegal shape")
        for v in _dl_vars(lit) - body_vars:
            problems.append(f"z{z_index(v)} occurs in the head but not in the body")
    return problems


def compute_triggers(ontology: Ontology) -> TriggerSets:
    su = set()
    for c in ontology.clauses:
        for tag, p, _ in c.body:
            if tag == B_X:
                su.add((B_X, p, NOARG))
            elif tag == S_XZ:
                su.add((S_XY, p, NOARG))
            elif tag == S_ZX:
                su.add((S_YX, p, NOARG))
    swap = {B_X: B_Y, S_XY: S_YX, S_YX: S_XY}
    pr = {(swap[tag], p, NOARG) for tag, p, _ in su}
    pr |= {(B_Y, p, NOARG) for p in ontology.unary_predicates}
    return TriggerSets(frozenset(su), frozenset(pr))


def load_ontology(text: str) -> Ontology:
    return clausify(parse_ontology(text))


def parse_query(text: str, symbols: SymbolTable) -> QueryClause:
    """Parse ``A [And B ...] SubClassOf C [Or D ...]`` (or ``... Bottom``, or a bare ``A``).

    A bare concept name denotes ``A SubClassOf Bottom``.
    """
    cur = _Cursor(text, 1)
    p = _Parser()
    if cur.accept("Top"):
        left: list = []
    else:
        left = [p.concept(cur)]
        while cur.accept("And"):
            left.append(p.concept(cur))
    right: list = []
    if cur.peek() is not None:
        cur.expect("SubClassOf")
        if not cur.accept("Bottom"):
            right.append(p.concept(cur))
            while cur.accept("Or"):
                right.append(p.concept(cur))
    cur.done()
    try:
        return query_clause([_b(symbols.unary(n)) for n in left],
                            [_b(symbols.unary(n)) for n in right])
    except SymbolError as exc:
        raise ParseError(1, 1, str(exc)) from None


__all__ = [
    "AtLeast", "AtMost", "ExistsSub", "Ontology", "ParseError", "RawClause",
    "SubClass", "SubRole", "SubRoleInv", "TriggerSets", "clausify",
    "compute_triggers", "load_ontology", "parse_ontology", "parse_query",
    "validate_dl_clause",
]

"""Closed-shape terms, atoms and literals.

Everything the calculus ever builds has one of a handful of shapes, so terms are
encoded as flat integers and 3-tuples instead of general trees.

F-terms are ints::

    Y = -2          the predecessor variable y
    X = -1          the central variable x
    f >= 0          f(x), where f is the function symbol's interned id
    z(i) <= -10     the DL-clause variable z_i (never inside context clauses)

Because function ids follow precedence, plain integer comparison of two context
F-terms coincides with the term order on them (f(x) > g(x) > x > y).

Atoms and literals are ``(tag, a, b)`` triples:

    (B_Y, B, -1)   B(y)          (S_XY, S, -1)  S(x,y)
    (B_X, B, -1)   B(x)          (S_YX, S, -1)  S(y,x)
    (B_F, B, f)    B(f(x))       (S_XF, S, f)   S(x,f(x))
                                 (S_FX, S, f)   S(f(x),x)
    (EQ, l, r)     l = r         (NEQ, l, r)    l != r      with l >= r

DL-clauses additionally use (B_Z, B, z), (S_XZ, S, z) and (S_ZX, S, z).
An atom A stands for the equality A = T; the T side is left implicit.
"""

from __future__ import annotations

from typing import Mapping

Y = -2
X = -1
NOARG = -1
Z_BASE = -10

B_Y, B_X, B_F, S_XY, S_YX, S_XF, S_FX, EQ, NEQ, B_Z, S_XZ, S_ZX = range(12)

CONTEXT_ATOM_TAGS = frozenset({B_Y, B_X, B_F, S_XY, S_YX, S_XF, S_FX})
FUNCTION_FREE_TAGS = frozenset({B_Y, B_X, S_XY, S_YX})
SU_TAGS = frozenset({B_X, S_XY, S_YX})
PR_TAGS = frozenset({B_Y, S_YX, S_XY})
UNARY_TAGS = frozenset({B_Y, B_X, B_F, B_Z})
EQUALITY_TAGS = frozenset({EQ, NEQ})


class MalformedTermError(ValueError):
    """A term or literal falls outside the shapes the calculus allows."""


# -- constructors ---------------------------------------------------------

def z(i: int) -> int:
    if i < 0:
        raise MalformedTermError(f"negative z index {i}")
    return Z_BASE - i


def z_index(t: int) -> int:
    return Z_BASE - t


def is_z(t: int) -> bool:
    return t <= Z_BASE


def atom(tag: int, pred: int, arg: int = NOARG) -> tuple[int, int, int]:
    return (tag, pred, arg)


def eq(l: int, r: int) -> tuple[int, int, int]:
    return (EQ, l, r) if l >= r else (EQ, r, l)


def neq(l: int, r: int) -> tuple[int, int, int]:
    return (NEQ, l, r) if l >= r else (NEQ, r, l)


def is_atom(lit: tuple) -> bool:
    return lit[0] not in EQUALITY_TAGS


def is_context_literal(lit: tuple) -> bool:
    """True iff ``lit`` is one of the context-literal shapes."""
    tag, a, b = lit
    if tag in CONTEXT_ATOM_TAGS:
        if a < 0:
            return False
        if tag in (B_F, S_XF, S_FX):
            return b >= 0
        return b == NOARG
    if tag in EQUALITY_TAGS:
        # f(x) ~ g(x), f(x) ~ y, y ~ y; canonical left side is the larger one
        return a >= b and (a >= 0 or a == Y) and (b >= 0 or b == Y)
    return False


def function_of(lit: tuple) -> int | None:
    """The function symbol f such that f(x) is an argument of an atom."""
    tag = lit[0]
    if tag in (B_F, S_XF, S_FX):
        return lit[2]
    return None


# -- substitutions --------------------------------------------------------

def _bind(t: int, zmap: Mapping[int, int]) -> int:
    if not is_z(t):
        return t
    try:
        return zmap[z_index(t)]
    except KeyError:
        raise MalformedTermError(f"unbound variable z{z_index(t)}") from None


_Z_TO_Y = {B_Z: B_Y, S_XZ: S_XY, S_ZX: S_YX}
_Z_TO_F = {B_Z: B_F, S_XZ: S_XF, S_ZX: S_FX}


def apply_hyper_subst(lit: tuple, zmap: Mapping[int, int]) -> tuple[int, int, int]:
    """Instantiate a DL-literal with x fixed and each z_i mapped to y or f(x).

    ``zmap`` maps a z index to ``Y`` or to a function id.
    """
    tag, a, b = lit
    if tag in EQUALITY_TAGS:
        l, r = _bind(a, zmap), _bind(b, zmap)
        return eq(l, r) if tag == EQ else neq(l, r)
    if tag in _Z_TO_Y:
        t = _bind(b, zmap)
        if t == Y:
            return (_Z_TO_Y[tag], a, NOARG)
        if t >= 0:
            return (_Z_TO_F[tag], a, t)
        raise MalformedTermError(f"z{z_index(b)} must map to y or f(x), got {t}")
    return lit


# -- successor / predecessor shifting ---------------------------------------

def shift_to_successor(a: tuple, f: int) -> tuple[int, int, int]:
    """Apply {x -> f(x), y -> x} to a trigger-shaped atom."""
    tag, p, _ = a
    if tag == B_X:
        return (B_F, p, f)
    if tag == B_Y:
        return (B_X, p, NOARG)
    if tag == S_XY:
        return (S_FX, p, f)
    if tag == S_YX:
        return (S_XF, p, f)
    raise MalformedTermError(f"atom shape {tag} is not a trigger shape")


def shift_from_successor(a: tuple) -> tuple[tuple[int, int, int], int | None]:
    """Inverse of :func:`shift_to_successor`.

    Returns the trigger atom and the function symbol (``None`` when the atom
    is B(x), which is the image of B(y) under every symbol).
    """
    tag, p, f = a
    if tag == B_F:
        return (B_X, p, NOARG), f
    if tag == B_X:
        return (B_Y, p, NOARG), None
    if tag == S_FX:
        return (S_XY, p, NOARG), f
    if tag == S_XF:
        return (S_YX, p, NOARG), f
    raise MalformedTermError(f"atom shape {tag} is not a shifted trigger")


# -- subterm replacement ----------------------------------------------------

def replace_f_subterm(target, old: int, new: int):
    """Replace the occurrence of ``old`` (some f(x)) in ``target`` with ``new``.

    ``target`` is an F-term (int) or a P-term triple; ``new`` is an F-term that
    keeps the result a legal context term (some g(x) or y). Returns ``None``
    when ``old`` does not occur in ``target``.
    """
    if isinstance(target, int):
        return new if target == old else None
    tag, p, f = target
    if f != old or tag not in (B_F, S_XF, S_FX):
        return None
    if new >= 0:
        return (tag, p, new)
    if new == Y:
        return ({B_F: B_Y, S_XF: S_XY, S_FX: S_YX}[tag], p, NOARG)
    raise MalformedTermError(f"cannot place F-term {new} inside an atom")


# -- printing -------------------------------------------------------------

def format_fterm(t: int, symbols=None) -> str:
    if t == X:
        return "x"
    if t == Y:
        return "y"
    if is_z(t):
        return f"z{z_index(t)}"
    name = symbols.function_name(t) if symbols is not None else f"f{t}"
    return f"{name}(x)"


def format_literal(lit: tuple, symbols=None) -> str:
    tag, a, b = lit
    if tag in EQUALITY_TAGS:
        op = "=" if tag == EQ else "!="
        return f"{format_fterm(a, symbols)} {op} {format_fterm(b, symbols)}"
    if tag in UNARY_TAGS:
        name = symbols.unary_name(a) if symbols is not None else f"B{a}"
    else:
        name = symbols.binary_name(a) if symbols is not None else f"S{a}"
    ft = lambda t: format_fterm(t, symbols)  # noqa: E731
    args = {
        B_Y: "y", B_X: "x", B_F: ft(b), B_Z: ft(b),
        S_XY: "x,y", S_YX: "y,x", S_XF: f"x,{ft(b)}", S_FX: f"{ft(b)},x",
        S_XZ: f"x,{ft(b)}", S_ZX: f"{ft(b)},x",
    }[tag]
    return f"{name}({args})"

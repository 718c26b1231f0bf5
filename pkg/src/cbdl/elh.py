"""An independent ELH classifier (completion rules over clause shapes) and helpers around it."""

from __future__ import annotations

import random
from typing import NamedTuple

from .clauses import ContextClause
from .frontend import AtLeast, Ontology, SubClass, clausify
from .terms import B_F, B_X, B_Y, B_Z, EQUALITY_TAGS, S_XF, S_YX, S_ZX


class NotELH(ValueError):
    pass


class _Existential(NamedTuple):
    lhs: int | None
    role: int
    filler: int | None


class _Shapes(NamedTuple):
    subsumptions: list      # (body preds tuple, head pred)
    existentials: list      # _Existential
    exists_left: list       # (role, filler or None, sup)
    role_incl: list         # (sub, sup)


def _split(ontology: Ontology) -> _Shapes | None:
    subs, ex_left, roles = [], [], []
    ex_parts: dict = {}
    for c in ontology.clauses:
        body, head = c.body, tuple(c.head)
        if len(head) != 1 or any(l[0] in EQUALITY_TAGS for l in head):
            return None
        (h,) = head
        tags = [a[0] for a in body]
        if all(t == B_X for t in tags) and h[0] == B_X:
            subs.append((tuple(a[1] for a in body), h[1]))
        elif all(t == B_X for t in tags) and len(body) <= 1 and h[0] in (S_XF, B_F):
            lhs = body[0][1] if body else None
            part = ex_parts.setdefault(h[2], {"lhs": lhs, "role": [], "filler": []})
            if part["lhs"] != lhs:
                return None
            part["role" if h[0] == S_XF else "filler"].append(h[1])
        elif sorted(tags) == sorted([S_ZX] + [B_X] * (len(body) - 1)) and len(body) <= 2:
            role_atom = next(a for a in body if a[0] == S_ZX)
            filler = next((a[1] for a in body if a[0] == B_X), None)
            if h[0] == B_Z and h[2] == role_atom[2]:
                ex_left.append((role_atom[1], filler, h[1]))
            elif h[0] == S_ZX and filler is None and h[2] == role_atom[2]:
                roles.append((role_atom[1], h[1]))
            else:
                return None
        else:
            return None
    existentials = []
    for part in ex_parts.values():
        if len(part["role"]) != 1 or len(part["filler"]) > 1:
            return None
        filler = part["filler"][0] if part["filler"] else None
        existentials.append(_Existential(part["lhs"], part["role"][0], filler))
    return _Shapes(subs, existentials, ex_left, roles)


def is_elh(ontology: Ontology) -> bool:
    return _split(ontology) is not None


def _role_closure(n_roles: int, incl) -> list:
    sup = [{r} for r in range(n_roles)]
    changed = True
    while changed:
        changed = False
        for a, b in incl:
            for r in range(n_roles):
                if a in sup[r] and not sup[b] <= sup[r]:
                    sup[r] |= sup[b]
                    changed = True
    return sup


TOP = -1


def completion(ontology: Ontology) -> dict:
    """Run the completion rules to a fixpoint; returns S as {concept id: set of ids}.

    ``TOP`` (-1) stands for the top concept; it is in every S(A).
    """
    shapes = _split(ontology)
    if shapes is None:
        raise NotELH("ontology is not in ELH")
    n = len(ontology.symbols.unary_predicates)
    nodes = list(range(n)) + [TOP]
    S = {a: {a, TOP} for a in nodes}
    sup_roles = _role_closure(len(ontology.symbols.binary_predicates), shapes.role_incl)
    edges: set = set()          # (A, role, B), already closed under the role hierarchy
    changed = True
    while changed:
        changed = False
        for a in nodes:
            sa = S[a]
            # CR1/CR2: (conjunctions of) names on the left
            for body, head in shapes.subsumptions:
                if head not in sa and all(b in sa for b in body):
                    sa.add(head)
                    changed = True
            # CR3 with CR10: existential on the right, then role inclusions
            for ex in shapes.existentials:
                if ex.lhs is None or ex.lhs in sa:
                    target = TOP if ex.filler is None else ex.filler
                    for r in sup_roles[ex.role]:
                        if (a, r, target) not in edges:
                            edges.add((a, r, target))
                            changed = True
        # CR4: existential on the left
        for a, r, b in list(edges):
            for role, filler, sup in shapes.exists_left:
                if role == r and (filler is None or filler in S[b]) and sup not in S[a]:
                    S[a].add(sup)
                    changed = True
    return S


def elh_classify(ontology: Ontology) -> set:
    """Atomic subsumptions ``(sub, sup)`` by name, excluding reflexive pairs."""
    S = completion(ontology)
    name = ontology.symbols.unary_name
    return {(name(a), name(b)) for a, sups in S.items() if a != TOP
            for b in sups if b != TOP and b != a}


def elh_entails(ontology: Ontology, sub: str, sup: str) -> bool:
    return (sub, sup) in elh_classify(ontology) or sub == sup


# -- random ontologies ---------------------------------------------------------

def random_elh(rng: random.Random, max_concepts: int = 12, max_roles: int = 4,
               max_axioms: int = 25) -> str:
    """A random ELH ontology in the axiom syntax."""
    nc = rng.randint(2, max_concepts)
    nr = rng.randint(1, max_roles)
    concepts = [f"A{i}" for i in range(nc)]
    roles = [f"r{i}" for i in range(nr)]
    lines = []
    for _ in range(rng.randint(1, max_axioms)):
        kind = rng.random()
        c = lambda: rng.choice(concepts)  # noqa: E731
        r = lambda: rng.choice(roles)  # noqa: E731
        if kind < 0.25:
            lines.append(f"{c()} SubClassOf {c()}")
        elif kind < 0.35:
            lines.append(f"{c()} And {c()} SubClassOf {c()}")
        elif kind < 0.6:
            filler = c() if rng.random() < 0.9 else "Top"
            left = c() if rng.random() < 0.95 else "Top"
            lines.append(f"{left} SubClassOf AtLeast 1 {r()} {filler}")
        elif kind < 0.85:
            filler = c() if rng.random() < 0.9 else "Top"
            lines.append(f"Exists {r()} {filler} SubClassOf {c()}")
        elif kind < 0.95:
            lines.append(f"{r()} SubRoleOf {r()}")
        else:
            lines.append(f"Top SubClassOf {c()}")
    return "\n".join(lines) + "\n"


# -- clause shapes and soundness spot checks ------------------------------------------

def elh_clause_form(c: ContextClause) -> str | None:
    """Which of the five ELH context-clause forms ``c`` has, or None."""
    body, head = c.body, tuple(c.head)
    if len(head) != 1:
        return None
    (h,) = head
    if not body:
        return {B_X: "T->B(x)", S_XF: "T->S(x,f(x))", B_F: "T->B(f(x))"}.get(h[0])
    if len(body) == 1:
        (b,) = body
        if b[0] == S_YX and h[0] == B_Y:
            return "S(y,x)->B(y)"
        if b[0] == S_YX and h[0] == S_YX:
            return "S1(y,x)->S2(y,x)"
    return None


def soundness_violations(ontology: Ontology, structure, limit: int = 200) -> list:
    """Spot-check that derived clauses follow from the ontology, using the oracle.

    Covers ``Top -> B(x)`` and ``S(y,x) -> B(y)`` in contexts whose core is a
    set of concept atoms. Returns a list of human-readable failures.
    """
    if not is_elh(ontology):
        raise NotELH("soundness spot checks need an ELH ontology")
    symbols = ontology.symbols
    checks = []
    for ctx in structure.contexts:
        if any(a[0] != B_X for a in ctx.core):
            continue
        core = sorted(symbols.unary_name(a[1]) for a in ctx.core)
        for c in ctx.store.sorted_clauses():
            form = elh_clause_form(c)
            h = next(iter(c.head), None)
            if form == "T->B(x)":
                checks.append((core, None, symbols.unary_name(h[1]), ctx.id, c))
            elif form == "S(y,x)->B(y)":
                role = symbols.binary_name(next(iter(c.body))[1])
                checks.append((core, role, symbols.unary_name(h[1]), ctx.id, c))
    failures = []
    for core, role, sup, vid, c in checks[:limit]:
        extra = [SubClass(("_X.",), ("_X.",))] + [SubClass(("_X.",), (b,)) for b in core]
        query = "_X."
        if role is not None:
            extra.append(AtLeast("_Y.", 1, role, "_X."))
            query = "_Y."
        o2 = clausify(list(ontology.axioms) + extra)
        if not elh_entails(o2, query, sup):
            failures.append(f"context {vid}: {c} does not follow")
    return failures


__all__ = [
    "NotELH", "TOP", "completion", "elh_classify", "elh_clause_form", "elh_entails",
    "is_elh", "random_elh", "soundness_violations",
]

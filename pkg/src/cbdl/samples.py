"""Small ontology families used in tests, benchmarks and the CLI's bundled examples."""

from __future__ import annotations


def chain_ontology(n: int) -> str:
    """Two parallel existential chains B0 -> ... -> Bn with Ci flowing back.

    Every Bi is subsumed by Ci.
    """
    lines = []
    for i in range(n):
        for j in (1, 2):
            lines.append(f"B{i} SubClassOf AtLeast 1 S{j} B{i + 1}")
    lines.append(f"B{n} SubClassOf C{n}")
    for i in range(n):
        for j in (1, 2):
            lines.append(f"Exists S{j} C{i + 1} SubClassOf C{i}")
    return "\n".join(lines) + "\n"


ONTO2 = """\
B0 SubClassOf AtLeast 1 Inv S B1
B1 SubClassOf AtLeast 1 S B2
B1 SubClassOf AtLeast 1 S B3
B2 SubClassOf B4
B3 SubClassOf B4
B2 And B3 SubClassOf Bottom
B1 SubClassOf AtMost 2 S
"""


def ladder_ontology(k: int) -> str:
    """Binary branching of depth k where each branch remembers its choices.

    ``Pd``/``Qd`` are pushed down to every descendant, so a strategy that keys
    contexts on all certain facts needs one context per choice sequence. The
    last rung is a disjunction whose both sides lead to ``G``, which then flows
    back to the root: ``N0 SubClassOf G`` holds.
    """
    lines = []
    for d in range(k):
        lines += [
            f"N{d} SubClassOf AtLeast 1 R P{d}",
            f"N{d} SubClassOf AtLeast 1 R Q{d}",
            f"P{d} SubClassOf N{d + 1}",
            f"Q{d} SubClassOf N{d + 1}",
            f"Exists Inv R P{d} SubClassOf P{d}",
            f"Exists Inv R Q{d} SubClassOf Q{d}",
        ]
    lines += [
        f"N{k} SubClassOf Z1 Or Z2",
        "Z1 SubClassOf G",
        "Z2 SubClassOf G",
        "Exists R G SubClassOf G",
    ]
    return "\n".join(lines) + "\n"

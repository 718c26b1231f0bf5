"""Consequence-based reasoning for ALCHIQ ontologies."""

from .engine import InvariantViolation, Limits, ResourceLimitExceeded
from .frontend import Ontology, ParseError, clausify, load_ontology, parse_ontology, parse_query
from .reasoner import ClassificationResult, classify, entails, run_entailment, satisfiable
from .structure import StrategyKind

__all__ = [
    "ClassificationResult", "InvariantViolation", "Limits", "Ontology", "ParseError",
    "ResourceLimitExceeded", "StrategyKind", "classify", "clausify", "entails",
    "load_ontology", "parse_ontology", "parse_query", "run_entailment", "satisfiable",
]

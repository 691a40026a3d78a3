"""Description-logic fragment: data model, text format and tableau reasoner."""

from .parser import format_ontology, parse_axioms, parse_class_expression, parse_ontology
from .reasoner import Reasoner, ReasonerStats, default_reasoner, entails, instances, is_consistent
from .syntax import (
    INCONSISTENCY,
    NOTHING,
    THING,
    AtLeast,
    AtMost,
    Axiom,
    Bottom,
    ClassAssertion,
    ClassExpr,
    Complement,
    DifferentIndividuals,
    DisjointClasses,
    EquivalentClasses,
    Exactly,
    Intersection,
    NamedClass,
    Nominal,
    Ontology,
    Only,
    PropertyAssertion,
    Some,
    SubClassOf,
    Top,
    Union_,
    UnionOf,
    axiom_individuals,
    expand_axiom,
    substitute_individuals,
    with_una,
)
from .tableau import DEFAULT_NODE_LIMIT, Tableau, satisfiable

__all__ = [name for name in dir() if not name.startswith("_")]

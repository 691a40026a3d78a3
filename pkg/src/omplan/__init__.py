"""Compile ontology-mediated planning specifications into PDDL with derived predicates."""

__version__ = "0.1.0"

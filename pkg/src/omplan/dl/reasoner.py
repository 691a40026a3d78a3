"""Consistency, entailment and instance retrieval on top of the tableau."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable

from .syntax import (
    INCONSISTENCY,
    Axiom,
    ClassAssertion,
    ClassExpr,
    Complement,
    DifferentIndividuals,
    DisjointClasses,
    EquivalentClasses,
    Intersection,
    Nominal,
    Only,
    Ontology,
    PropertyAssertion,
    SubClassOf,
    Top,
    Bottom,
    axiom_individuals,
    expand_axiom,
)
from .tableau import DEFAULT_NODE_LIMIT, Tableau


@dataclass
class ReasonerStats:
    consistency_checks: int = 0
    cache_hits: int = 0
    tableau_nodes: int = 0
    branches: int = 0


def _axioms(source: Ontology | Iterable[Axiom]) -> frozenset[Axiom]:
    if isinstance(source, Ontology):
        return source.axiom_set
    return frozenset(e for ax in source for e in expand_axiom(ax))


def _fresh_individual(axioms: Iterable[Axiom]) -> str:
    used = {a for ax in axioms for a in axiom_individuals(ax)}
    i = 0
    while f"_fresh{i}" in used:
        i += 1
    return f"_fresh{i}"


class Reasoner:
    """A thread-safe reasoner that memoizes consistency results by axiom set."""

    def __init__(self, node_limit: int = DEFAULT_NODE_LIMIT, cache: bool = True):
        self.node_limit = node_limit
        self._cache: dict[frozenset, bool] | None = {} if cache else None
        self._lock = threading.Lock()
        self.stats = ReasonerStats()

    def is_consistent(self, source: Ontology | Iterable[Axiom]) -> bool:
        axioms = _axioms(source)
        if self._cache is not None:
            with self._lock:
                hit = self._cache.get(axioms)
                if hit is not None:
                    self.stats.cache_hits += 1
                    return hit
        # sorting by string form keeps the search order independent of set iteration order
        tab = Tableau(sorted(axioms, key=str), self.node_limit)
        result = tab.run()
        with self._lock:
            self.stats.consistency_checks += 1
            self.stats.tableau_nodes += tab.nodes_created
            self.stats.branches += tab.branches
            if self._cache is not None:
                self._cache[axioms] = result
        return result

    def refutation(self, axiom: Axiom) -> list[Axiom] | None:
        """Axioms whose addition is inconsistent iff ``axiom`` is entailed (None for inconsistency)."""
        if axiom == INCONSISTENCY:
            return None
        if isinstance(axiom, ClassAssertion):
            return [ClassAssertion(axiom.individual, Complement(axiom.concept))]
        if isinstance(axiom, PropertyAssertion):
            return [ClassAssertion(axiom.subject, Only(axiom.role, Complement(Nominal(axiom.object))))]
        if isinstance(axiom, DifferentIndividuals):
            return [ClassAssertion(axiom.left, Nominal(axiom.right))]
        raise TypeError(f"unsupported entailment target: {axiom}")

    def entails(self, source: Ontology | Iterable[Axiom], axiom: Axiom) -> bool:
        axioms = _axioms(source)
        if isinstance(axiom, (EquivalentClasses, DisjointClasses)):
            return all(self.entails(axioms, e) for e in expand_axiom(axiom))
        if isinstance(axiom, SubClassOf) and axiom != INCONSISTENCY:
            if isinstance(axiom.sub, Top) and isinstance(axiom.sup, Bottom):
                return not self.is_consistent(axioms)
            fresh = _fresh_individual(axioms | {axiom})
            probe = ClassAssertion(fresh, Intersection((axiom.sub, Complement(axiom.sup))))
            return not self.is_consistent(axioms | {probe})
        extra = self.refutation(axiom)
        if extra is None:
            return not self.is_consistent(axioms)
        return not self.is_consistent(axioms | frozenset(extra))

    def instances(self, source: Ontology | Iterable[Axiom], concept: ClassExpr) -> frozenset[str]:
        axioms = _axioms(source)
        names = sorted({a for ax in axioms for a in axiom_individuals(ax)})
        if not self.is_consistent(axioms):
            return frozenset(names)
        return frozenset(a for a in names if self.entails(axioms, ClassAssertion(a, concept)))

    def clear_cache(self) -> None:
        with self._lock:
            if self._cache is not None:
                self._cache.clear()


_default = Reasoner()


def default_reasoner() -> Reasoner:
    return _default


def is_consistent(source: Ontology | Iterable[Axiom]) -> bool:
    return _default.is_consistent(source)


def entails(source: Ontology | Iterable[Axiom], axiom: Axiom) -> bool:
    return _default.entails(source, axiom)


def instances(source: Ontology | Iterable[Axiom], concept: ClassExpr) -> frozenset[str]:
    return _default.instances(source, concept)

"""Class expressions, axioms and ontologies of the supported DL fragment.

The fragment is ALCOQ: Boolean connectives, existential and universal
restrictions, qualified number restrictions and singleton nominals, over an
ABox with class/property assertions and individual inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union


class ClassExpr:
    """Marker base class for class expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class NamedClass(ClassExpr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Top(ClassExpr):
    def __str__(self) -> str:
        return "Thing"


@dataclass(frozen=True)
class Bottom(ClassExpr):
    def __str__(self) -> str:
        return "Nothing"


THING = Top()
NOTHING = Bottom()


@dataclass(frozen=True)
class Complement(ClassExpr):
    arg: ClassExpr

    def __str__(self) -> str:
        return f"not({self.arg})"


@dataclass(frozen=True)
class Intersection(ClassExpr):
    args: tuple[ClassExpr, ...]

    def __str__(self) -> str:
        return "and(" + ", ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Union_(ClassExpr):
    args: tuple[ClassExpr, ...]

    def __str__(self) -> str:
        return "or(" + ", ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Some(ClassExpr):
    role: str
    filler: ClassExpr = THING

    def __str__(self) -> str:
        return f"some({self.role}, {self.filler})"


@dataclass(frozen=True)
class Only(ClassExpr):
    role: str
    filler: ClassExpr

    def __str__(self) -> str:
        return f"all({self.role}, {self.filler})"


@dataclass(frozen=True)
class AtMost(ClassExpr):
    n: int
    role: str
    filler: ClassExpr = THING

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("cardinality must be non-negative")

    def __str__(self) -> str:
        return f"max({self.n}, {self.role}, {self.filler})"


@dataclass(frozen=True)
class AtLeast(ClassExpr):
    n: int
    role: str
    filler: ClassExpr = THING

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("cardinality must be non-negative")

    def __str__(self) -> str:
        return f"min({self.n}, {self.role}, {self.filler})"


@dataclass(frozen=True)
class Exactly(ClassExpr):
    """Sugar for ``and(max(n, r, C), min(n, r, C))``."""

    n: int
    role: str
    filler: ClassExpr = THING

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("cardinality must be non-negative")

    def __str__(self) -> str:
        return f"exactly({self.n}, {self.role}, {self.filler})"


@dataclass(frozen=True)
class Nominal(ClassExpr):
    individual: str

    def __str__(self) -> str:
        return "{" + self.individual + "}"


# ``Union`` would shadow typing.Union for importers; expose both spellings.
UnionOf = Union_


class Axiom:
    __slots__ = ()


@dataclass(frozen=True)
class SubClassOf(Axiom):
    sub: ClassExpr
    sup: ClassExpr

    def __str__(self) -> str:
        return f"SubClassOf({self.sub}, {self.sup})"


@dataclass(frozen=True)
class EquivalentClasses(Axiom):
    left: ClassExpr
    right: ClassExpr

    def __str__(self) -> str:
        return f"EquivalentClasses({self.left}, {self.right})"


@dataclass(frozen=True)
class DisjointClasses(Axiom):
    left: ClassExpr
    right: ClassExpr

    def __str__(self) -> str:
        return f"DisjointClasses({self.left}, {self.right})"


@dataclass(frozen=True)
class ClassAssertion(Axiom):
    individual: str
    concept: ClassExpr

    def __str__(self) -> str:
        return f"{self.concept}({self.individual})" if isinstance(self.concept, NamedClass) else \
            f"ClassAssertion({self.individual}, {self.concept})"


@dataclass(frozen=True)
class PropertyAssertion(Axiom):
    subject: str
    role: str
    object: str

    def __str__(self) -> str:
        return f"{self.role}({self.subject}, {self.object})"


@dataclass(frozen=True)
class DifferentIndividuals(Axiom):
    left: str
    right: str

    def __str__(self) -> str:
        return f"DifferentIndividuals({self.left}, {self.right})"


#: The entailment target "the ontology is inconsistent" (Thing ⊑ Nothing).
INCONSISTENCY = SubClassOf(THING, NOTHING)


def expand_axiom(axiom: Axiom) -> tuple[Axiom, ...]:
    """Remove axiom-level sugar."""
    if isinstance(axiom, EquivalentClasses):
        return (SubClassOf(axiom.left, axiom.right), SubClassOf(axiom.right, axiom.left))
    if isinstance(axiom, DisjointClasses):
        return (SubClassOf(Intersection((axiom.left, axiom.right)), NOTHING),)
    if isinstance(axiom, DifferentIndividuals):
        a, b = sorted((axiom.left, axiom.right))
        return (DifferentIndividuals(a, b),)
    return (axiom,)


def concept_individuals(c: ClassExpr) -> Iterator[str]:
    if isinstance(c, Nominal):
        yield c.individual
    elif isinstance(c, Complement):
        yield from concept_individuals(c.arg)
    elif isinstance(c, (Intersection, Union_)):
        for d in c.args:
            yield from concept_individuals(d)
    elif isinstance(c, (Some, Only, AtMost, AtLeast, Exactly)):
        yield from concept_individuals(c.filler)


def axiom_individuals(axiom: Axiom) -> Iterator[str]:
    if isinstance(axiom, ClassAssertion):
        yield axiom.individual
        yield from concept_individuals(axiom.concept)
    elif isinstance(axiom, PropertyAssertion):
        yield axiom.subject
        yield axiom.object
    elif isinstance(axiom, DifferentIndividuals):
        yield axiom.left
        yield axiom.right
    elif isinstance(axiom, (SubClassOf, EquivalentClasses, DisjointClasses)):
        for c in (axiom.sub, axiom.sup) if isinstance(axiom, SubClassOf) else (axiom.left, axiom.right):
            yield from concept_individuals(c)


def is_abox(axiom: Axiom) -> bool:
    return isinstance(axiom, (ClassAssertion, PropertyAssertion, DifferentIndividuals))


def substitute_individuals(axiom: Axiom, mapping: Mapping[str, str]) -> Axiom:
    """Rename individuals (used to instantiate query templates)."""
    def ind(a: str) -> str:
        return mapping.get(a, a)

    def cls(c: ClassExpr) -> ClassExpr:
        if isinstance(c, Nominal):
            return Nominal(ind(c.individual))
        if isinstance(c, Complement):
            return Complement(cls(c.arg))
        if isinstance(c, Intersection):
            return Intersection(tuple(cls(d) for d in c.args))
        if isinstance(c, Union_):
            return Union_(tuple(cls(d) for d in c.args))
        if isinstance(c, (Some, Only)):
            return type(c)(c.role, cls(c.filler))
        if isinstance(c, (AtMost, AtLeast, Exactly)):
            return type(c)(c.n, c.role, cls(c.filler))
        return c

    if isinstance(axiom, ClassAssertion):
        return ClassAssertion(ind(axiom.individual), cls(axiom.concept))
    if isinstance(axiom, PropertyAssertion):
        return PropertyAssertion(ind(axiom.subject), axiom.role, ind(axiom.object))
    if isinstance(axiom, DifferentIndividuals):
        return DifferentIndividuals(ind(axiom.left), ind(axiom.right))
    if isinstance(axiom, SubClassOf):
        return SubClassOf(cls(axiom.sub), cls(axiom.sup))
    if isinstance(axiom, EquivalentClasses):
        return EquivalentClasses(cls(axiom.left), cls(axiom.right))
    if isinstance(axiom, DisjointClasses):
        return DisjointClasses(cls(axiom.left), cls(axiom.right))
    return axiom


@dataclass(frozen=True)
class Ontology:
    """A finite set of axioms with sugar expanded; order of first occurrence is kept."""

    axioms: tuple[Axiom, ...] = ()

    def __post_init__(self):
        out: list[Axiom] = []
        seen: set[Axiom] = set()
        for ax in self.axioms:
            for e in expand_axiom(ax):
                if e not in seen:
                    seen.add(e)
                    out.append(e)
        object.__setattr__(self, "axioms", tuple(out))

    @cached_property
    def individuals(self) -> frozenset[str]:
        return frozenset(a for ax in self.axioms for a in axiom_individuals(ax))

    @cached_property
    def axiom_set(self) -> frozenset[Axiom]:
        return frozenset(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    def __iter__(self):
        return iter(self.axioms)

    def __contains__(self, axiom: object) -> bool:
        return axiom in self.axiom_set

    def union(self, extra: Iterable[Axiom]) -> "Ontology":
        return Ontology(self.axioms + tuple(extra))

    @property
    def tbox(self) -> tuple[Axiom, ...]:
        return tuple(a for a in self.axioms if not is_abox(a))

    @property
    def abox(self) -> tuple[Axiom, ...]:
        return tuple(a for a in self.axioms if is_abox(a))


def with_una(ontology: Ontology) -> Ontology:
    """Assert pairwise inequality of all named individuals (unique name assumption)."""
    names = sorted(ontology.individuals)
    extra = [DifferentIndividuals(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
    return ontology.union(extra)


ClassExprT = Union[NamedClass, Top, Bottom, Complement, Intersection, Union_, Some, Only,
                   AtMost, AtLeast, Exactly, Nominal]

"""Data model for the supported PDDL subset.

Terms are plain strings; a term starting with ``?`` is a variable, anything
else is an object constant. All types are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

BASE = "base"
DERIVED = "derived"
QUERY = "query"


def is_variable(term: str) -> bool:
    return term.startswith("?")


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.predicate}({', '.join(self.args)})"

    def pddl(self) -> str:
        return "(" + " ".join((self.predicate, *self.args)) + ")"

    def sort_key(self) -> tuple:
        return (self.predicate, self.args)


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Exists:
    variables: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    variables: tuple[str, ...]
    body: "Formula"


Formula = Union[Atom, Eq, Not, And, Or, Exists, Forall]

#: ``(and)`` is true and ``(or)`` is false.
TRUE = And(())
FALSE = Or(())


def atoms_of(formula: Formula) -> Iterator[tuple[Atom, bool]]:
    """Yield every atom of ``formula`` with its polarity (True = positive)."""
    stack: list[tuple[Formula, bool]] = [(formula, True)]
    while stack:
        f, positive = stack.pop()
        if isinstance(f, Atom):
            yield f, positive
        elif isinstance(f, Not):
            stack.append((f.arg, not positive))
        elif isinstance(f, (And, Or)):
            stack.extend((g, positive) for g in reversed(f.args))
        elif isinstance(f, (Exists, Forall)):
            stack.append((f.body, positive))


def free_variables(formula: Formula) -> set[str]:
    if isinstance(formula, Atom):
        return {t for t in formula.args if is_variable(t)}
    if isinstance(formula, Eq):
        return {t for t in (formula.left, formula.right) if is_variable(t)}
    if isinstance(formula, Not):
        return free_variables(formula.arg)
    if isinstance(formula, (And, Or)):
        out: set[str] = set()
        for g in formula.args:
            out |= free_variables(g)
        return out
    return free_variables(formula.body) - set(formula.variables)


def constants_of(formula: Formula) -> set[str]:
    if isinstance(formula, Atom):
        return {t for t in formula.args if not is_variable(t)}
    if isinstance(formula, Eq):
        return {t for t in (formula.left, formula.right) if not is_variable(t)}
    if isinstance(formula, Not):
        return constants_of(formula.arg)
    if isinstance(formula, (And, Or)):
        out: set[str] = set()
        for g in formula.args:
            out |= constants_of(g)
        return out
    return constants_of(formula.body)


def substitute(formula: Formula, binding: Mapping[str, str]) -> Formula:
    """Replace free variables according to ``binding``; bound variables shadow it."""
    if not binding:
        return formula
    if isinstance(formula, Atom):
        return Atom(formula.predicate, tuple(binding.get(t, t) for t in formula.args))
    if isinstance(formula, Eq):
        return Eq(binding.get(formula.left, formula.left), binding.get(formula.right, formula.right))
    if isinstance(formula, Not):
        return Not(substitute(formula.arg, binding))
    if isinstance(formula, And):
        return And(tuple(substitute(g, binding) for g in formula.args))
    if isinstance(formula, Or):
        return Or(tuple(substitute(g, binding) for g in formula.args))
    inner = {k: v for k, v in binding.items() if k not in formula.variables}
    return type(formula)(formula.variables, substitute(formula.body, inner))


def format_formula(formula: Formula) -> str:
    """Render a formula in PDDL prefix syntax."""
    if isinstance(formula, Atom):
        return formula.pddl()
    if isinstance(formula, Eq):
        return f"(= {formula.left} {formula.right})"
    if isinstance(formula, Not):
        return f"(not {format_formula(formula.arg)})"
    if isinstance(formula, (And, Or)):
        op = "and" if isinstance(formula, And) else "or"
        if not formula.args:
            return f"({op})"
        return f"({op} " + " ".join(format_formula(g) for g in formula.args) + ")"
    op = "exists" if isinstance(formula, Exists) else "forall"
    return f"({op} ({' '.join(formula.variables)}) {format_formula(formula.body)})"


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    arity: int
    kind: str = BASE


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple[str, ...]
    precondition: Formula = TRUE
    add: tuple[Atom, ...] = ()
    delete: tuple[Atom, ...] = ()


@dataclass(frozen=True)
class DerivationRule:
    """``head <- body``. Head arguments are variables or (for ground rules) constants."""

    head: Atom
    body: Formula

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(t for t in self.head.args if is_variable(t))

    def __str__(self) -> str:
        return f"{self.head} <- {format_formula(self.body)}"


@dataclass(frozen=True)
class Domain:
    name: str
    predicates: tuple[PredicateDecl, ...] = ()
    actions: tuple[ActionSchema, ...] = ()
    rules: tuple[DerivationRule, ...] = ()
    constants: tuple[str, ...] = ()
    requirements: tuple[str, ...] = field(default=(), compare=False)

    @cached_property
    def predicate_map(self) -> dict[str, PredicateDecl]:
        return {p.name: p for p in self.predicates}

    def predicate(self, name: str) -> PredicateDecl | None:
        return self.predicate_map.get(name)

    def derived_predicates(self) -> set[str]:
        return {p.name for p in self.predicates if p.kind != BASE}

    def action(self, name: str) -> ActionSchema | None:
        for a in self.actions:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    objects: tuple[str, ...] = ()
    init: frozenset[Atom] = frozenset()
    goal: Formula = TRUE


@dataclass(frozen=True)
class PlanningSpec:
    domain: Domain
    problem: Problem

    @cached_property
    def objects(self) -> tuple[str, ...]:
        """The object set O (domain constants and problem objects), sorted."""
        return tuple(sorted(set(self.domain.constants) | set(self.problem.objects)))

    @property
    def rules(self) -> tuple[DerivationRule, ...]:
        return self.domain.rules

    @property
    def init(self) -> frozenset[Atom]:
        return self.problem.init

    @property
    def goal(self) -> Formula:
        return self.problem.goal


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    precondition: Formula
    add: frozenset[Atom] = field(default_factory=frozenset)
    delete: frozenset[Atom] = field(default_factory=frozenset)

    def __str__(self) -> str:
        return "(" + " ".join((self.name, *self.args)) + ")"

    def sort_key(self) -> tuple:
        return (self.name, self.args)


Plan = tuple[GroundAction, ...]


def sorted_atoms(atoms: Iterable[Atom]) -> list[Atom]:
    return sorted(atoms, key=Atom.sort_key)

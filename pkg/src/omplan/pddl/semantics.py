"""State semantics: grounding, rule closure, applicability, plan replay."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import AbstractSet, Callable, Hashable, Iterable, Mapping, Sequence

from ..errors import InputError, PartialBinding
from .syntax import (
    FALSE,
    TRUE,
    ActionSchema,
    And,
    Atom,
    DerivationRule,
    Eq,
    Exists,
    Forall,
    Formula,
    GroundAction,
    Not,
    Or,
    PlanningSpec,
    atoms_of,
    is_variable,
    substitute,
)

State = frozenset  # frozenset[Atom]


def ground_action(schema: ActionSchema, binding: Mapping[str, str]) -> GroundAction:
    missing = [v for v in schema.parameters if v not in binding]
    if missing:
        raise PartialBinding(f"action {schema.name}: no value for {', '.join(missing)}")
    theta = {v: binding[v] for v in schema.parameters}
    return GroundAction(
        name=schema.name,
        args=tuple(theta[v] for v in schema.parameters),
        precondition=substitute(schema.precondition, theta),
        add=frozenset(substitute(a, theta) for a in schema.add),
        delete=frozenset(substitute(a, theta) for a in schema.delete),
    )


def holds(
    formula: Formula,
    atoms: AbstractSet[Atom],
    objects: Sequence[str],
    binding: Mapping[str, str] | None = None,
) -> bool:
    """Closed-world evaluation of ``formula`` over ``atoms``; quantifiers range over ``objects``."""
    b = binding or {}
    if isinstance(formula, Atom):
        return Atom(formula.predicate, tuple(b.get(t, t) for t in formula.args)) in atoms
    if isinstance(formula, Eq):
        return b.get(formula.left, formula.left) == b.get(formula.right, formula.right)
    if isinstance(formula, Not):
        return not holds(formula.arg, atoms, objects, b)
    if isinstance(formula, And):
        return all(holds(g, atoms, objects, b) for g in formula.args)
    if isinstance(formula, Or):
        return any(holds(g, atoms, objects, b) for g in formula.args)
    test = any if isinstance(formula, Exists) else all
    return test(
        holds(formula.body, atoms, objects, {**b, **dict(zip(formula.variables, values))})
        for values in itertools.product(objects, repeat=len(formula.variables))
    )


def ground_formula(
    formula: Formula,
    objects: Sequence[str],
    fixed: Callable[[Atom], bool | None] | None = None,
) -> Formula:
    """Expand quantifiers over ``objects`` and fold constants.

    ``fixed`` may return a truth value for atoms whose value cannot change
    (static atoms); those are folded away as well.
    """

    def go(f: Formula, b: dict[str, str]) -> Formula:
        if isinstance(f, Atom):
            atom = Atom(f.predicate, tuple(b.get(t, t) for t in f.args))
            if fixed is not None:
                value = fixed(atom)
                if value is not None:
                    return TRUE if value else FALSE
            return atom
        if isinstance(f, Eq):
            left, right = b.get(f.left, f.left), b.get(f.right, f.right)
            if is_variable(left) or is_variable(right):
                return Eq(left, right)
            return TRUE if left == right else FALSE
        if isinstance(f, Not):
            inner = go(f.arg, b)
            if inner == TRUE:
                return FALSE
            if inner == FALSE:
                return TRUE
            if isinstance(inner, Not):
                return inner.arg
            return Not(inner)
        if isinstance(f, (Exists, Forall)):
            parts = [
                go(f.body, {**b, **dict(zip(f.variables, values))})
                for values in itertools.product(objects, repeat=len(f.variables))
            ]
            return _junction(Or if isinstance(f, Exists) else And, parts)
        return _junction(type(f), [go(g, b) for g in f.args])

    return go(formula, {})


def _junction(kind: type, parts: Iterable[Formula]) -> Formula:
    absorbing, neutral = (FALSE, TRUE) if kind is And else (TRUE, FALSE)
    out: list[Formula] = []
    seen = set()
    for p in parts:
        if p == absorbing:
            return absorbing
        if p == neutral:
            continue
        for q in p.args if isinstance(p, kind) else (p,):
            if q not in seen:
                seen.add(q)
                out.append(q)
    if len(out) == 1:
        return out[0]
    return kind(tuple(out))


def compile_ground(formula: Formula, key: Callable[[Atom], Hashable] = lambda a: a) -> Callable[[AbstractSet], bool]:
    """Turn a quantifier-free ground formula into a predicate over sets of keys."""
    if isinstance(formula, Atom):
        k = key(formula)
        return lambda s: k in s
    if isinstance(formula, Not):
        inner = compile_ground(formula.arg, key)
        return lambda s: not inner(s)
    if isinstance(formula, Eq):
        value = formula.left == formula.right
        return lambda s: value
    if isinstance(formula, (And, Or)):
        atoms = [g for g in formula.args if isinstance(g, Atom)]
        rest = [compile_ground(g, key) for g in formula.args if not isinstance(g, Atom)]
        keys = frozenset(key(a) for a in atoms)
        if isinstance(formula, And):
            if not rest:
                return keys.issubset
            return lambda s: keys.issubset(s) and all(f(s) for f in rest)
        if not rest:
            return lambda s: not keys.isdisjoint(s)
        return lambda s: (not keys.isdisjoint(s)) or any(f(s) for f in rest)
    raise TypeError(f"not a ground formula: {formula!r}")


@dataclass(frozen=True)
class GroundRule:
    head: Atom
    body: Formula


class RuleSet:
    """Derivation rules grounded over a fixed object set, ready for closure computation."""

    def __init__(self, rules: Sequence[DerivationRule], objects: Sequence[str],
                 key: Callable[[Atom], Hashable] = lambda a: a):
        self.objects = tuple(objects)
        self.key = key
        ground: list[GroundRule] = []
        for rule in rules:
            variables = rule.variables
            for values in itertools.product(self.objects, repeat=len(variables)):
                b = dict(zip(variables, values))
                head = substitute(rule.head, b)
                body = ground_formula(substitute(rule.body, b), self.objects)
                if body != FALSE:
                    ground.append(GroundRule(head, body))
        self.ground_rules = _order_by_dependency(ground)
        self._compiled = [(key(g.head), compile_ground(g.body, key)) for g in self.ground_rules]

    def closure_keys(self, keys: AbstractSet) -> frozenset:
        derived = set(keys)
        changed = True
        while changed:
            changed = False
            for head, body in self._compiled:
                if head not in derived and body(derived):
                    derived.add(head)
                    changed = True
        return frozenset(derived)

    def closure(self, state: Iterable[Atom]) -> frozenset[Atom]:
        return self.closure_keys(frozenset(state))


def _order_by_dependency(rules: list[GroundRule]) -> list[GroundRule]:
    """Put rules whose bodies use fewer derived heads first so one pass usually suffices."""
    heads = {r.head.predicate for r in rules}
    depth: dict[str, int] = {h: 0 for h in heads}
    for _ in range(len(heads)):
        changed = False
        for r in rules:
            d = 1 + max((depth[a.predicate] for a, _ in atoms_of(r.body) if a.predicate in heads), default=-1)
            if d > depth[r.head.predicate] and d <= len(heads):
                depth[r.head.predicate] = d
                changed = True
        if not changed:
            break
    return sorted(rules, key=lambda r: depth[r.head.predicate])


def derivation_closure(state: Iterable[Atom], rules: Sequence[DerivationRule], objects: Sequence[str]) -> frozenset[Atom]:
    """The least fixpoint of ``rules`` over ``state``."""
    if not rules:
        return frozenset(state)
    return RuleSet(rules, objects).closure(state)


def is_applicable(action: GroundAction, state: Iterable[Atom], rules: Sequence[DerivationRule] | RuleSet,
                  objects: Sequence[str]) -> bool:
    ruleset = rules if isinstance(rules, RuleSet) else RuleSet(rules, objects)
    return holds(action.precondition, ruleset.closure(state), objects)


def apply_action(action: GroundAction, state: Iterable[Atom]) -> frozenset[Atom]:
    return (frozenset(state) - action.delete) | action.add


@dataclass(frozen=True)
class PlanVerdict:
    valid: bool
    failed_step: int | None = None
    reason: str = ""
    states: tuple[frozenset, ...] = ()

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "valid"
        if self.failed_step is None:
            return f"invalid: {self.reason}"
        return f"invalid at step {self.failed_step}: {self.reason}"


def validate_plan(spec: PlanningSpec, plan: Sequence[GroundAction]) -> PlanVerdict:
    """Replay ``plan`` from the initial state and check the goal."""
    ruleset = RuleSet(spec.rules, spec.objects)
    objects = spec.objects
    state = frozenset(spec.init)
    states = [state]
    for i, action in enumerate(plan, start=1):
        if not holds(action.precondition, ruleset.closure(state), objects):
            return PlanVerdict(False, i, f"{action} is not applicable", tuple(states))
        state = apply_action(action, state)
        states.append(state)
    if not holds(spec.goal, ruleset.closure(state), objects):
        return PlanVerdict(False, None, "goal not reached", tuple(states))
    return PlanVerdict(True, None, "", tuple(states))


def instantiate_plan(spec: PlanningSpec, steps: Iterable[tuple[str, tuple[str, ...]]]) -> tuple[GroundAction, ...]:
    """Ground ``(name, args)`` pairs against the action schemas of ``spec``."""
    out = []
    for name, args in steps:
        schema = spec.domain.action(name)
        if schema is None:
            raise InputError(f"unknown action {name!r} in plan")
        if len(args) != len(schema.parameters):
            raise InputError(f"action {name!r} takes {len(schema.parameters)} argument(s), got {len(args)}")
        unknown = [a for a in args if a not in spec.objects]
        if unknown:
            raise InputError(f"unknown object(s) {unknown} in plan step ({name} {' '.join(args)})")
        out.append(ground_action(schema, dict(zip(schema.parameters, args))))
    return tuple(out)

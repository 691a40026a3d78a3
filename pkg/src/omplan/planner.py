"""Blind forward search over a classical specification with derivation rules.

Uniform-cost search with unit action costs, i.e. breadth-first search, with
duplicate detection on the set of stored (base) atoms. Successors are
generated in a fixed order (action name, then argument tuple), so the
returned plan is deterministic.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from .pddl.semantics import RuleSet, compile_ground, ground_action, ground_formula
from .pddl.syntax import BASE, FALSE, Atom, GroundAction, PlanningSpec

SOLVED = "solved"
UNSOLVABLE = "unsolvable"
LIMIT = "resource-limit"


@dataclass(frozen=True)
class Limits:
    max_states: int | None = 1_000_000
    time_limit: float | None = None  # seconds


@dataclass
class SearchStats:
    expanded: int = 0
    generated: int = 0
    states: int = 0
    ground_actions: int = 0
    seconds: float = 0.0


@dataclass
class SearchResult:
    status: str
    plan: tuple[GroundAction, ...] | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    message: str = ""

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def static_predicates(spec: PlanningSpec) -> set[str]:
    """Base predicates that no action adds or deletes."""
    touched = {a.predicate for act in spec.domain.actions for a in act.add + act.delete}
    return {p.name for p in spec.domain.predicates if p.kind == BASE and p.name not in touched}


def grounded_actions(spec: PlanningSpec, prune: bool = True) -> list[GroundAction]:
    """All ground actions in canonical order.

    With ``prune``, atoms over static predicates are evaluated against the
    initial state and actions whose precondition becomes false are dropped.
    """
    objects = spec.objects
    statics = static_predicates(spec) if prune else set()
    init = spec.init

    def fixed(atom: Atom) -> bool | None:
        return (atom in init) if atom.predicate in statics else None

    out = []
    for schema in sorted(spec.domain.actions, key=lambda a: a.name):
        for values in itertools.product(objects, repeat=len(schema.parameters)):
            ga = ground_action(schema, dict(zip(schema.parameters, values)))
            if prune:
                pre = ground_formula(ga.precondition, objects, fixed)
                if pre == FALSE:
                    continue
                ga = GroundAction(ga.name, ga.args, pre, ga.add, ga.delete)
            out.append(ga)
    return out


Heuristic = Callable[[frozenset], int]


def solve(spec: PlanningSpec, limits: Limits | None = None, heuristic: Heuristic | None = None) -> SearchResult:
    """Shortest plan by action count.

    ``heuristic`` is a plug-in point for informed search; only the blind
    search (``None``) is implemented.
    """
    if heuristic is not None:
        raise NotImplementedError("only blind search is implemented")
    limits = limits or Limits()
    started = time.perf_counter()
    stats = SearchStats()
    objects = spec.objects
    rules = RuleSet(spec.rules, objects)
    actions = grounded_actions(spec)
    stats.ground_actions = len(actions)
    compiled = [
        (a, compile_ground(ground_formula(a.precondition, objects)), a.delete, a.add) for a in actions
    ]
    goal = compile_ground(ground_formula(spec.goal, objects))

    start = frozenset(spec.init)
    parent: dict[frozenset, tuple[frozenset, GroundAction] | None] = {start: None}

    def finish(state: frozenset) -> SearchResult:
        plan = []
        while parent[state] is not None:
            prev, act = parent[state]
            plan.append(act)
            state = prev
        stats.states = len(parent)
        stats.seconds = time.perf_counter() - started
        return SearchResult(SOLVED, tuple(reversed(plan)), stats)

    if goal(rules.closure(start)):
        return finish(start)
    queue = deque([start])
    while queue:
        state = queue.popleft()
        stats.expanded += 1
        closure = rules.closure(state)
        for action, pre, delete, add in compiled:
            if not pre(closure):
                continue
            nxt = (state - delete) | add
            stats.generated += 1
            if nxt in parent:
                continue
            parent[nxt] = (state, action)
            if goal(rules.closure(nxt)):
                return finish(nxt)
            queue.append(nxt)
        if limits.max_states is not None and len(parent) > limits.max_states:
            stats.states = len(parent)
            stats.seconds = time.perf_counter() - started
            return SearchResult(LIMIT, None, stats, f"more than {limits.max_states} states")
        if limits.time_limit is not None and time.perf_counter() - started > limits.time_limit:
            stats.states = len(parent)
            stats.seconds = time.perf_counter() - started
            return SearchResult(LIMIT, None, stats, f"time limit of {limits.time_limit} s reached")
    stats.states = len(parent)
    stats.seconds = time.perf_counter() - started
    return SearchResult(UNSOLVABLE, None, stats)

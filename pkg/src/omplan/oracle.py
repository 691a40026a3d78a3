"""Direct semantics of ontology-enhanced states, with the reasoner in the loop.

This module never looks at compiled rules. It exists to check the compiler
and the planner against the definitions: ``extend`` builds the canonical
compatible state, ``check_compatibility`` tests C1 to C5 one by one, and
``om_validate_plan`` / ``om_bfs`` replay or search plans over such states.
"""

from __future__ import annotations

import itertools
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dl.reasoner import Reasoner, default_reasoner
from .dl.syntax import Axiom
from .errors import NotApplicable, ResourceLimitExceeded
from .interface import OMPlanningSpec, instantiate_query
from .pddl.semantics import PlanVerdict, RuleSet, apply_action, ground_action, holds
from .pddl.syntax import BASE, And, Atom, GroundAction


@dataclass(frozen=True)
class OntologyEnhancedState:
    """q = <P_q, O_q>; ``atoms`` holds base and query atoms, never derived ones."""

    atoms: frozenset[Atom]
    ontology: frozenset[Axiom]


@dataclass(frozen=True)
class Compatibility:
    compatible: bool
    condition: str | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.compatible


class DirectSemantics:
    """Evaluator for one specification; memoizes the ontology side of ``ext``.

    The query atoms of ``ext(P)`` depend on ``P`` only through the mapped
    axioms, so they are cached per mapped axiom set.
    """

    def __init__(self, om: OMPlanningSpec, reasoner: Reasoner | None = None):
        self.om = om
        self.reasoner = reasoner or default_reasoner()
        self.rules = RuleSet(om.planning.rules, om.planning.objects)
        self.objects = om.planning.objects
        self.static = om.ontology.axiom_set
        self._assignments = [(q, theta, args) for q in om.queries for theta, args in om.assignments(q, self.reasoner)]
        self._cache: dict[frozenset, tuple[frozenset, bool]] = {}
        self._lock = threading.Lock()

    # ext and helpers ------------------------------------------------------

    def strip_queries(self, atoms: Iterable[Atom]) -> frozenset[Atom]:
        qp = self.om.query_predicates
        return frozenset(a for a in atoms if a.predicate not in qp)

    def mapped(self, atoms: Iterable[Atom]) -> frozenset[Axiom]:
        """F applied to the derivation closure of ``atoms``."""
        return self.om.fluents.map_state(self.rules.closure(atoms))

    def _query_side(self, fluents: frozenset[Axiom]) -> tuple[frozenset[Atom], bool]:
        with self._lock:
            hit = self._cache.get(fluents)
        if hit is not None:
            return hit
        axioms = self.static | fluents
        consistent = self.reasoner.is_consistent(axioms)
        found = set()
        for q, theta, args in self._assignments:
            if all(self.reasoner.entails(axioms, ax) for ax in instantiate_query(q, theta)):
                found.add(Atom(q.predicate, args))
        result = (frozenset(found), consistent)
        with self._lock:
            self._cache[fluents] = result
        return result

    def extend(self, atoms: Iterable[Atom]) -> OntologyEnhancedState:
        base = self.strip_queries(atoms)
        fluents = self.mapped(base)
        queries, _ = self._query_side(fluents)
        return OntologyEnhancedState(base | queries, self.static | fluents)

    def consistent(self, q: OntologyEnhancedState) -> bool:
        return self.reasoner.is_consistent(q.ontology)

    # compatibility --------------------------------------------------------

    def check_compatibility(self, q: OntologyEnhancedState) -> Compatibility:
        planning = self.om.planning
        preds = planning.domain.predicate_map
        objects = set(planning.objects)
        for a in sorted(q.atoms, key=Atom.sort_key):
            decl = preds.get(a.predicate)
            if decl is None or decl.arity != len(a.args) or not set(a.args) <= objects:
                return Compatibility(False, "C1", a)
        missing = self.static - q.ontology
        if missing:
            return Compatibility(False, "C2", min(missing, key=str))
        closure = self.rules.closure(q.atoms)
        required = self.om.fluents.map_state(closure)
        for ax in sorted(required - q.ontology, key=str):
            return Compatibility(False, "C3", ax)
        extra = q.ontology - self.static - required
        if extra:
            return Compatibility(False, "C4", min(extra, key=str))
        for s, theta, args in self._assignments:
            atom = Atom(s.predicate, args)
            if atom in q.atoms:
                continue
            if all(self.reasoner.entails(q.ontology, ax) for ax in instantiate_query(s, theta)):
                return Compatibility(False, "C5", (s.predicate, dict(theta)))
        return Compatibility(True)

    # actions and plans ----------------------------------------------------

    def applicable(self, q: OntologyEnhancedState, action: GroundAction, block_inconsistent: bool = False) -> bool:
        if block_inconsistent and not self.consistent(q):
            return False
        return holds(action.precondition, self.rules.closure(q.atoms), self.objects)

    def apply(self, q: OntologyEnhancedState, action: GroundAction,
              block_inconsistent: bool = False) -> OntologyEnhancedState:
        if not self.applicable(q, action, block_inconsistent):
            raise NotApplicable(f"{action} is not applicable")
        return self.extend(apply_action(action, q.atoms))

    def goal_reached(self, q: OntologyEnhancedState) -> bool:
        return holds(self.om.planning.goal, self.rules.closure(q.atoms), self.objects)

    def initial(self) -> OntologyEnhancedState:
        return self.extend(self.om.planning.init)

    def validate_plan(self, plan: Sequence[GroundAction], block_inconsistent: bool = False) -> PlanVerdict:
        q = self.initial()
        states = [q.atoms]
        for i, action in enumerate(plan, start=1):
            if not self.applicable(q, action, block_inconsistent):
                reason = f"{action} is not applicable"
                if block_inconsistent and not self.consistent(q):
                    reason += " (the state is inconsistent)"
                return PlanVerdict(False, i, reason, tuple(states))
            q = self.extend(apply_action(action, q.atoms))
            states.append(q.atoms)
        if not self.goal_reached(q):
            return PlanVerdict(False, None, "goal not reached", tuple(states))
        return PlanVerdict(True, None, "", tuple(states))

    def all_ground_actions(self) -> list[GroundAction]:
        out = []
        for schema in sorted(self.om.planning.domain.actions, key=lambda a: a.name):
            for values in itertools.product(self.objects, repeat=len(schema.parameters)):
                out.append(ground_action(schema, dict(zip(schema.parameters, values))))
        return out

    def _relevant_actions(self) -> list[GroundAction]:
        """Ground actions minus those refuted by a positive literal over a never-changing predicate."""
        domain = self.om.planning.domain
        changed = {a.predicate for act in domain.actions for a in act.add + act.delete}
        frozen = {p.name for p in domain.predicates if p.kind == BASE} - changed
        init = self.om.planning.init
        out = []
        for a in self.all_ground_actions():
            pre = a.precondition
            literals = pre.args if isinstance(pre, And) else (pre,)
            if any(isinstance(x, Atom) and x.predicate in frozen and x not in init for x in literals):
                continue
            out.append(a)
        return out

    def bfs(self, block_inconsistent: bool = False, max_states: int = 100_000):
        """Shortest plan over ontology-enhanced states, or None if none exists.

        Returns ``(plan, states_seen)``.
        """
        actions = self._relevant_actions()
        start = self.initial()
        if self.goal_reached(start):
            return (), 1
        parent: dict[frozenset, tuple[frozenset, GroundAction] | None] = {start.atoms: None}
        queue = deque([start])
        while queue:
            q = queue.popleft()
            closure = self.rules.closure(q.atoms)
            if block_inconsistent and not self.consistent(q):
                continue
            for a in actions:
                if not holds(a.precondition, closure, self.objects):
                    continue
                nxt = self.extend(apply_action(a, q.atoms))
                if nxt.atoms in parent:
                    continue
                parent[nxt.atoms] = (q.atoms, a)
                if self.goal_reached(nxt):
                    plan = []
                    key = nxt.atoms
                    while parent[key] is not None:
                        prev, act = parent[key]
                        plan.append(act)
                        key = prev
                    return tuple(reversed(plan)), len(parent)
                if len(parent) > max_states:
                    raise ResourceLimitExceeded(f"direct search exceeded {max_states} states")
                queue.append(nxt)
        return None, len(parent)


def extend(atoms: Iterable[Atom], om: OMPlanningSpec, reasoner: Reasoner | None = None) -> OntologyEnhancedState:
    """ext(P, OP)."""
    return DirectSemantics(om, reasoner).extend(atoms)


def check_compatibility(q: OntologyEnhancedState, om: OMPlanningSpec, reasoner: Reasoner | None = None) -> Compatibility:
    return DirectSemantics(om, reasoner).check_compatibility(q)


def om_apply(q: OntologyEnhancedState, action: GroundAction, om: OMPlanningSpec,
             reasoner: Reasoner | None = None) -> OntologyEnhancedState:
    """q(a) = ext(P_q(a), OP)."""
    return DirectSemantics(om, reasoner).apply(q, action)


def om_validate_plan(om: OMPlanningSpec, plan: Sequence[GroundAction], block_inconsistent: bool = False,
                     reasoner: Reasoner | None = None) -> PlanVerdict:
    return DirectSemantics(om, reasoner).validate_plan(plan, block_inconsistent)


def om_bfs(om: OMPlanningSpec, block_inconsistent: bool = False, max_states: int = 100_000,
           reasoner: Reasoner | None = None):
    return DirectSemantics(om, reasoner).bfs(block_inconsistent, max_states)

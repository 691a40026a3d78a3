"""Compilation of an ontology-mediated specification into plain PDDL with derived predicates.

Generated rules, with ``J`` ranging over justifications and ``F⁻`` mapping
fluents back to planning atoms::

    inconsistent <- OR_{J in Just_bot} AND_{b in J} F⁻(b)
    p_S(x1..xn)  <- inconsistent OR  OR_{theta} phi_{S,theta}
    phi_{S,theta} = AND_i (xi = F⁻(theta(xi))) AND AND_{a in theta(Q_S)} OR_{J in Just_a} AND_{b in J} F⁻(b)

By default query rules are emitted in ground form: one rule per legal
assignment whose head already carries the objects ``F⁻(theta(xi))``, so the
equality conjuncts disappear.

Conventions for the generated bodies: ``(or)`` is false and ``(and)`` is true.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .dl.reasoner import Reasoner, default_reasoner
from .dl.syntax import Axiom
from .errors import InputError, InvariantViolation
from .interface import FluentInterface, OMPlanningSpec, QuerySpec, instantiate_query
from .justify import DEFAULT_HST_LIMIT, EntailmentOracle, Justification, canonical, justify_targets
from .pddl.emit import emit_domain, emit_problem
from .pddl.parser import check_spec
from .pddl.syntax import (
    DERIVED,
    FALSE,
    ActionSchema,
    And,
    Atom,
    DerivationRule,
    Domain,
    Eq,
    Formula,
    Not,
    Or,
    PlanningSpec,
    PredicateDecl,
    Problem,
    constants_of,
    sorted_atoms,
)

INCONSISTENT = "inconsistent"
INCONSISTENT_ATOM = Atom(INCONSISTENT, ())


@dataclass(frozen=True)
class CompileOptions:
    block_inconsistent: bool = False
    simplify: bool = False
    ground: bool = True
    jobs: int = 1
    hst_node_limit: int = DEFAULT_HST_LIMIT


@dataclass
class CompiledSpec:
    planning: PlanningSpec
    om: OMPlanningSpec
    fluents: list[tuple[Atom, Axiom]]
    bottom: list[Justification]
    justifications: dict[Axiom, list[Justification]]
    report: dict = field(default_factory=dict)

    @property
    def rules(self) -> tuple[DerivationRule, ...]:
        return self.planning.rules


def fluent_table(fluents: FluentInterface) -> list[tuple[Atom, Axiom]]:
    """The fluent set: every mappable ground atom with its axiom, in atom order."""
    out = []
    for atom in fluents.fluent_atoms():
        ax = fluents.map_atom(atom)
        if ax is not None:
            out.append((atom, ax))
    return out


def _conjunction(just: Justification, f: FluentInterface) -> And:
    atoms = []
    for ax in just:
        atom = f.inverse(ax)
        if atom is None:
            raise InvariantViolation(f"justification member {ax} is not in the range of the fluent interface")
        atoms.append(atom)
    return And(tuple(sorted_atoms(atoms)))


def _dnf(justs: Iterable[Justification], f: FluentInterface) -> Or:
    return Or(tuple(_conjunction(j, f) for j in canonical(justs)))


def build_inconsistent_rule(bottom: Iterable[Justification], f: FluentInterface) -> DerivationRule:
    """``inconsistent <- OR_J AND F⁻(J)``; an empty Just_bot gives the body ``(or)``."""
    return DerivationRule(INCONSISTENT_ATOM, _dnf(bottom, f))


def build_assignment_formula(
    spec: QuerySpec,
    theta: Mapping[str, str],
    justifications: Mapping[Axiom, Sequence[Justification]],
    f: FluentInterface,
    ground: bool = False,
) -> Formula:
    """phi_{S,theta}. With ``ground`` the equality conjuncts are left out (they move into the head)."""
    parts: list[Formula] = []
    if not ground:
        for v in spec.variables:
            obj = f.inverse_object(theta[v])
            if obj is None:
                raise InputError(f"assignment {dict(theta)} fails the interface guard for {v}")
            parts.append(Eq(v, obj))
    for alpha in instantiate_query(spec, theta):
        parts.append(_dnf(justifications[alpha], f))
    return And(tuple(parts))


def build_query_rule(
    spec: QuerySpec,
    assignments: Sequence[Mapping[str, str]],
    justifications: Mapping[Axiom, Sequence[Justification]],
    f: FluentInterface,
) -> DerivationRule:
    """The variable-headed rule ``p_S(x1..xn) <- inconsistent OR OR_theta phi_{S,theta}``."""
    disjuncts: list[Formula] = [INCONSISTENT_ATOM]
    disjuncts += [build_assignment_formula(spec, t, justifications, f) for t in assignments]
    return DerivationRule(Atom(spec.predicate, spec.variables), Or(tuple(disjuncts)))


def build_ground_query_rules(
    spec: QuerySpec,
    assignments: Sequence[tuple[Mapping[str, str], tuple[str, ...]]],
    justifications: Mapping[Axiom, Sequence[Justification]],
    f: FluentInterface,
) -> list[DerivationRule]:
    """One rule ``p_S(o1..on) <- inconsistent OR phi`` per guard-passing assignment."""
    rules = []
    for theta, args in assignments:
        phi = build_assignment_formula(spec, theta, justifications, f, ground=True)
        rules.append(DerivationRule(Atom(spec.predicate, args), Or((INCONSISTENT_ATOM, phi))))
    return rules


def simplify_formula(formula: Formula) -> Formula:
    """Drop disjuncts whose atoms include those of a sibling disjunct (positive DNF only)."""
    if isinstance(formula, And):
        return And(tuple(simplify_formula(g) for g in formula.args))
    if not isinstance(formula, Or):
        return formula
    args = [simplify_formula(g) for g in formula.args]

    def atom_set(g: Formula) -> frozenset | None:
        if isinstance(g, Atom):
            return frozenset([g])
        if isinstance(g, And) and all(isinstance(x, Atom) for x in g.args):
            return frozenset(g.args)
        return None

    sets = [atom_set(g) for g in args]
    kept = []
    for i, g in enumerate(args):
        s = sets[i]
        dominated = s is not None and any(
            t is not None and (t < s or (t == s and j < i)) for j, t in enumerate(sets) if j != i
        )
        if not dominated:
            kept.append(g)
    return Or(tuple(kept))


def compile_om(om: OMPlanningSpec, options: CompileOptions | None = None,
               reasoner: Reasoner | None = None) -> CompiledSpec:
    """Add the ``inconsistent`` rule and one rule set per query predicate to the planning spec."""
    opts = options or CompileOptions()
    started = time.perf_counter()
    reasoner = reasoner or default_reasoner()
    planning = om.planning
    f = om.fluents
    if planning.domain.predicate(INCONSISTENT) is not None:
        raise InputError(f"the domain already declares a predicate named {INCONSISTENT!r}")

    table = fluent_table(f)
    fluent_axioms = [ax for _, ax in table]
    assignments = {q.predicate: om.assignments(q, reasoner) for q in om.queries}
    targets: list[Axiom] = []
    for q in om.queries:
        for theta, _ in assignments[q.predicate]:
            targets.extend(instantiate_query(q, theta))
    oracle = EntailmentOracle(om.ontology, reasoner)
    bottom, justs = justify_targets(
        fluent_axioms, om.ontology, targets, node_limit=opts.hst_node_limit, jobs=opts.jobs, oracle=oracle
    )

    rules: list[DerivationRule] = [build_inconsistent_rule(bottom, f)]
    for q in om.queries:
        if opts.ground:
            rules += build_ground_query_rules(q, assignments[q.predicate], justs, f)
        else:
            rules.append(build_query_rule(q, [t for t, _ in assignments[q.predicate]], justs, f))
    if opts.simplify:
        rules = [DerivationRule(r.head, simplify_formula(r.body)) for r in rules]

    compiled = _assemble(planning, om, rules, opts.block_inconsistent)
    check_spec(compiled)
    elapsed = time.perf_counter() - started
    report = {
        "fluents": len(table),
        "queries": len(om.queries),
        "legal_assignments": sum(len(a) for a in assignments.values()),
        "query_axioms": len(justs),
        "justifications_bottom": len(bottom),
        "justifications_query": sum(len(v) for v in justs.values()),
        "rules": len(rules),
        "entailment_checks": oracle.stats.entailment_checks,
        "hst_nodes": oracle.stats.hst_nodes,
        "block_inconsistent": opts.block_inconsistent,
        "ground_rules": opts.ground,
        "simplify": opts.simplify,
        "wall_time_s": round(elapsed, 3),
    }
    return CompiledSpec(compiled, om, table, bottom, justs, report)


def _assemble(planning: PlanningSpec, om: OMPlanningSpec, rules: list[DerivationRule],
              block_inconsistent: bool) -> PlanningSpec:
    domain, problem = planning.domain, planning.problem
    predicates = list(domain.predicates) + [PredicateDecl(INCONSISTENT, 0, DERIVED)]
    actions = domain.actions
    if block_inconsistent:
        guard = Not(INCONSISTENT_ATOM)
        actions = tuple(replace(a, precondition=_conjoin(a.precondition, guard)) for a in actions)
    # generated rules name problem objects, so those become domain constants
    used = set()
    for r in rules:
        used |= constants_of(r.head) | constants_of(r.body)
    constants = list(domain.constants) + [o for o in problem.objects if o in used and o not in domain.constants]
    objects = tuple(o for o in problem.objects if o not in constants)
    # query atoms are never stored; the rules recompute them
    init = frozenset(a for a in problem.init if a.predicate not in om.query_predicates)
    new_domain = Domain(
        name=domain.name,
        predicates=tuple(predicates),
        actions=tuple(actions),
        rules=tuple(domain.rules) + tuple(rules),
        constants=tuple(constants),
        requirements=domain.requirements,
    )
    return PlanningSpec(new_domain, Problem(problem.name, problem.domain_name, objects, init, problem.goal))


def _conjoin(pre: Formula, extra: Formula) -> Formula:
    if isinstance(pre, And):
        return And(pre.args + (extra,))
    return And((pre, extra))


def emit_pddl(compiled: CompiledSpec | PlanningSpec) -> tuple[str, str]:
    """Domain and problem text of the compiled specification."""
    spec = compiled.planning if isinstance(compiled, CompiledSpec) else compiled
    return emit_domain(spec.domain, spec.goal), emit_problem(spec.problem)


def format_report(report: Mapping) -> str:
    """``key: value`` lines in a fixed order."""
    return "".join(f"{k}: {str(v).lower() if isinstance(v, bool) else v}\n" for k, v in report.items())


__all__ = [
    "FALSE",
    "INCONSISTENT",
    "INCONSISTENT_ATOM",
    "CompileOptions",
    "CompiledSpec",
    "build_assignment_formula",
    "build_ground_query_rules",
    "build_inconsistent_rule",
    "build_query_rule",
    "compile_om",
    "emit_pddl",
    "fluent_table",
    "format_report",
    "simplify_formula",
]

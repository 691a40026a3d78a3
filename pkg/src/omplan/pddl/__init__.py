"""PDDL subset: data model, reader, writer and state semantics."""

from .emit import emit_domain, emit_problem, emit_spec, format_plan, parse_plan_lines
from .parser import check_spec, parse_domain, parse_problem, parse_spec
from .semantics import (
    PlanVerdict,
    RuleSet,
    apply_action,
    derivation_closure,
    ground_action,
    ground_formula,
    holds,
    instantiate_plan,
    is_applicable,
    validate_plan,
)
from .syntax import (
    BASE,
    DERIVED,
    FALSE,
    QUERY,
    TRUE,
    ActionSchema,
    And,
    Atom,
    DerivationRule,
    Domain,
    Eq,
    Exists,
    Forall,
    Formula,
    GroundAction,
    Not,
    Or,
    Plan,
    PlanningSpec,
    PredicateDecl,
    Problem,
    format_formula,
)

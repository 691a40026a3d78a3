"""Deterministic PDDL text output; everything emitted here is re-readable by
:mod:`omplan.pddl.parser`."""

from __future__ import annotations

from ..errors import InputError
from .syntax import (
    And,
    Domain,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    PlanningSpec,
    Problem,
    format_formula,
    sorted_atoms,
)


def _requirements(domain: Domain, goal: Formula | None = None) -> list[str]:
    seen: set[type] = set()

    def walk(f: Formula) -> None:
        seen.add(type(f))
        if isinstance(f, Not):
            walk(f.arg)
        elif isinstance(f, (And, Or)):
            for g in f.args:
                walk(g)
        elif isinstance(f, (Exists, Forall)):
            walk(f.body)

    for a in domain.actions:
        walk(a.precondition)
    for r in domain.rules:
        walk(r.body)
    if goal is not None:
        walk(goal)
    reqs = [":strips"]
    if Not in seen:
        reqs.append(":negative-preconditions")
    if Or in seen:
        reqs.append(":disjunctive-preconditions")
    if Exists in seen:
        reqs.append(":existential-preconditions")
    if Forall in seen:
        reqs.append(":universal-preconditions")
    if Eq in seen:
        reqs.append(":equality")
    if domain.rules:
        reqs.append(":derived-predicates")
    return reqs


def _pretty(f: Formula, indent: int) -> str:
    """Multi-line rendering for wide and/or nodes, single line otherwise."""
    flat = format_formula(f)
    if len(flat) + indent <= 100 or not isinstance(f, (And, Or)) or not f.args:
        return flat
    op = "and" if isinstance(f, And) else "or"
    pad = " " * (indent + 2)
    inner = ("\n" + pad).join(_pretty(g, indent + 2) for g in f.args)
    return f"({op}\n{pad}{inner})"


def emit_domain(domain: Domain, goal: Formula | None = None) -> str:
    lines = [f"(define (domain {domain.name})"]
    lines.append("  (:requirements " + " ".join(_requirements(domain, goal)) + ")")
    if domain.constants:
        lines.append("  (:constants " + " ".join(domain.constants) + ")")
    lines.append("  (:predicates")
    for p in domain.predicates:
        params = " ".join(f"?x{i}" for i in range(p.arity))
        lines.append(f"    ({p.name}{' ' + params if params else ''})")
    lines.append("  )")
    for a in domain.actions:
        lines.append(f"  (:action {a.name}")
        lines.append(f"    :parameters ({' '.join(a.parameters)})")
        lines.append(f"    :precondition {_pretty(a.precondition, 18)}")
        effects = [x.pddl() for x in a.add] + [f"(not {x.pddl()})" for x in a.delete]
        lines.append("    :effect (and" + "".join(" " + e for e in effects) + "))")
    for r in domain.rules:
        lines.append(f"  (:derived {r.head.pddl()}")
        lines.append(f"    {_pretty(r.body, 4)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def emit_problem(problem: Problem) -> str:
    lines = [f"(define (problem {problem.name})", f"  (:domain {problem.domain_name})"]
    lines.append("  (:objects" + "".join(" " + o for o in problem.objects) + ")")
    lines.append("  (:init")
    for atom in sorted_atoms(problem.init):
        lines.append(f"    {atom.pddl()}")
    lines.append("  )")
    lines.append(f"  (:goal {_pretty(problem.goal, 10)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def emit_spec(spec: PlanningSpec) -> tuple[str, str]:
    return emit_domain(spec.domain, spec.goal), emit_problem(spec.problem)


def format_plan(plan) -> str:
    return "".join(f"{a}\n" for a in plan)


def parse_plan_lines(text: str) -> list[tuple[str, tuple[str, ...]]]:
    """Read ``(name arg ...)`` lines; blank lines and ``;`` comments are skipped."""
    steps = []
    for raw in text.splitlines():
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise InputError(f"bad plan line: {raw!r}")
        parts = line[1:-1].split()
        steps.append((parts[0], tuple(parts[1:])))
    return steps

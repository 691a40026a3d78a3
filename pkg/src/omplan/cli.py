"""Command-line front end: ``omplan {check,compile,plan,validate,explain}``.

Exit codes: 0 success, 1 unsolvable (or invalid plan), 2 input error,
3 resource limit, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .benchmarks import FILE_NAMES
from .compilation import INCONSISTENT, CompileOptions, compile_om, emit_pddl, format_report
from .dl.reasoner import Reasoner
from .dl.tableau import DEFAULT_NODE_LIMIT
from .errors import InputError, InvariantViolation, ResourceLimitExceeded
from .interface import OMPlanningSpec, instantiate_query, load_om_spec
from .justify import DEFAULT_HST_LIMIT, canonical
from .oracle import DirectSemantics
from .pddl.emit import format_plan, parse_plan_lines
from .pddl.semantics import instantiate_plan, validate_plan
from .pddl.syntax import Atom, sorted_atoms
from .planner import LIMIT, Limits, solve

EXIT_OK, EXIT_UNSOLVABLE, EXIT_INPUT, EXIT_LIMIT, EXIT_INVARIANT = range(5)


def _add_inputs(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("inputs (either --dir or all five files)")
    g.add_argument("--dir", type=Path, help="directory holding " + ", ".join(FILE_NAMES.values()))
    for role in FILE_NAMES:
        g.add_argument(f"--{role}", type=Path, metavar="FILE")
    p.add_argument("--una", action="store_true", help="assume unique names for all individuals")
    p.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT, help="tableau node budget per reasoner call")
    p.add_argument("--hst-limit", type=int, default=DEFAULT_HST_LIMIT, help="hitting-set tree node budget")


def _add_compile_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--block-inconsistent", action="store_true",
                   help="make every action inapplicable in inconsistent states")
    p.add_argument("--simplify", action="store_true", help="drop subsumed disjuncts from generated rules")
    p.add_argument("--variable-rules", action="store_true",
                   help="emit one variable-headed rule per query instead of ground rules")
    p.add_argument("--jobs", type=int, default=1, help="parallel justification workers")


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, default=None, help="search time limit in seconds")
    p.add_argument("--max-states", type=int, default=1_000_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omplan", description="Planning with OWL-DL ontologies via derived predicates.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="static consistency and interface diagnostics")
    _add_inputs(p)

    p = sub.add_parser("compile", help="emit the compiled PDDL domain and problem plus a report")
    _add_inputs(p)
    _add_compile_flags(p)
    p.add_argument("--out", type=Path, help="write domain.pddl, problem.pddl, report.txt here instead of stdout")

    p = sub.add_parser("plan", help="compile, search and print a validated plan")
    _add_inputs(p)
    _add_compile_flags(p)
    _add_search_flags(p)

    p = sub.add_parser("validate", help="check a plan file")
    p.add_argument("planfile", type=Path)
    _add_inputs(p)
    _add_compile_flags(p)
    p.add_argument("--direct", action="store_true", help="replay over ontology-enhanced states with the reasoner")

    p = sub.add_parser("explain", help="print the justifications behind a query atom or 'inconsistent'")
    p.add_argument("atom", help="e.g. 'fullHands(stackBot)', '(fullHands stackBot)' or 'inconsistent'")
    _add_inputs(p)
    return parser


def _read_inputs(args) -> dict[str, str]:
    texts = {}
    for role, fname in FILE_NAMES.items():
        path = getattr(args, role) or (args.dir / fname if args.dir else None)
        if path is None:
            raise InputError(f"missing --{role} (or --dir)")
        try:
            texts[role] = Path(path).read_text()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from e
    return texts


def _load(args) -> tuple[OMPlanningSpec, Reasoner]:
    t = _read_inputs(args)
    om = load_om_spec(t["domain"], t["problem"], t["ontology"], t["fluents"], t["queries"], una=args.una)
    return om, Reasoner(node_limit=args.node_limit)


def _options(args) -> CompileOptions:
    return CompileOptions(block_inconsistent=args.block_inconsistent, simplify=args.simplify,
                          ground=not args.variable_rules, jobs=args.jobs, hst_node_limit=args.hst_limit)


def _warn(om: OMPlanningSpec) -> None:
    for w in om.warnings:
        print(f"warning: {w}", file=sys.stderr)


def cmd_check(args) -> int:
    om, reasoner = _load(args)
    _warn(om)
    if not reasoner.is_consistent(om.ontology):
        print("inconsistent")
        return EXIT_INPUT
    print("consistent")
    for q in om.queries:
        n = len(om.assignments(q, reasoner))
        print(f"query {q.predicate}: {n} legal assignment(s)")
    return EXIT_OK


def cmd_compile(args) -> int:
    om, reasoner = _load(args)
    _warn(om)
    compiled = compile_om(om, _options(args), reasoner)
    domain, problem = emit_pddl(compiled)
    report = dict(compiled.report)
    report.pop("wall_time_s")  # keep output byte-identical across runs
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "domain.pddl").write_text(domain)
        (args.out / "problem.pddl").write_text(problem)
        (args.out / "report.txt").write_text(format_report(report))
        print(f"wrote {args.out / 'domain.pddl'} and {args.out / 'problem.pddl'}")
    else:
        sys.stdout.write(domain + "\n" + problem + "\n" + format_report(report))
    return EXIT_OK


def cmd_plan(args) -> int:
    om, reasoner = _load(args)
    _warn(om)
    compiled = compile_om(om, _options(args), reasoner)
    result = solve(compiled.planning, Limits(max_states=args.max_states, time_limit=args.time_limit))
    if result.status == LIMIT:
        raise ResourceLimitExceeded(result.message)
    if not result.solved:
        print("unsolvable", file=sys.stderr)
        return EXIT_UNSOLVABLE
    # never print a plan the direct semantics rejects
    plan = instantiate_plan(om.planning, [(a.name, a.args) for a in result.plan])
    verdict = DirectSemantics(om, reasoner).validate_plan(plan, args.block_inconsistent)
    if not verdict:
        raise InvariantViolation(f"planner returned a plan the direct semantics rejects: {verdict.describe()}")
    sys.stdout.write(format_plan(result.plan))
    return EXIT_OK


def cmd_validate(args) -> int:
    om, reasoner = _load(args)
    try:
        steps = parse_plan_lines(args.planfile.read_text())
    except OSError as e:
        raise InputError(f"cannot read {args.planfile}: {e.strerror}") from e
    if args.direct:
        plan = instantiate_plan(om.planning, steps)
        verdict = DirectSemantics(om, reasoner).validate_plan(plan, args.block_inconsistent)
    else:
        compiled = compile_om(om, _options(args), reasoner)
        verdict = validate_plan(compiled.planning, instantiate_plan(compiled.planning, steps))
    print(verdict.describe())
    return EXIT_OK if verdict else EXIT_UNSOLVABLE


_ATOM = re.compile(r"^\s*(?:\(\s*(\S+)((?:\s+[^\s()]+)*)\s*\)|([^\s(]+)\s*\(([^)]*)\))\s*$")


def parse_atom_arg(text: str) -> Atom:
    """Accept ``p(a, b)``, ``(p a b)`` or a bare nullary name."""
    text = text.strip()
    m = _ATOM.match(text)
    if m is None:
        if re.fullmatch(r"[^\s(),]+", text):
            return Atom(text, ())
        raise InputError(f"cannot read atom {text!r}")
    if m.group(1):
        return Atom(m.group(1), tuple(m.group(2).split()))
    return Atom(m.group(3), tuple(a.strip() for a in m.group(4).split(",") if a.strip()))


def _format_just(just, om: OMPlanningSpec) -> str:
    atoms = sorted_atoms(om.fluents.inverse(ax) for ax in just)
    return " ".join(str(a) for a in atoms) if atoms else "(always)"


def cmd_explain(args) -> int:
    om, reasoner = _load(args)
    target = parse_atom_arg(args.atom)
    compiled = compile_om(om, CompileOptions(hst_node_limit=args.hst_limit), reasoner)
    if target.predicate == INCONSISTENT:
        print(f"{INCONSISTENT} <- one of {len(compiled.bottom)} justification(s)")
        for j in canonical(compiled.bottom):
            print(f"  {_format_just(j, om)}")
        return EXIT_OK
    spec = om.query(target.predicate)
    if spec is None:
        raise InputError(f"{target.predicate!r} is neither a query predicate nor {INCONSISTENT!r}")
    match = [theta for theta, a in om.assignments(spec, reasoner) if a == target.args]
    if not match:
        print(f"{target} has no legal assignment; it can only hold when the state is inconsistent")
        return EXIT_OK
    print(f"{target} <- {INCONSISTENT}, or every axiom below justified")
    for alpha in instantiate_query(spec, match[0]):
        justs = compiled.justifications[alpha]
        print(f"{alpha}: {len(justs)} justification(s)")
        for j in justs:
            print(f"  {_format_just(j, om)}")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "compile": cmd_compile, "plan": cmd_plan, "validate": cmd_validate,
            "explain": cmd_explain}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitExceeded as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except InvariantViolation as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())

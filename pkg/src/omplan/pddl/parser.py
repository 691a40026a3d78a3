"""Reader for PDDL domain and problem files.

Supported: STRIPS, negative/disjunctive/quantified preconditions and goals,
equality, domain constants and ``:derived`` rules. Keywords are
case-insensitive; names keep their case. Derived-rule heads may carry object
constants (ground rules), which is how compiled query rules are written.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from ..errors import (
    ArityMismatch,
    DuplicateDeclaration,
    EffectOnDerivedPredicate,
    NegativeDerivedOccurrence,
    PDDLSyntaxError,
    UnknownObject,
    UnknownPredicate,
    UnsupportedFeature,
)
from .syntax import (
    BASE,
    DERIVED,
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
    Not,
    Or,
    PlanningSpec,
    PredicateDecl,
    Problem,
    atoms_of,
    constants_of,
    free_variables,
    is_variable,
)

SUPPORTED_REQUIREMENTS = {
    ":strips",
    ":negative-preconditions",
    ":disjunctive-preconditions",
    ":existential-preconditions",
    ":universal-preconditions",
    ":quantified-preconditions",
    ":equality",
    ":derived-predicates",
}

_TOKEN = re.compile(r"\s+|;[^\n]*|(\()|(\))|([^\s();]+)")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int

    @property
    def lower(self) -> str:
        return self.text.lower()


@dataclass
class SList:
    items: list["SExpr"]
    line: int
    column: int


SExpr = Union[Token, SList]


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PDDLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        if m.lastindex:
            tokens.append(Token(m.group(m.lastindex), line, pos - line_start + 1))
        chunk = m.group(0)
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    return tokens


def read_sexpr(text: str) -> SList:
    """Parse exactly one top-level parenthesised expression."""
    tokens = tokenize(text)
    if not tokens:
        raise PDDLSyntaxError("empty input", 1, 1)
    stack: list[SList] = []
    result: SList | None = None
    for tok in tokens:
        if result is not None:
            raise PDDLSyntaxError(f"unexpected {tok.text!r} after end of definition", tok.line, tok.column)
        if tok.text == "(":
            stack.append(SList([], tok.line, tok.column))
        elif tok.text == ")":
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.column)
            done = stack.pop()
            if stack:
                stack[-1].items.append(done)
            else:
                result = done
        else:
            if not stack:
                raise PDDLSyntaxError(f"unexpected {tok.text!r} outside parentheses", tok.line, tok.column)
            stack[-1].items.append(tok)
    if stack:
        raise PDDLSyntaxError("unbalanced '(': missing ')'", stack[-1].line, stack[-1].column)
    assert result is not None
    return result


def _pos(e: SExpr) -> tuple[int, int]:
    return e.line, e.column


def _expect_list(e: SExpr, what: str) -> SList:
    if not isinstance(e, SList):
        raise PDDLSyntaxError(f"expected {what}, found {e.text!r}", *_pos(e))
    return e


def _expect_name(e: SExpr, what: str) -> str:
    if not isinstance(e, Token) or e.text in "()":
        raise PDDLSyntaxError(f"expected {what}", *_pos(e))
    return e.text


def _head(e: SList) -> str:
    if not e.items or not isinstance(e.items[0], Token):
        raise PDDLSyntaxError("expected keyword", e.line, e.column)
    return e.items[0].lower


def _variable_list(e: SExpr) -> tuple[str, ...]:
    lst = _expect_list(e, "variable list")
    out = []
    for item in lst.items:
        name = _expect_name(item, "variable")
        if name == "-":
            raise UnsupportedFeature("typing (':typing')", *_pos(item))
        if not is_variable(name):
            raise PDDLSyntaxError(f"expected variable, found {name!r}", *_pos(item))
        if name in out:
            raise DuplicateDeclaration(f"variable {name} declared twice", *_pos(item))
        out.append(name)
    return tuple(out)


def _parse_define(text: str, kind: str) -> tuple[str, SList]:
    root = read_sexpr(text)
    if _head(root) != "define" or len(root.items) < 2:
        raise PDDLSyntaxError("expected (define ...)", root.line, root.column)
    header = _expect_list(root.items[1], f"({kind} <name>)")
    if len(header.items) != 2 or _head(header) != kind:
        raise PDDLSyntaxError(f"expected ({kind} <name>)", header.line, header.column)
    return _expect_name(header.items[1], f"{kind} name"), root


class _FormulaReader:
    def __init__(self, predicates: dict[str, PredicateDecl], constants: set[str] | None):
        self.predicates = predicates
        self.constants = constants

    def term(self, e: SExpr, scope: set[str]) -> str:
        name = _expect_name(e, "term")
        if is_variable(name):
            if name not in scope:
                raise PDDLSyntaxError(f"unbound variable {name}", *_pos(e))
        elif self.constants is not None and name not in self.constants:
            raise UnknownObject(f"unknown object {name!r}", *_pos(e))
        return name

    def atom(self, e: SList, scope: set[str]) -> Atom:
        name = _expect_name(e.items[0], "predicate name")
        decl = self.predicates.get(name)
        if decl is None:
            raise UnknownPredicate(f"undeclared predicate {name!r}", e.line, e.column)
        args = tuple(self.term(t, scope) for t in e.items[1:])
        if len(args) != decl.arity:
            raise ArityMismatch(
                f"predicate {name!r} has arity {decl.arity}, used with {len(args)} argument(s)",
                e.line,
                e.column,
            )
        return Atom(name, args)

    def formula(self, e: SExpr, scope: set[str]) -> Formula:
        lst = _expect_list(e, "formula")
        if not lst.items:
            return TRUE
        op = _head(lst)
        rest = lst.items[1:]
        if op == "and":
            return And(tuple(self.formula(g, scope) for g in rest))
        if op == "or":
            return Or(tuple(self.formula(g, scope) for g in rest))
        if op == "not":
            if len(rest) != 1:
                raise PDDLSyntaxError("'not' takes one argument", lst.line, lst.column)
            return Not(self.formula(rest[0], scope))
        if op == "imply":
            if len(rest) != 2:
                raise PDDLSyntaxError("'imply' takes two arguments", lst.line, lst.column)
            return Or((Not(self.formula(rest[0], scope)), self.formula(rest[1], scope)))
        if op in ("exists", "forall"):
            if len(rest) != 2:
                raise PDDLSyntaxError(f"'{op}' takes a variable list and a body", lst.line, lst.column)
            variables = _variable_list(rest[0])
            body = self.formula(rest[1], scope | set(variables))
            return (Exists if op == "exists" else Forall)(variables, body)
        if op == "=":
            if len(rest) != 2:
                raise PDDLSyntaxError("'=' takes two terms", lst.line, lst.column)
            return Eq(self.term(rest[0], scope), self.term(rest[1], scope))
        # 'at'/'over' are also ordinary predicate names; only undeclared uses are temporal
        if op in ("at", "over") and op in self.predicates:
            return self.atom(lst, scope)
        if op in ("when", "preference", "at", "over", ">", "<", ">=", "<=", "increase", "decrease", "assign"):
            raise UnsupportedFeature(f"'{op}' expressions", lst.line, lst.column)
        return self.atom(lst, scope)


def _parse_effect(reader: _FormulaReader, e: SExpr, scope: set[str]) -> tuple[list[Atom], list[Atom]]:
    add: list[Atom] = []
    delete: list[Atom] = []

    def walk(x: SExpr) -> None:
        lst = _expect_list(x, "effect")
        if not lst.items:
            return
        op = _head(lst)
        if op == "and":
            for g in lst.items[1:]:
                walk(g)
        elif op == "not":
            inner = _expect_list(lst.items[1], "atom")
            delete.append(reader.atom(inner, scope))
        elif op == "when":
            raise UnsupportedFeature("conditional effects ('when')", lst.line, lst.column)
        elif op == "forall":
            raise UnsupportedFeature("universal effects ('forall')", lst.line, lst.column)
        elif op in ("increase", "decrease", "assign", "scale-up", "scale-down"):
            raise UnsupportedFeature("numeric fluents", lst.line, lst.column)
        else:
            add.append(reader.atom(lst, scope))

    walk(e)
    return add, delete


def parse_domain(text: str, query_predicates: Iterable[str] = ()) -> Domain:
    """Parse a domain file.

    ``query_predicates`` names predicates that are answered by the ontology;
    they are declared with kind ``query`` and may not occur in effects.
    """
    name, root = _parse_define(text, "domain")
    query_names = set(query_predicates)
    requirements: list[str] = []
    constants: list[str] = []
    decls: dict[str, PredicateDecl] = {}
    raw_actions: list[SList] = []
    raw_rules: list[SList] = []
    for section in root.items[2:]:
        sec = _expect_list(section, "domain section")
        key = _head(sec)
        if key == ":requirements":
            for tok in sec.items[1:]:
                req = _expect_name(tok, "requirement").lower()
                if req not in SUPPORTED_REQUIREMENTS and req != ":adl":
                    raise UnsupportedFeature(f"requirement {req}", *_pos(tok))
                requirements.append(req)
        elif key == ":constants":
            for tok in sec.items[1:]:
                c = _expect_name(tok, "constant")
                if c == "-":
                    raise UnsupportedFeature("typing (':typing')", *_pos(tok))
                if c in constants:
                    raise DuplicateDeclaration(f"constant {c!r} declared twice", *_pos(tok))
                constants.append(c)
        elif key == ":predicates":
            for p in sec.items[1:]:
                plst = _expect_list(p, "predicate declaration")
                pname = _expect_name(plst.items[0], "predicate name") if plst.items else None
                if pname is None:
                    raise PDDLSyntaxError("empty predicate declaration", plst.line, plst.column)
                if pname in decls:
                    raise DuplicateDeclaration(f"predicate {pname!r} declared twice", plst.line, plst.column)
                params = _variable_list(SList(plst.items[1:], plst.line, plst.column))
                decls[pname] = PredicateDecl(pname, len(params), BASE)
        elif key == ":action":
            raw_actions.append(sec)
        elif key == ":derived":
            raw_rules.append(sec)
        elif key in (":types", ":functions", ":durative-action", ":constraints", ":process", ":event"):
            raise UnsupportedFeature(f"'{key}' section", sec.line, sec.column)
        else:
            raise PDDLSyntaxError(f"unknown domain section {key!r}", sec.line, sec.column)

    derived_heads = set()
    for sec in raw_rules:
        if len(sec.items) != 3:
            raise PDDLSyntaxError("(:derived <head> <body>) expected", sec.line, sec.column)
        head = _expect_list(sec.items[1], "rule head")
        derived_heads.add(_expect_name(head.items[0], "predicate name"))
    for pname in sorted(derived_heads | query_names):
        if pname not in decls:
            raise UnknownPredicate(f"undeclared predicate {pname!r}", root.line, root.column)
        kind = QUERY if pname in query_names else DERIVED
        decls[pname] = PredicateDecl(pname, decls[pname].arity, kind)

    reader = _FormulaReader(decls, set(constants))
    actions = [_parse_action(reader, sec) for sec in raw_actions]
    if len({a.name for a in actions}) != len(actions):
        raise DuplicateDeclaration("duplicate action name", root.line, root.column)
    rules = [_parse_rule(reader, sec) for sec in raw_rules]
    return Domain(
        name=name,
        predicates=tuple(decls.values()),
        actions=tuple(actions),
        rules=tuple(rules),
        constants=tuple(constants),
        requirements=tuple(requirements),
    )


def _parse_action(reader: _FormulaReader, sec: SList) -> ActionSchema:
    if len(sec.items) < 2:
        raise PDDLSyntaxError("action name expected", sec.line, sec.column)
    name = _expect_name(sec.items[1], "action name")
    params: tuple[str, ...] = ()
    pre: Formula = TRUE
    add: list[Atom] = []
    delete: list[Atom] = []
    items = sec.items[2:]
    if len(items) % 2:
        raise PDDLSyntaxError(f"action {name!r}: keyword without value", sec.line, sec.column)
    seen = set()
    for key_tok, value in zip(items[::2], items[1::2]):
        key = _expect_name(key_tok, "action keyword").lower()
        seen.add(key)
        if key == ":parameters":
            params = _variable_list(value)
        elif key == ":precondition":
            pre = reader.formula(value, set(params))
        elif key == ":effect":
            add, delete = _parse_effect(reader, value, set(params))
        else:
            raise PDDLSyntaxError(f"unknown action keyword {key!r}", *_pos(key_tok))
    if ":parameters" in seen and items[0].text.lower() != ":parameters":
        raise PDDLSyntaxError(f"action {name!r}: ':parameters' must come first", sec.line, sec.column)
    for atom in add + delete:
        decl = reader.predicates[atom.predicate]
        if decl.kind != BASE:
            raise EffectOnDerivedPredicate(
                f"action {name!r} changes {decl.kind} predicate {atom.predicate!r}", sec.line, sec.column
            )
    return ActionSchema(name, params, pre, tuple(add), tuple(delete))


def _parse_rule(reader: _FormulaReader, sec: SList) -> DerivationRule:
    head_list = _expect_list(sec.items[1], "rule head")
    variables = {_expect_name(t, "term") for t in head_list.items[1:]}
    head = reader.atom(head_list, {v for v in variables if is_variable(v)})
    if len({t for t in head.args if is_variable(t)}) != sum(is_variable(t) for t in head.args):
        raise PDDLSyntaxError("repeated variable in rule head", head_list.line, head_list.column)
    body = reader.formula(sec.items[2], {t for t in head.args if is_variable(t)})
    for atom, positive in atoms_of(body):
        if not positive and reader.predicates[atom.predicate].kind != BASE:
            raise NegativeDerivedOccurrence(
                f"derived predicate {atom.predicate!r} occurs negatively in a rule body", sec.line, sec.column
            )
    return DerivationRule(head, body)


def parse_problem(text: str, domain: Domain) -> Problem:
    name, root = _parse_define(text, "problem")
    domain_name = ""
    objects: list[str] = []
    init: set[Atom] = set()
    goal: Formula = TRUE
    init_section: SList | None = None
    goal_section: SList | None = None
    for section in root.items[2:]:
        sec = _expect_list(section, "problem section")
        key = _head(sec)
        if key == ":domain":
            domain_name = _expect_name(sec.items[1], "domain name")
        elif key == ":objects":
            for tok in sec.items[1:]:
                o = _expect_name(tok, "object")
                if o == "-":
                    raise UnsupportedFeature("typing (':typing')", *_pos(tok))
                if o in objects:
                    raise DuplicateDeclaration(f"object {o!r} declared twice", *_pos(tok))
                objects.append(o)
        elif key == ":init":
            init_section = sec
        elif key == ":goal":
            goal_section = sec
        elif key == ":requirements":
            pass
        elif key in (":metric", ":constraints"):
            raise UnsupportedFeature(f"'{key}' section", sec.line, sec.column)
        else:
            raise PDDLSyntaxError(f"unknown problem section {key!r}", sec.line, sec.column)
    if domain_name and domain_name != domain.name:
        raise PDDLSyntaxError(
            f"problem refers to domain {domain_name!r}, but domain is {domain.name!r}", root.line, root.column
        )
    universe = set(objects) | set(domain.constants)
    reader = _FormulaReader(domain.predicate_map, universe)
    if init_section is not None:
        for item in init_section.items[1:]:
            lst = _expect_list(item, "initial atom")
            head = _head(lst) if lst.items else None
            if head in ("=", "not") or (head == "at" and "at" not in domain.predicate_map):
                raise UnsupportedFeature(f"'{head}' in :init", lst.line, lst.column)
            atom = reader.atom(lst, set())
            if domain.predicate_map[atom.predicate].kind == DERIVED:
                raise EffectOnDerivedPredicate(
                    f"derived atom {atom} may not be listed in :init", lst.line, lst.column
                )
            init.add(atom)
    if goal_section is not None:
        if len(goal_section.items) != 2:
            raise PDDLSyntaxError("(:goal <formula>) expected", goal_section.line, goal_section.column)
        goal = reader.formula(goal_section.items[1], set())
    return Problem(name, domain_name or domain.name, tuple(objects), frozenset(init), goal)


def parse_spec(domain_text: str, problem_text: str, query_predicates: Iterable[str] = ()) -> PlanningSpec:
    domain = parse_domain(domain_text, query_predicates)
    return PlanningSpec(domain, parse_problem(problem_text, domain))


def check_spec(spec: PlanningSpec) -> None:
    """Re-check the structural invariants of a programmatically built spec."""
    domain = spec.domain
    universe = set(spec.objects)
    preds = domain.predicate_map
    if len(preds) != len(domain.predicates):
        raise DuplicateDeclaration("duplicate predicate declaration")
    heads = {r.head.predicate for r in domain.rules}
    for p in domain.predicates:
        if (p.kind == DERIVED) != (p.name in heads and p.kind != QUERY):
            raise EffectOnDerivedPredicate(f"predicate {p.name!r}: kind {p.kind} does not match rules")

    def check_atom(atom: Atom, where: str) -> None:
        decl = preds.get(atom.predicate)
        if decl is None:
            raise UnknownPredicate(f"{where}: undeclared predicate {atom.predicate!r}")
        if decl.arity != len(atom.args):
            raise ArityMismatch(f"{where}: {atom} has wrong arity")

    def check_formula(f: Formula, where: str, allowed_vars: set[str]) -> None:
        for atom, _ in atoms_of(f):
            check_atom(atom, where)
        unknown = constants_of(f) - universe
        if unknown:
            raise UnknownObject(f"{where}: unknown object(s) {sorted(unknown)}")
        free = free_variables(f) - allowed_vars
        if free:
            raise PDDLSyntaxError(f"{where}: unbound variable(s) {sorted(free)}")

    for a in domain.actions:
        check_formula(a.precondition, f"action {a.name}", set(a.parameters))
        for atom in a.add + a.delete:
            check_formula(atom, f"action {a.name}", set(a.parameters))
            if preds[atom.predicate].kind != BASE:
                raise EffectOnDerivedPredicate(f"action {a.name} changes derived predicate {atom.predicate!r}")
    for r in domain.rules:
        check_formula(r.head, f"rule {r.head.predicate}", set(r.variables))
        check_formula(r.body, f"rule {r.head.predicate}", set(r.variables))
        if preds[r.head.predicate].kind == BASE:
            raise EffectOnDerivedPredicate(f"rule head {r.head.predicate!r} is declared as a base predicate")
        for atom, positive in atoms_of(r.body):
            if not positive and preds[atom.predicate].kind != BASE:
                raise NegativeDerivedOccurrence(f"rule {r.head.predicate}: {atom.predicate} occurs negatively")
    for atom in spec.init:
        check_formula(atom, "initial state", set())
        if preds[atom.predicate].kind == DERIVED:
            raise EffectOnDerivedPredicate(f"initial state contains derived atom {atom}")
    check_formula(spec.goal, "goal", set())

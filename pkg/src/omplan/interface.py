"""Fluent and query interfaces, and the assembled ontology-mediated specification.

Fluent interface format, one directive per line::

    OBJECT    stackBot   -> stackBot
    PREDICATE holds(_,_) -> holds

Query interface format, one block per query predicate::

    PREDICATE: fullHands
    VARIABLES: ?r
    TYPE_SPECIFICATION:
       Robot(?r)
    QUERY:
       FullHands(?r)

``#`` starts a comment in both formats. Keywords are case-insensitive.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .dl.parser import parse_axioms, parse_ontology
from .dl.reasoner import Reasoner, default_reasoner
from .dl.syntax import (
    THING,
    Axiom,
    ClassAssertion,
    ClassExpr,
    DifferentIndividuals,
    NamedClass,
    Ontology,
    PropertyAssertion,
    axiom_individuals,
    substitute_individuals,
)
from .errors import (
    DuplicateDeclaration,
    InterfaceMismatch,
    InterfaceSyntaxError,
    InverseFunctionalityViolation,
    MissingTypeSpecification,
    UndeclaredQueryVariable,
    UnsupportedFeature,
)
from .pddl.parser import parse_domain, parse_problem
from .pddl.syntax import BASE, DERIVED, QUERY, Atom, PlanningSpec, atoms_of


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


@dataclass(frozen=True)
class FluentInterface:
    """The partial, inverse-functional map F from objects and predicates to IRIs."""

    objects: tuple[tuple[str, str], ...] = ()
    predicates: tuple[tuple[str, int, str], ...] = ()  # (name, arity, iri)

    def __post_init__(self):
        for kind, pairs in (("object", [(o, i) for o, i in self.objects]),
                            ("predicate", [(p, i) for p, _, i in self.predicates])):
            seen_l: set[str] = set()
            seen_r: dict[str, str] = {}
            for left, right in pairs:
                if left in seen_l:
                    raise DuplicateDeclaration(f"{kind} {left!r} is mapped twice")
                if right in seen_r:
                    raise InverseFunctionalityViolation(
                        f"{kind}s {seen_r[right]!r} and {left!r} both map to {right!r}"
                    )
                seen_l.add(left)
                seen_r[right] = left
        for name, arity, _ in self.predicates:
            if arity not in (1, 2):
                raise UnsupportedFeature(f"mapping predicate {name!r} of arity {arity} (only 1 and 2)")

    @cached_property
    def object_map(self) -> dict[str, str]:
        return dict(self.objects)

    @cached_property
    def predicate_map(self) -> dict[str, tuple[int, str]]:
        return {p: (n, iri) for p, n, iri in self.predicates}

    @cached_property
    def _inverse_objects(self) -> dict[str, str]:
        return {iri: o for o, iri in self.objects}

    @cached_property
    def _inverse_predicates(self) -> dict[tuple[int, str], str]:
        return {(n, iri): p for p, n, iri in self.predicates}

    def map_atom(self, atom: Atom) -> Axiom | None:
        """F(atom), or None where F is undefined."""
        entry = self.predicate_map.get(atom.predicate)
        if entry is None or entry[0] != len(atom.args):
            return None
        inds = [self.object_map.get(t) for t in atom.args]
        if any(i is None for i in inds):
            return None
        if entry[0] == 1:
            return ClassAssertion(inds[0], NamedClass(entry[1]))
        return PropertyAssertion(inds[0], entry[1], inds[1])

    def inverse_object(self, iri: str) -> str | None:
        return self._inverse_objects.get(iri)

    def inverse(self, axiom: Axiom) -> Atom | None:
        """F⁻(axiom) for axioms in the range of F."""
        if isinstance(axiom, ClassAssertion) and isinstance(axiom.concept, NamedClass):
            p = self._inverse_predicates.get((1, axiom.concept.name))
            o = self.inverse_object(axiom.individual)
            return Atom(p, (o,)) if p is not None and o is not None else None
        if isinstance(axiom, PropertyAssertion):
            p = self._inverse_predicates.get((2, axiom.role))
            a, b = self.inverse_object(axiom.subject), self.inverse_object(axiom.object)
            return Atom(p, (a, b)) if p is not None and a is not None and b is not None else None
        return None

    def map_state(self, atoms: Iterable[Atom]) -> frozenset[Axiom]:
        out = set()
        for a in atoms:
            ax = self.map_atom(a)
            if ax is not None:
                out.add(ax)
        return frozenset(out)

    def fluent_atoms(self) -> list[Atom]:
        """Every ground atom on which F is defined (mapped predicates over mapped objects)."""
        objs = sorted(self.object_map)
        out = []
        for p, n, _ in sorted(self.predicates):
            for args in itertools.product(objs, repeat=n):
                out.append(Atom(p, args))
        return out


_OBJECT_LINE = re.compile(r"^OBJECT\s+(\S+)\s*->\s*(\S+)$", re.I)
_PRED_LINE = re.compile(r"^PREDICATE\s+([^\s(]+)\s*\(([^)]*)\)\s*->\s*(\S+)$", re.I)


def parse_fluent_interface(text: str) -> FluentInterface:
    objects: list[tuple[str, str]] = []
    preds: list[tuple[str, int, str]] = []
    obj_line: dict[str, int] = {}
    obj_iri: dict[str, int] = {}
    pred_line: dict[str, int] = {}
    pred_iri: dict[str, int] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        m = _OBJECT_LINE.match(line)
        if m:
            name, iri = m.groups()
            if name in obj_line:
                raise DuplicateDeclaration(f"object {name!r} already mapped on line {obj_line[name]}", n)
            if iri in obj_iri:
                raise InverseFunctionalityViolation(f"individual {iri!r} already used on line {obj_iri[iri]}", n)
            obj_line[name], obj_iri[iri] = n, n
            objects.append((name, iri))
            continue
        m = _PRED_LINE.match(line)
        if m:
            name, params, iri = m.groups()
            slots = [s.strip() for s in params.split(",")] if params.strip() else []
            if any(s != "_" for s in slots):
                raise InterfaceSyntaxError(f"argument placeholders must be '_' in {line!r}", n)
            if len(slots) not in (1, 2):
                raise UnsupportedFeature(f"mapping predicate {name!r} of arity {len(slots)} (only 1 and 2)", n)
            if name in pred_line:
                raise DuplicateDeclaration(f"predicate {name!r} already mapped on line {pred_line[name]}", n)
            if iri in pred_iri:
                raise InverseFunctionalityViolation(f"IRI {iri!r} already used on line {pred_iri[iri]}", n)
            pred_line[name], pred_iri[iri] = n, n
            preds.append((name, len(slots), iri))
            continue
        raise InterfaceSyntaxError(f"expected 'OBJECT a -> iri' or 'PREDICATE p(_,_) -> iri', got {line!r}", n)
    return FluentInterface(tuple(objects), tuple(preds))


def format_fluent_interface(f: FluentInterface) -> str:
    lines = [f"OBJECT {o} -> {i}" for o, i in f.objects]
    lines += [f"PREDICATE {p}({','.join('_' * n)}) -> {i}" for p, n, i in f.predicates]
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class QuerySpec:
    """S = <p_S, V_S, T_S, Q_S>."""

    predicate: str
    variables: tuple[str, ...]
    types: tuple[tuple[str, ClassExpr], ...]
    query: tuple[Axiom, ...] = ()

    def __post_init__(self):
        declared = set(self.variables)
        typed = dict(self.types)
        for v in self.variables:
            if v not in typed:
                raise MissingTypeSpecification(f"query {self.predicate}: no type for {v}")
        for ax in self.query:
            for a in axiom_individuals(ax):
                if a.startswith("?") and a not in declared:
                    raise UndeclaredQueryVariable(f"query {self.predicate}: {a} is not in VARIABLES")

    @property
    def arity(self) -> int:
        return len(self.variables)

    def type_of(self, var: str) -> ClassExpr:
        return dict(self.types)[var]


_HEADER = re.compile(r"^(PREDICATE|VARIABLES|TYPE_SPECIFICATION|QUERY)\s*:\s*(.*)$", re.I)


def parse_query_interface(text: str) -> tuple[QuerySpec, ...]:
    blocks: list[dict] = []
    current: dict | None = None
    section = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            key, rest = m.group(1).upper(), m.group(2).strip()
            if key == "PREDICATE":
                if not re.fullmatch(r"[^\s()?]+", rest):
                    raise InterfaceSyntaxError(f"bad query predicate name {rest!r}", n)
                current = {"line": n, "predicate": rest, "variables": None, "types": [], "query": []}
                blocks.append(current)
                section = None
                continue
            if current is None:
                raise InterfaceSyntaxError(f"{key}: before any PREDICATE: header", n)
            if key == "VARIABLES":
                names = [v for v in re.split(r"[\s,]+", rest) if v]
                bad = [v for v in names if not re.fullmatch(r"\?[A-Za-z_][\w\-]*", v)]
                if bad:
                    raise InterfaceSyntaxError(f"query variables must start with '?': {bad}", n)
                if len(set(names)) != len(names):
                    raise DuplicateDeclaration("variable listed twice", n)
                current["variables"] = (tuple(names), n)
                section = None
                continue
            section = key
            if rest:
                _block_line(current, section, rest, n)
            continue
        if current is None or section is None:
            raise InterfaceSyntaxError(f"unexpected line {line!r}", n)
        _block_line(current, section, line, n)

    out = []
    names = set()
    for b in blocks:
        if b["predicate"] in names:
            raise DuplicateDeclaration(f"query predicate {b['predicate']!r} defined twice", b["line"])
        names.add(b["predicate"])
        if b["variables"] is None:
            raise InterfaceSyntaxError(f"query {b['predicate']}: missing VARIABLES:", b["line"])
        variables, vline = b["variables"]
        types: dict[str, ClassExpr] = {}
        for var, concept, n in b["types"]:
            if var not in variables:
                raise UndeclaredQueryVariable(f"{var} is not in VARIABLES", n)
            if var in types:
                raise DuplicateDeclaration(f"second type specification for {var}", n)
            types[var] = concept
        for v in variables:
            if v not in types:
                raise MissingTypeSpecification(f"query {b['predicate']}: no TYPE_SPECIFICATION for {v}", vline)
        for ax, n in b["query"]:
            for a in axiom_individuals(ax):
                if a.startswith("?") and a not in variables:
                    raise UndeclaredQueryVariable(f"{a} is not in VARIABLES", n)
        out.append(QuerySpec(
            b["predicate"], variables, tuple((v, types[v]) for v in variables), tuple(ax for ax, _ in b["query"])
        ))
    return tuple(out)


def _block_line(block: dict, section: str, line: str, n: int) -> None:
    axioms = parse_axioms(line, n, allow_variables=True)
    if section == "TYPE_SPECIFICATION":
        for ax in axioms:
            if not (isinstance(ax, ClassAssertion) and ax.individual.startswith("?")):
                raise InterfaceSyntaxError(f"type specifications have the form Class(?x), got {line!r}", n)
            block["types"].append((ax.individual, ax.concept, n))
    else:
        block["query"].extend((ax, n) for ax in axioms)


def format_query_interface(specs: Sequence[QuerySpec]) -> str:
    from .dl.parser import _fmt

    parts = []
    for s in specs:
        lines = [f"PREDICATE: {s.predicate}", "VARIABLES: " + " ".join(s.variables), "TYPE_SPECIFICATION:"]
        lines += [f"   ClassAssertion({v}, {c})" for v, c in s.types]
        lines.append("QUERY:")
        lines += [f"   {_fmt(ax)}" for ax in s.query]
        parts.append("\n".join(lines) + "\n")
    return "\n".join(parts)


Assignment = Mapping[str, str]


def map_atom(f: FluentInterface, atom: Atom) -> Axiom | None:
    return f.map_atom(atom)


def legal_assignments(spec: QuerySpec, ontology: Ontology, reasoner: Reasoner | None = None) -> list[dict[str, str]]:
    """Θ(S, O): total maps V_S → Ind(O) respecting the static types, in canonical order."""
    r = reasoner or default_reasoner()
    candidates = []
    for v in spec.variables:
        t = spec.type_of(v)
        pool = ontology.individuals if t == THING else r.instances(ontology, t)
        candidates.append(sorted(pool & ontology.individuals))
    return [dict(zip(spec.variables, combo)) for combo in itertools.product(*candidates)]


def instantiate_query(spec: QuerySpec, theta: Assignment) -> tuple[Axiom, ...]:
    """θ(Q_S)."""
    return tuple(substitute_individuals(ax, theta) for ax in spec.query)


def guard_objects(f: FluentInterface, spec: QuerySpec, theta: Assignment) -> tuple[str, ...] | None:
    """(F⁻(θ(x₁)), …) or None when some F⁻(θ(xᵢ)) is undefined."""
    out = []
    for v in spec.variables:
        o = f.inverse_object(theta[v])
        if o is None:
            return None
        out.append(o)
    return tuple(out)


@dataclass(frozen=True)
class OMPlanningSpec:
    """<P, O, F, S>."""

    planning: PlanningSpec
    ontology: Ontology
    fluents: FluentInterface
    queries: tuple[QuerySpec, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @cached_property
    def query_predicates(self) -> frozenset[str]:
        return frozenset(q.predicate for q in self.queries)

    def query(self, predicate: str) -> QuerySpec | None:
        for q in self.queries:
            if q.predicate == predicate:
                return q
        return None

    def assignments(self, spec: QuerySpec, reasoner: Reasoner | None = None) -> list[tuple[dict[str, str], tuple[str, ...]]]:
        """Guard-passing legal assignments with their planning-side argument tuples."""
        out = []
        for theta in legal_assignments(spec, self.ontology, reasoner):
            args = guard_objects(self.fluents, spec, theta)
            if args is not None:
                out.append((theta, args))
        return out


def validate_om(planning: PlanningSpec, fluents: FluentInterface, queries: Sequence[QuerySpec]) -> list[str]:
    """Raise on interface/spec mismatches; return diagnostics for questionable but legal specs."""
    preds = planning.domain.predicate_map
    objects = set(planning.objects)
    for q in queries:
        decl = preds.get(q.predicate)
        if decl is None:
            raise InterfaceMismatch(f"query predicate {q.predicate!r} is not declared in the domain")
        if decl.arity != q.arity:
            raise InterfaceMismatch(
                f"query predicate {q.predicate!r} has arity {decl.arity} in the domain but {q.arity} variables"
            )
        if decl.kind != QUERY:
            raise InterfaceMismatch(f"{q.predicate!r} must be declared as a query predicate")
        if any(r.head.predicate == q.predicate for r in planning.rules):
            raise InterfaceMismatch(f"query predicate {q.predicate!r} may not head a :derived rule")
    query_names = {q.predicate for q in queries}
    for o, _ in fluents.objects:
        if o not in objects:
            raise InterfaceMismatch(f"fluent interface maps unknown object {o!r}")
    for p, n, _ in fluents.predicates:
        decl = preds.get(p)
        if decl is None:
            raise InterfaceMismatch(f"fluent interface maps undeclared predicate {p!r}")
        if decl.arity != n:
            raise InterfaceMismatch(f"fluent interface gives {p!r} arity {n}, the domain says {decl.arity}")
        if p in query_names:
            raise InterfaceMismatch(f"query predicate {p!r} may not be mapped by the fluent interface")

    warnings = []
    mapped_derived = [p for p, _, _ in fluents.predicates if preds[p].kind == DERIVED]
    if mapped_derived:
        depends = _query_dependencies(planning, query_names)
        for p in sorted(mapped_derived):
            if depends.get(p):
                warnings.append(
                    f"mapped derived predicate {p!r} depends on query predicate(s) {sorted(depends[p])}; "
                    "the ontology view is built from the query-free part of each state"
                )
    for q in queries:
        if not q.query:
            warnings.append(f"query {q.predicate!r} has an empty QUERY section; it holds for every legal assignment")
    return warnings


def _query_dependencies(planning: PlanningSpec, query_names: set[str]) -> dict[str, set[str]]:
    """For each derived predicate, the query predicates its rules reach."""
    uses: dict[str, set[str]] = {}
    for r in planning.rules:
        uses.setdefault(r.head.predicate, set()).update(a.predicate for a, _ in atoms_of(r.body))
    out: dict[str, set[str]] = {}
    for p in uses:
        seen, stack, hit = set(), [p], set()
        while stack:
            x = stack.pop()
            for y in uses.get(x, ()):
                if y in query_names:
                    hit.add(y)
                elif y not in seen:
                    seen.add(y)
                    stack.append(y)
        out[p] = hit
    return out


def unique_names(ontology: Ontology, fluents: FluentInterface) -> Ontology:
    """Add pairwise inequality over every individual of the ontology and the fluent interface."""
    names = sorted(ontology.individuals | {iri for _, iri in fluents.objects})
    return ontology.union(DifferentIndividuals(a, b) for i, a in enumerate(names) for b in names[i + 1:])


def build_om_spec(planning: PlanningSpec, ontology: Ontology, fluents: FluentInterface,
                  queries: Sequence[QuerySpec], una: bool = False) -> OMPlanningSpec:
    warnings = validate_om(planning, fluents, queries)
    if una:
        ontology = unique_names(ontology, fluents)
    return OMPlanningSpec(planning, ontology, fluents, tuple(queries), tuple(warnings))


def load_om_spec(domain_text: str, problem_text: str, ontology_text: str, fluent_text: str,
                 query_text: str, una: bool = False) -> OMPlanningSpec:
    """Parse and cross-check the five input texts."""
    queries = parse_query_interface(query_text)
    fluents = parse_fluent_interface(fluent_text)
    ontology = parse_ontology(ontology_text)
    domain = parse_domain(domain_text, [q.predicate for q in queries])
    planning = PlanningSpec(domain, parse_problem(problem_text, domain))
    return build_om_spec(planning, ontology, fluents, queries, una)


__all__ = [
    "BASE",
    "FluentInterface",
    "OMPlanningSpec",
    "QuerySpec",
    "build_om_spec",
    "format_fluent_interface",
    "format_query_interface",
    "guard_objects",
    "instantiate_query",
    "legal_assignments",
    "load_om_spec",
    "map_atom",
    "parse_fluent_interface",
    "parse_query_interface",
    "unique_names",
    "validate_om",
]

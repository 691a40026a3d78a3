"""Reader for the line-oriented ontology format.

One axiom per line (an axiom may continue onto following lines while
parentheses are open); ``#`` starts a comment. Grammar::

    axiom   := SubClassOf(C, C) | EquivalentClasses(C, C, ...) | DisjointClasses(C, C, ...)
             | ClassAssertion(a, C) | PropertyAssertion(a, r, b) | ObjectPropertyAssertion(r, a, b)
             | DifferentIndividuals(a, b, ...) | SameIndividual(a, b, ...)
             | ObjectPropertyDomain(r, C) | ObjectPropertyRange(r, C) | FunctionalObjectProperty(r)
             | Name(a) | name(a, b)
    C       := Name | Thing | Nothing | {a} | not(C) | and(C, ...) | or(C, ...)
             | some(r, C) | all(r, C) | min(n, r[, C]) | max(n, r[, C]) | exactly(n, r[, C])
             | hasValue(r, a)

``Name(a)`` and ``name(a, b)`` abbreviate class and property assertions.
Names are opaque and case-sensitive; keywords are not case-sensitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import OntologySyntaxError, UnsupportedConstruct
from .syntax import (
    NOTHING,
    THING,
    AtLeast,
    AtMost,
    Axiom,
    ClassAssertion,
    ClassExpr,
    Complement,
    DifferentIndividuals,
    DisjointClasses,
    EquivalentClasses,
    Exactly,
    Intersection,
    NamedClass,
    Nominal,
    Only,
    Ontology,
    PropertyAssertion,
    Some,
    SubClassOf,
    Union_,
)

_TOKEN = re.compile(r"\s*(?:(<[^>]*>)|(\?[A-Za-z_][\w\-]*)|(\d+)|([A-Za-z_][\w.:/#\-]*)|([(),{}]))")

# OWL constructs outside the fragment; named in the error message
_UNSUPPORTED = {
    "subobjectpropertyof", "equivalentobjectproperties", "disjointobjectproperties",
    "inverseobjectproperties", "transitiveobjectproperty", "symmetricobjectproperty",
    "asymmetricobjectproperty", "reflexiveobjectproperty", "irreflexiveobjectproperty",
    "inversefunctionalobjectproperty", "objectinverseof", "inverse", "hasself", "objecthasself",
    "dataproperty", "datapropertyassertion", "datasomevaluesfrom", "dataallvaluesfrom",
    "datahasvalue", "datapropertydomain", "datapropertyrange", "functionaldataproperty",
    "dlsaferule", "rule", "haskey", "subdatapropertyof", "negativeobjectpropertyassertion",
    "objectoneof",
}


@dataclass
class _Tok:
    kind: str  # "name", "var", "num", "punct"
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int, col0: int = 1) -> list[_Tok]:
    out: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = text[pos:].lstrip()
            col = col0 + len(text) - len(bad)
            raise OntologySyntaxError(f"unexpected character {bad[0]!r}", line, col)
        col = col0 + m.start(m.lastindex)
        kind = ("name", "var", "num", "name", "punct")[m.lastindex - 1]
        tok = m.group(m.lastindex)
        if tok.startswith("<"):
            tok = tok[1:-1]
        out.append(_Tok(kind, tok, line, col))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[_Tok], line: int, allow_variables: bool):
        self.toks = tokens
        self.i = 0
        self.line = line
        self.allow_variables = allow_variables

    def error(self, msg: str, tok: _Tok | None = None) -> OntologySyntaxError:
        tok = tok or self.peek()
        return OntologySyntaxError(msg, tok.line if tok else self.line, tok.col if tok else None)

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise OntologySyntaxError("unexpected end of axiom", self.line)
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.next()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}", tok)

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.text == text

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.text!r} after axiom", tok)

    def name(self, what: str) -> str:
        tok = self.next()
        if tok.kind != "name":
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return tok.text

    def role(self) -> str:
        tok = self.next()
        if tok.kind != "name":
            raise self.error(f"expected a property, found {tok.text!r}", tok)
        if self.at("("):
            # complex property expressions (inverse, chains) are outside the fragment
            raise UnsupportedConstruct(f"property expression {tok.text}", tok.line, tok.col)
        return tok.text

    def individual(self) -> str:
        tok = self.next()
        if tok.kind == "var":
            if not self.allow_variables:
                raise self.error(f"variable {tok.text} outside a query", tok)
            return tok.text
        if tok.kind != "name":
            raise self.error(f"expected an individual, found {tok.text!r}", tok)
        return tok.text

    def number(self) -> int:
        tok = self.next()
        if tok.kind != "num":
            raise self.error(f"expected a number, found {tok.text!r}", tok)
        return int(tok.text)

    def args(self, item) -> list:
        self.expect("(")
        out = [item()]
        while self.at(","):
            self.next()
            out.append(item())
        self.expect(")")
        return out

    def concept(self) -> ClassExpr:
        tok = self.next()
        if tok.kind == "punct" and tok.text == "{":
            ind = self.individual()
            self.expect("}")
            return Nominal(ind)
        if tok.kind != "name":
            raise self.error(f"expected a class expression, found {tok.text!r}", tok)
        key = tok.text.lower()
        if not self.at("("):
            if key in ("thing", "owl:thing"):
                return THING
            if key in ("nothing", "owl:nothing"):
                return NOTHING
            return NamedClass(tok.text)
        if key in ("not", "objectcomplementof"):
            (c,) = self._fixed(tok, 1, self.concept)
            return Complement(c)
        if key in ("and", "objectintersectionof"):
            return Intersection(tuple(self.args(self.concept)))
        if key in ("or", "objectunionof"):
            return Union_(tuple(self.args(self.concept)))
        if key in ("some", "objectsomevaluesfrom", "all", "objectallvaluesfrom"):
            self.expect("(")
            role = self.role()
            self.expect(",")
            filler = self.concept()
            self.expect(")")
            return Some(role, filler) if key in ("some", "objectsomevaluesfrom") else Only(role, filler)
        if key in ("hasvalue", "objecthasvalue"):
            self.expect("(")
            role = self.role()
            self.expect(",")
            ind = self.individual()
            self.expect(")")
            return Some(role, Nominal(ind))
        if key in ("min", "max", "exactly", "objectmincardinality", "objectmaxcardinality",
                   "objectexactcardinality"):
            self.expect("(")
            n = self.number()
            self.expect(",")
            role = self.role()
            filler: ClassExpr = THING
            if self.at(","):
                self.next()
                filler = self.concept()
            self.expect(")")
            cls = AtLeast if "min" in key else AtMost if "max" in key else Exactly
            return cls(n, role, filler)
        if key in _UNSUPPORTED:
            raise UnsupportedConstruct(tok.text, tok.line, tok.col)
        raise UnsupportedConstruct(f"class constructor {tok.text}", tok.line, tok.col)

    def _fixed(self, tok: _Tok, n: int, item) -> list:
        items = self.args(item)
        if len(items) != n:
            raise self.error(f"{tok.text} takes {n} argument(s), got {len(items)}", tok)
        return items

    def axiom(self) -> list[Axiom]:
        head = self.next()
        if head.kind != "name":
            raise self.error(f"expected an axiom, found {head.text!r}", head)
        key = head.text.lower()
        if key == "subclassof":
            sub, sup = self._fixed(head, 2, self.concept)
            return [SubClassOf(sub, sup)]
        if key in ("equivalentclasses", "disjointclasses"):
            cs = self.args(self.concept)
            if len(cs) < 2:
                raise self.error(f"{head.text} needs at least two classes", head)
            kind = EquivalentClasses if key == "equivalentclasses" else DisjointClasses
            if kind is EquivalentClasses:
                return [kind(cs[0], c) for c in cs[1:]]
            return [kind(a, b) for i, a in enumerate(cs) for b in cs[i + 1:]]
        if key == "classassertion":
            self.expect("(")
            ind = self.individual()
            self.expect(",")
            c = self.concept()
            self.expect(")")
            return [ClassAssertion(ind, c)]
        if key == "propertyassertion":
            a, r, b = self._fixed(head, 3, self._term)
            return [PropertyAssertion(a, r, b)]
        if key == "objectpropertyassertion":
            r, a, b = self._fixed(head, 3, self._term)
            return [PropertyAssertion(a, r, b)]
        if key in ("differentindividuals", "sameindividual"):
            inds = self.args(self.individual)
            if len(inds) < 2:
                raise self.error(f"{head.text} needs at least two individuals", head)
            if key == "sameindividual":
                return [ClassAssertion(inds[0], Nominal(b)) for b in inds[1:]]
            return [DifferentIndividuals(a, b) for i, a in enumerate(inds) for b in inds[i + 1:]]
        if key == "objectpropertydomain":
            self.expect("(")
            r = self.name("a property")
            self.expect(",")
            c = self.concept()
            self.expect(")")
            return [SubClassOf(Some(r, THING), c)]
        if key == "objectpropertyrange":
            self.expect("(")
            r = self.name("a property")
            self.expect(",")
            c = self.concept()
            self.expect(")")
            return [SubClassOf(THING, Only(r, c))]
        if key == "functionalobjectproperty":
            (r,) = self._fixed(head, 1, lambda: self.name("a property"))
            return [SubClassOf(THING, AtMost(1, r, THING))]
        if key in _UNSUPPORTED:
            raise UnsupportedConstruct(head.text, head.line, head.col)
        if key in ("and", "or", "not", "some", "all", "min", "max", "exactly", "hasvalue"):
            raise self.error(f"{head.text}(...) is a class expression, not an axiom", head)
        # shorthand assertions
        terms = self.args(self.individual)
        if len(terms) == 1:
            return [ClassAssertion(terms[0], NamedClass(head.text))]
        if len(terms) == 2:
            return [PropertyAssertion(terms[0], head.text, terms[1])]
        raise self.error(f"{head.text}: assertions take one or two individuals", head)

    def _term(self) -> str:
        tok = self.peek()
        if tok is not None and tok.kind == "var":
            return self.individual()
        return self.name("a name")


def parse_axioms(text: str, line: int = 1, allow_variables: bool = False, col: int = 1) -> list[Axiom]:
    """Parse a single axiom written on one logical line."""
    p = _Parser(_tokenize(text, line, col), line, allow_variables)
    out = p.axiom()
    p.done()
    return out


def parse_class_expression(text: str, line: int = 1, allow_variables: bool = False) -> ClassExpr:
    p = _Parser(_tokenize(text, line), line, allow_variables)
    c = p.concept()
    p.done()
    return c


def _logical_lines(text: str):
    """Yield (start line, text) joining physical lines while parentheses are open."""
    buf: list[str] = []
    start = 0
    depth = 0
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0] if "#" in raw and not _in_iri(raw) else raw
        if not line.strip() and not buf:
            continue
        if not buf:
            start = n
        buf.append(line)
        depth += line.count("(") - line.count(")")
        if depth <= 0:
            yield start, " ".join(buf)
            buf, depth = [], 0
    if buf:
        raise OntologySyntaxError("unbalanced parentheses at end of input", start)


def _in_iri(raw: str) -> bool:
    """True when every '#' on the line sits inside <...> (IRIs may contain '#')."""
    depth = 0
    for ch in raw:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth = max(0, depth - 1)
        elif ch == "#" and depth == 0:
            return False
    return True


def parse_ontology(text: str) -> Ontology:
    axioms: list[Axiom] = []
    for line, logical in _logical_lines(text):
        if logical.strip():
            axioms.extend(parse_axioms(logical, line))
    return Ontology(tuple(axioms))


def format_ontology(ontology: Ontology) -> str:
    """Write axioms in the same format (sugar-free)."""
    return "".join(f"{_fmt(ax)}\n" for ax in ontology.axioms)


def _fmt(ax: Axiom) -> str:
    if isinstance(ax, ClassAssertion):
        return f"ClassAssertion({ax.individual}, {ax.concept})"
    if isinstance(ax, PropertyAssertion):
        return f"PropertyAssertion({ax.subject}, {ax.role}, {ax.object})"
    return str(ax)

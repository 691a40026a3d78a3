import pytest

from omplan.benchmarks import blocksworld, running_example
from omplan.dl.syntax import ClassAssertion, NamedClass, PropertyAssertion
from omplan.errors import (
    DuplicateDeclaration,
    EffectOnDerivedPredicate,
    InterfaceMismatch,
    InterfaceSyntaxError,
    InverseFunctionalityViolation,
    MissingTypeSpecification,
    UndeclaredQueryVariable,
    UnknownPredicate,
    UnsupportedFeature,
)
from omplan.interface import (
    format_fluent_interface,
    format_query_interface,
    instantiate_query,
    legal_assignments,
    load_om_spec,
    parse_fluent_interface,
    parse_query_interface,
)
from omplan.pddl.syntax import Atom


def test_running_example_loads(bw):
    assert len(bw.ontology) == 9
    assert bw.warnings == ()
    assert len(bw.fluents.fluent_atoms()) == 16
    assert [q.predicate for q in bw.queries] == ["fullHands"]


def test_map_and_inverse(bw):
    f = bw.fluents
    atom = Atom("holds", ("stackBot", "blockA"))
    ax = f.map_atom(atom)
    assert ax == PropertyAssertion("stackBot", "holds", "blockA")
    assert f.inverse(ax) == atom
    assert f.map_atom(Atom("clear", ("blockA",))) is None  # unmapped predicate
    assert f.inverse(ClassAssertion("stackBot", NamedClass("Robot"))) is None


def test_unary_mapping():
    f = parse_fluent_interface("OBJECT v -> valve1\nPREDICATE open(_) -> Open")
    assert f.map_atom(Atom("open", ("v",))) == ClassAssertion("valve1", NamedClass("Open"))
    assert f.map_atom(Atom("open", ("w",))) is None  # unmapped object


def test_legal_assignment_of_running_example(bw):
    (q,) = bw.queries
    assert legal_assignments(q, bw.ontology) == [{"?r": "stackBot"}]
    assert bw.assignments(q) == [({"?r": "stackBot"}, ("stackBot",))]
    assert instantiate_query(q, {"?r": "stackBot"}) == (ClassAssertion("stackBot", NamedClass("FullHands")),)


def test_two_robots_give_two_assignments():
    om = blocksworld(2, robots=("liftBot", "stackBot")).load()
    assert [args for _, args in om.assignments(om.queries[0])] == [("liftBot",), ("stackBot",)]


def test_round_trip_formats(bw):
    assert parse_fluent_interface(format_fluent_interface(bw.fluents)) == bw.fluents
    assert parse_query_interface(format_query_interface(bw.queries)) == bw.queries


@pytest.mark.parametrize("text, error", [
    ("OBJECT a -> x\nOBJECT b -> x", InverseFunctionalityViolation),
    ("OBJECT a -> x\nOBJECT a -> y", DuplicateDeclaration),
    ("PREDICATE p(_) -> P\nPREDICATE q(_) -> P", InverseFunctionalityViolation),
    ("PREDICATE p(_,_,_) -> P", UnsupportedFeature),
    ("PREDICATE p(x) -> P", InterfaceSyntaxError),
    ("MAP a to b", InterfaceSyntaxError),
])
def test_fluent_interface_errors(text, error):
    with pytest.raises(error):
        parse_fluent_interface(text)


def test_fluent_error_reports_line():
    with pytest.raises(InverseFunctionalityViolation) as e:
        parse_fluent_interface("# header\nOBJECT a -> x\n\nOBJECT b -> x")
    assert e.value.line == 4


QUERY_OK = "PREDICATE: q\nVARIABLES: ?x\nTYPE_SPECIFICATION:\n  Robot(?x)\nQUERY:\n  Busy(?x)\n"


@pytest.mark.parametrize("text, error", [
    (QUERY_OK.replace("  Robot(?x)\n", ""), MissingTypeSpecification),
    (QUERY_OK.replace("Busy(?x)", "Busy(?y)"), UndeclaredQueryVariable),
    (QUERY_OK + QUERY_OK, DuplicateDeclaration),
    (QUERY_OK.replace("VARIABLES: ?x\n", ""), InterfaceSyntaxError),
    (QUERY_OK.replace("?x\nTYPE", "x\nTYPE"), InterfaceSyntaxError),
    (QUERY_OK.replace("Robot(?x)", "holds(?x, b)"), InterfaceSyntaxError),
    ("Busy(?x)\n" + QUERY_OK, InterfaceSyntaxError),
])
def test_query_interface_errors(text, error):
    with pytest.raises(error):
        parse_query_interface(text)


def test_empty_query_is_allowed_with_warning():
    fx = running_example()
    om = load_om_spec(fx.domain, fx.problem, fx.ontology, fx.fluents,
                      "PREDICATE: fullHands\nVARIABLES: ?r\nTYPE_SPECIFICATION:\n Robot(?r)\nQUERY:\n")
    assert om.queries[0].query == ()
    assert any("empty QUERY" in w for w in om.warnings)


@pytest.mark.parametrize("fluents, queries", [
    ("OBJECT ghost -> ghost\n", None),
    ("PREDICATE nosuch(_) -> X\n", None),
    ("PREDICATE holds(_) -> holds1\n", None),
    ("PREDICATE fullHands(_) -> FH\n", None),
    (None, "PREDICATE: ghost\nVARIABLES: ?b\nTYPE_SPECIFICATION:\n Block(?b)\nQUERY:\n Block(?b)\n"),
    (None, "PREDICATE: fullHands\nVARIABLES: ?r ?s\nTYPE_SPECIFICATION:\n Robot(?r)\n Robot(?s)\nQUERY:\n"),
])
def test_interface_mismatches(fluents, queries):
    fx = running_example()
    # either the cross-check or the domain parser rejects these
    with pytest.raises((InterfaceMismatch, UnknownPredicate)):
        load_om_spec(fx.domain, fx.problem, fx.ontology, fluents or fx.fluents, queries or fx.queries)


def test_una_adds_pairwise_inequalities(bw):
    fx = running_example()
    om = load_om_spec(fx.domain, fx.problem, fx.ontology, fx.fluents, fx.queries, una=True)
    assert len(om.ontology) > len(bw.ontology)
    assert om.planning == bw.planning


def test_guard_drops_unmapped_individuals():
    fx = running_example()
    # a second robot known to the ontology but not to the planner
    om = load_om_spec(fx.domain, fx.problem, fx.ontology + "ClassAssertion(ghostBot, PR2)\n", fx.fluents, fx.queries)
    q = om.queries[0]
    assert len(legal_assignments(q, om.ontology)) == 2
    assert [a for _, a in om.assignments(q)] == [("stackBot",)]


def test_query_predicate_may_not_be_an_effect():
    fx = running_example()
    q = "PREDICATE: onTable\nVARIABLES: ?b\nTYPE_SPECIFICATION:\n Block(?b)\nQUERY:\n Block(?b)\n"
    with pytest.raises(EffectOnDerivedPredicate):
        load_om_spec(fx.domain, fx.problem, fx.ontology, fx.fluents, q)

import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import dl_random
from dl_cases import CASES
from omplan.dl.parser import format_ontology, parse_axioms, parse_class_expression, parse_ontology
from omplan.dl.reasoner import Reasoner
from omplan.dl.syntax import (
    INCONSISTENCY,
    AtMost,
    ClassAssertion,
    Complement,
    Exactly,
    NamedClass,
    Ontology,
    SubClassOf,
    with_una,
)
from omplan.dl.tableau import satisfiable
from omplan.errors import OntologySyntaxError, ResourceLimitExceeded, UnsupportedConstruct
from oracles import fm_consistent, fm_entails


def _ask(reasoner, axioms_text, target_text):
    axioms = parse_ontology(axioms_text).axiom_set
    if target_text is None:
        return axioms, None, reasoner.is_consistent(axioms)
    target = parse_axioms(target_text)[0]
    return axioms, target, reasoner.entails(axioms, target)


@pytest.mark.parametrize("case_id, category, axioms, target, expected", CASES, ids=[c[0] for c in CASES])
def test_hand_case(case_id, category, axioms, target, expected):
    got_axioms, got_target, answer = _ask(Reasoner(), axioms, target)
    assert answer == expected
    oracle = fm_consistent(got_axioms) if got_target is None else fm_entails(got_axioms, got_target)
    assert oracle == expected


def test_random_ontologies_agree_with_finite_models():
    rng = random.Random(20261018)
    for _ in range(60):
        axioms = dl_random.ontology(rng)
        assert Reasoner(cache=False).is_consistent(axioms) == fm_consistent(axioms), [str(a) for a in axioms]


# parser ----------------------------------------------------------------------

def test_parser_sugar():
    o = parse_ontology("Block(b)\nholds(r, b)\n# comment\nSubClassOf(A,\n  and(B, C))")
    assert len(o) == 3
    assert parse_class_expression("exactly(2, holds, Block)") == Exactly(2, "holds", NamedClass("Block"))


def test_parser_round_trip(bw):
    text = format_ontology(bw.ontology)
    assert parse_ontology(text) == bw.ontology


@pytest.mark.parametrize("text, error", [
    ("SubClassOf(A", OntologySyntaxError),
    ("SubClassOf(A, B, C)", OntologySyntaxError),
    ("TransitiveObjectProperty(r)", UnsupportedConstruct),
    ("SubClassOf(A, some(inverse(r), B))", UnsupportedConstruct),
    ("and(A, B)", OntologySyntaxError),
])
def test_parser_errors(text, error):
    with pytest.raises(error):
        parse_ontology(text)


def test_parser_error_carries_line():
    with pytest.raises(OntologySyntaxError) as e:
        parse_ontology("A(a)\n\nSubClassOf(A,, B)")
    assert e.value.line == 3


# reasoner behaviour ----------------------------------------------------------

def test_node_budget_is_enforced():
    axioms = [SubClassOf(NamedClass("A"), parse_class_expression("min(2, r, A)")), ClassAssertion("a", NamedClass("A"))]
    assert satisfiable(axioms)
    with pytest.raises(ResourceLimitExceeded):
        satisfiable(axioms + [SubClassOf(NamedClass("A"), parse_class_expression("min(3, s, A)"))], node_limit=3)


def test_una_makes_individuals_distinct():
    o = Ontology(tuple(parse_axioms("ClassAssertion(x, max(1, r))") + parse_axioms("r(x, a)") + parse_axioms("r(x, b)")))
    assert Reasoner().is_consistent(o)
    assert not Reasoner().is_consistent(with_una(o))


def test_instances(bw):
    assert Reasoner().instances(bw.ontology, NamedClass("Robot")) == {"stackBot"}
    assert Reasoner().instances(bw.ontology, NamedClass("Block")) == {"blockA", "blockB", "blockC"}


def test_inconsistent_entails_everything():
    o = parse_ontology("A(a)\nClassAssertion(a, not(A))").axiom_set
    assert Reasoner().entails(o, ClassAssertion("z", NamedClass("Q")))
    assert Reasoner().entails(o, INCONSISTENCY)


# properties --------------------------------------------------------------------

seeds = st.integers(0, 10**6)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seeds, seeds)
def test_monotone_in_axioms(s1, s2):
    small = dl_random.ontology(random.Random(s1), max_tbox=2, max_abox=3)
    extra = dl_random.ontology(random.Random(s2), max_tbox=1, max_abox=2)
    r = Reasoner()
    if not r.is_consistent(small):
        assert not r.is_consistent(small + extra)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(dl_random.INDIVIDUALS), st.integers(0, 10**6))
def test_excluded_middle_only_when_inconsistent(seed, ind, cseed):
    axioms = dl_random.ontology(random.Random(seed), max_tbox=2, max_abox=3)
    c = dl_random.concept(random.Random(cseed), 1)
    r = Reasoner()
    both = r.entails(axioms, ClassAssertion(ind, c)) and r.entails(axioms, ClassAssertion(ind, Complement(c)))
    assert both == (not r.is_consistent(axioms))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cache_does_not_change_answers(seed):
    axioms = dl_random.ontology(random.Random(seed), max_tbox=2, max_abox=3)
    assert Reasoner(cache=True).is_consistent(axioms) == Reasoner(cache=False).is_consistent(axioms)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_counting_entailment(held, limit):
    # a holds `held` distinct blocks; does it satisfy max(limit)?
    blocks = [f"b{i}" for i in range(held)]
    text = "\n".join([f"holds(a, {b})\nBlock({b})" for b in blocks])
    if len(blocks) > 1:
        text += f"\nDifferentIndividuals({', '.join(blocks)})"
    axioms = parse_ontology(text or "Robot(a)").axiom_set
    consistent = Reasoner().is_consistent(axioms | {ClassAssertion("a", AtMost(limit, "holds", NamedClass("Block")))})
    assert consistent == (held <= limit)

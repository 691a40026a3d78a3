import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import just_random
from omplan.compilation import fluent_table
from omplan.dl.parser import parse_axioms, parse_ontology
from omplan.dl.reasoner import Reasoner
from omplan.dl.syntax import INCONSISTENCY, ClassAssertion, NamedClass, Ontology, PropertyAssertion
from omplan.errors import StaticOntologyInconsistent
from omplan.justify import (
    EntailmentOracle,
    JustificationLimitExceeded,
    all_justifications,
    canonical,
    just_alpha,
    just_bottom,
    justify_targets,
    one_justification,
)
from oracles import brute_force_justifications


def H(b):
    return PropertyAssertion("stackBot", "holds", b)


def test_running_example_justifications(bw):
    fluents = [ax for _, ax in fluent_table(bw.fluents)]
    target = ClassAssertion("stackBot", NamedClass("FullHands"))
    bottom, justs = justify_targets(fluents, bw.ontology, [target])
    assert bottom == [frozenset({H("blockA"), H("blockB"), H("blockC")})]
    assert justs[target] == [
        frozenset({H("blockA"), H("blockB")}),
        frozenset({H("blockA"), H("blockC")}),
        frozenset({H("blockB"), H("blockC")}),
    ]


def test_entailed_by_static_alone_gives_empty_justification():
    o = parse_ontology("A(a)\nSubClassOf(A, B)")
    assert just_alpha([ClassAssertion("a", NamedClass("C"))], o, ClassAssertion("a", NamedClass("B"))) == [frozenset()]


def test_entailed_only_through_inconsistency_gives_nothing():
    o = parse_ontology("SubClassOf(and(A, B), Nothing)")
    fa, fb = ClassAssertion("a", NamedClass("A")), ClassAssertion("a", NamedClass("B"))
    target = ClassAssertion("a", NamedClass("C"))
    assert just_bottom([fa, fb], o) == [frozenset({fa, fb})]
    assert just_alpha([fa, fb], o, target) == []
    # brute force agrees: the only entailing subset is the inconsistent one
    r = Reasoner()
    assert brute_force_justifications([fa, fb], lambda J: r.entails(o.axiom_set | J, target)) == {frozenset({fa, fb})}


def test_not_entailed_at_all():
    o = parse_ontology("SubClassOf(A, B)")
    assert all_justifications([ClassAssertion("a", NamedClass("A"))], o, ClassAssertion("a", NamedClass("C"))) == []


def test_inconsistent_static_ontology_is_rejected():
    with pytest.raises(StaticOntologyInconsistent):
        just_bottom([], parse_ontology("A(a)\nClassAssertion(a, not(A))"))


def test_one_justification_is_minimal(bw):
    fluents = [ax for _, ax in fluent_table(bw.fluents)]
    j = one_justification(fluents, bw.ontology, INCONSISTENCY)
    assert j == frozenset({H("blockA"), H("blockB"), H("blockC")})


def test_node_limit(bw):
    fluents = [ax for _, ax in fluent_table(bw.fluents)]
    with pytest.raises(JustificationLimitExceeded):
        all_justifications(fluents, bw.ontology, ClassAssertion("stackBot", NamedClass("FullHands")), node_limit=2)


def test_parallel_matches_sequential():
    rng = random.Random(3)
    static, fluents, targets = just_random.problem(rng, 9)
    o = Ontology(tuple(static))
    assert justify_targets(fluents, o, targets, jobs=1) == justify_targets(fluents, o, targets, jobs=4)


def test_oracle_memoizes(bw):
    oracle = EntailmentOracle(bw.ontology)
    s = frozenset({H("blockA")})
    oracle(s, INCONSISTENCY)
    before = oracle.stats.entailment_checks
    oracle(s, INCONSISTENCY)
    assert oracle.stats.entailment_checks == before and oracle.stats.cache_hits >= 1


def test_canonical_order():
    a, b, c = (ClassAssertion(x, NamedClass("A")) for x in "abc")
    assert canonical([frozenset({b, c}), frozenset({c}), frozenset({a, c})]) == [
        frozenset({c}), frozenset({a, c}), frozenset({b, c})]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 8))
def test_matches_brute_force_with_invariants(seed, k):
    static, fluents, targets = just_random.problem(random.Random(seed), k)
    r = Reasoner()
    if not r.is_consistent(static):
        return
    o = Ontology(tuple(static))
    s = o.axiom_set
    bottom, justs = justify_targets(fluents, o, targets, reasoner=r)
    expected_bottom = brute_force_justifications(fluents, lambda J: not r.is_consistent(s | J))
    assert set(bottom) == expected_bottom
    for t in targets:
        js = justs[t]
        assert set(js) == brute_force_justifications(fluents, lambda J: r.entails(s | J, t)) - expected_bottom
        for j in js:
            # minimal, and no member of Just_bot
            assert all(not r.entails(s | (j - {b}), t) for b in j)
            assert j not in expected_bottom
        # antichain
        assert not any(x < y for x in js for y in js)

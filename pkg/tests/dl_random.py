"""Random ALCOQ ontologies over a small signature, for cross-checks against the finite-model oracle."""

from omplan.dl.syntax import (
    THING,
    AtLeast,
    AtMost,
    ClassAssertion,
    Complement,
    DifferentIndividuals,
    Intersection,
    NamedClass,
    Nominal,
    Only,
    PropertyAssertion,
    Some,
    SubClassOf,
    Union_,
)

CLASSES = ["A", "B", "C"]
ROLES = ["r", "s"]
INDIVIDUALS = ["a", "b", "c"]


def concept(rng, depth):
    k = rng.randrange(11 if depth > 0 else 4)
    if k < 2:
        return NamedClass(rng.choice(CLASSES))
    if k == 2:
        return Complement(NamedClass(rng.choice(CLASSES)))
    if k == 3:
        return Nominal(rng.choice(INDIVIDUALS)) if rng.random() < 0.5 else THING
    if k == 4:
        return Intersection((concept(rng, depth - 1), concept(rng, depth - 1)))
    if k == 5:
        return Union_((concept(rng, depth - 1), concept(rng, depth - 1)))
    if k == 6:
        return Some(rng.choice(ROLES), concept(rng, depth - 1))
    if k == 7:
        return Only(rng.choice(ROLES), concept(rng, depth - 1))
    if k == 8:
        return AtMost(rng.randrange(3), rng.choice(ROLES), concept(rng, depth - 1))
    if k == 9:
        return AtLeast(rng.randrange(1, 3), rng.choice(ROLES), concept(rng, depth - 1))
    return Complement(concept(rng, depth - 1))


def ontology(rng, max_tbox=3, max_abox=4):
    axioms = [SubClassOf(concept(rng, 2), concept(rng, 2)) for _ in range(rng.randrange(0, max_tbox + 1))]
    for _ in range(rng.randrange(1, max_abox + 1)):
        k = rng.randrange(3)
        if k == 0:
            axioms.append(ClassAssertion(rng.choice(INDIVIDUALS), concept(rng, 2)))
        elif k == 1:
            axioms.append(PropertyAssertion(rng.choice(INDIVIDUALS), rng.choice(ROLES), rng.choice(INDIVIDUALS)))
        else:
            a, b = rng.sample(INDIVIDUALS, 2)
            axioms.append(DifferentIndividuals(a, b))
    return axioms

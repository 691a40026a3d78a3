"""Independent test oracles.

``fm_consistent`` decides consistency by searching for a finite model with at
most ``bound`` domain elements, encoded as an SMT problem over Boolean
matrices. For the shapes used in the tests (ALCOQ with small cardinalities
and shallow existential nesting) a model exists within
``|Ind| + sum of number restrictions + 2`` elements whenever one exists at
all, which is the default bound.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import z3

from omplan.dl.syntax import (
    AtLeast,
    AtMost,
    Bottom,
    ClassAssertion,
    Complement,
    DifferentIndividuals,
    Exactly,
    Intersection,
    NamedClass,
    Nominal,
    Only,
    PropertyAssertion,
    Some,
    SubClassOf,
    Top,
    Union_,
    axiom_individuals,
    expand_axiom,
)


def _walk(c, classes, roles, counts):
    if isinstance(c, NamedClass):
        classes.add(c.name)
    elif isinstance(c, Complement):
        _walk(c.arg, classes, roles, counts)
    elif isinstance(c, (Intersection, Union_)):
        for d in c.args:
            _walk(d, classes, roles, counts)
    elif isinstance(c, (Some, Only)):
        roles.add(c.role)
        counts.append(1)
        _walk(c.filler, classes, roles, counts)
    elif isinstance(c, (AtMost, AtLeast, Exactly)):
        roles.add(c.role)
        counts.append(c.n + 1)
        _walk(c.filler, classes, roles, counts)


def default_bound(axioms) -> int:
    axioms = [e for ax in axioms for e in expand_axiom(ax)]
    classes, roles, counts = set(), set(), []
    for ax in axioms:
        if isinstance(ax, SubClassOf):
            _walk(ax.sub, classes, roles, counts)
            _walk(ax.sup, classes, roles, counts)
        elif isinstance(ax, ClassAssertion):
            _walk(ax.concept, classes, roles, counts)
    inds = {a for ax in axioms for a in axiom_individuals(ax)}
    return max(1, len(inds) + sum(counts) + 2)


def _model_exists(axioms, size: int) -> bool:
    classes, roles, counts = set(), set(), []
    for ax in axioms:
        if isinstance(ax, SubClassOf):
            _walk(ax.sub, classes, roles, counts)
            _walk(ax.sup, classes, roles, counts)
        elif isinstance(ax, ClassAssertion):
            _walk(ax.concept, classes, roles, counts)
        elif isinstance(ax, PropertyAssertion):
            roles.add(ax.role)
    inds = sorted({a for ax in axioms for a in axiom_individuals(ax)})
    dom = range(size)
    cls = {c: [z3.Bool(f"C_{c}_{i}") for i in dom] for c in sorted(classes)}
    rel = {r: [[z3.Bool(f"R_{r}_{i}_{j}") for j in dom] for i in dom] for r in sorted(roles)}
    ind = {a: z3.Int(f"I_{a}") for a in inds}
    # element i belongs to the model iff live[i]; one query covers every size up to ``size``
    live = [z3.Bool(f"L_{i}") for i in dom]
    s = z3.Solver()
    s.add(z3.Or(live))
    for v in ind.values():
        s.add(v >= 0, v < size)
        s.add(z3.And([z3.Implies(v == i, live[i]) for i in dom]))
    for r in rel.values():
        for i in dom:
            for j in dom:
                s.add(z3.Implies(r[i][j], z3.And(live[i], live[j])))

    def at(a, i):
        return ind[a] == i

    def sem(c, i):
        if isinstance(c, Top):
            return z3.BoolVal(True)
        if isinstance(c, Bottom):
            return z3.BoolVal(False)
        if isinstance(c, NamedClass):
            return cls[c.name][i]
        if isinstance(c, Nominal):
            return at(c.individual, i)
        if isinstance(c, Complement):
            return z3.Not(sem(c.arg, i))
        if isinstance(c, Intersection):
            return z3.And([sem(d, i) for d in c.args]) if c.args else z3.BoolVal(True)
        if isinstance(c, Union_):
            return z3.Or([sem(d, i) for d in c.args]) if c.args else z3.BoolVal(False)
        if isinstance(c, Some):
            return z3.Or([z3.And(rel[c.role][i][j], sem(c.filler, j)) for j in dom])
        if isinstance(c, Only):
            return z3.And([z3.Implies(rel[c.role][i][j], sem(c.filler, j)) for j in dom])
        count = z3.Sum([z3.If(z3.And(rel[c.role][i][j], sem(c.filler, j)), 1, 0) for j in dom])
        if isinstance(c, AtMost):
            return count <= c.n
        if isinstance(c, AtLeast):
            return count >= c.n
        return count == c.n

    for ax in axioms:
        if isinstance(ax, SubClassOf):
            for i in dom:
                s.add(z3.Implies(z3.And(live[i], sem(ax.sub, i)), sem(ax.sup, i)))
        elif isinstance(ax, ClassAssertion):
            s.add(z3.And([z3.Implies(at(ax.individual, i), sem(ax.concept, i)) for i in dom]))
        elif isinstance(ax, PropertyAssertion):
            s.add(z3.And([z3.Implies(z3.And(at(ax.subject, i), at(ax.object, j)), rel[ax.role][i][j])
                          for i in dom for j in dom]))
        elif isinstance(ax, DifferentIndividuals):
            s.add(ind[ax.left] != ind[ax.right])
        else:
            raise TypeError(ax)
    return s.check() == z3.sat


@lru_cache(maxsize=None)
def _fm_consistent(axioms: frozenset, bound: int) -> bool:
    expanded = sorted({e for ax in axioms for e in expand_axiom(ax)}, key=str)
    return _model_exists(expanded, bound)


def fm_consistent(axioms, bound: int | None = None) -> bool:
    axioms = frozenset(axioms)
    return _fm_consistent(axioms, bound if bound is not None else default_bound(axioms))


def fm_entails(axioms, target, bound: int | None = None) -> bool:
    """Entailment via the same refutation reduction, evaluated by the finite-model oracle."""
    from omplan.dl.syntax import INCONSISTENCY

    axioms = frozenset(axioms)
    if target == INCONSISTENCY:
        return not fm_consistent(axioms, bound)
    if isinstance(target, ClassAssertion):
        extra = ClassAssertion(target.individual, Complement(target.concept))
    elif isinstance(target, PropertyAssertion):
        extra = ClassAssertion(target.subject, Only(target.role, Complement(Nominal(target.object))))
    else:
        raise TypeError(target)
    return not fm_consistent(axioms | {extra}, bound)


def brute_force_justifications(fluents, entails_fn) -> set[frozenset]:
    """All minimal subsets J of ``fluents`` with entails_fn(J), by checking every subset.

    Subsets are visited by increasing size; a subset is minimal iff it entails
    and none of its maximal proper subsets does (entailment is monotone).
    """
    fluents = list(fluents)
    status: dict[frozenset, bool] = {}
    for k in range(len(fluents) + 1):
        for combo in combinations(fluents, k):
            status[frozenset(combo)] = entails_fn(frozenset(combo))
    return {
        s for s, ok in status.items()
        if ok and not any(status[s - {x}] for x in s)
    }

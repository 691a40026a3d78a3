"""Justifications relative to a background ontology.

A justification of ``alpha`` over candidate axioms ``F`` relative to a
background ``O'`` is a minimal ``J ⊆ F`` with ``J ∪ O' ⊨ alpha``. One
justification is found by expand-then-shrink; all of them by a hitting-set
tree over single-justification calls. The reasoner is used as a black box.
"""

from __future__ import annotations

import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dl.reasoner import Reasoner, default_reasoner
from .dl.syntax import INCONSISTENCY, Axiom, Ontology
from .errors import ResourceLimitExceeded, StaticOntologyInconsistent

Justification = frozenset  # frozenset[Axiom]

DEFAULT_HST_LIMIT = 100_000


class JustificationLimitExceeded(ResourceLimitExceeded):
    """The hitting-set tree outgrew its node budget; the enumeration would be incomplete."""


def fluent_order(axioms: Iterable[Axiom]) -> list[Axiom]:
    """Canonical (lexicographic) order used for every search over fluents."""
    return sorted(set(axioms), key=str)


def canonical(justs: Iterable[Justification]) -> list[Justification]:
    """Sort justifications by size, then lexicographically by their sorted members."""
    return sorted(justs, key=lambda j: (len(j), [str(a) for a in fluent_order(j)]))


@dataclass
class JustifyStats:
    entailment_checks: int = 0
    cache_hits: int = 0
    hst_nodes: int = 0


class EntailmentOracle:
    """Memoized ``subset ∪ background ⊨ target`` checks, shareable across targets and threads."""

    def __init__(self, background: Ontology | Iterable[Axiom], reasoner: Reasoner | None = None):
        self.background = background if isinstance(background, Ontology) else Ontology(background)
        self.reasoner = reasoner or default_reasoner()
        self._cache: dict[tuple[frozenset, Axiom], bool] = {}
        self._lock = threading.Lock()
        self.stats = JustifyStats()

    def __call__(self, subset: frozenset, target: Axiom) -> bool:
        key = (subset, target)
        with self._lock:
            hit = self._cache.get(key)
            if hit is not None:
                self.stats.cache_hits += 1
                return hit
        axioms = self.background.axiom_set | subset
        if target != INCONSISTENCY and self(subset, INCONSISTENCY):
            result = True  # an inconsistent set entails everything
        else:
            result = self.reasoner.entails(axioms, target)
        with self._lock:
            self.stats.entailment_checks += 1
            self._cache[key] = result
        return result

    def consistent(self, subset: frozenset = frozenset()) -> bool:
        return not self(subset, INCONSISTENCY)


def _oracle(background, reasoner, oracle):
    return oracle if oracle is not None else EntailmentOracle(background, reasoner)


def one_justification(
    fluents: Iterable[Axiom],
    background: Ontology | Iterable[Axiom],
    target: Axiom,
    reasoner: Reasoner | None = None,
    oracle: EntailmentOracle | None = None,
) -> Justification | None:
    """One minimal entailing subset of ``fluents``, or None if even all of them do not suffice."""
    check = _oracle(background, reasoner, oracle)
    order = fluent_order(fluents)
    if not check(frozenset(order), target):
        return None
    if check(frozenset(), target):
        return frozenset()
    # expand: grow a prefix in doubling steps until it entails the target
    size = 1
    while size < len(order) and not check(frozenset(order[:size]), target):
        size *= 2
    current = set(order[:size])
    # shrink: drop fluents in reverse lexicographic order while entailment survives
    for ax in reversed(order[:size]):
        trial = frozenset(current - {ax})
        if check(trial, target):
            current.discard(ax)
    return frozenset(current)


def all_justifications(
    fluents: Iterable[Axiom],
    background: Ontology | Iterable[Axiom],
    target: Axiom,
    reasoner: Reasoner | None = None,
    oracle: EntailmentOracle | None = None,
    node_limit: int = DEFAULT_HST_LIMIT,
) -> list[Justification]:
    """Every justification, via a breadth-first hitting-set tree with justification reuse.

    Raises :class:`JustificationLimitExceeded` rather than returning a partial answer.
    """
    check = _oracle(background, reasoner, oracle)
    universe = frozenset(fluents)
    found: list[Justification] = []
    first = one_justification(universe, (), target, oracle=check)
    if first is None:
        return []
    if not first:
        return [frozenset()]
    found.append(first)
    seen_paths: set[frozenset] = set()
    closed: list[frozenset] = []
    queue: deque[tuple[frozenset, Justification]] = deque([(frozenset(), first)])
    nodes = 1
    while queue:
        path, label = queue.popleft()
        for ax in fluent_order(label):
            child = path | {ax}
            if child in seen_paths or any(c <= child for c in closed):
                continue
            seen_paths.add(child)
            nodes += 1
            if nodes > node_limit:
                raise JustificationLimitExceeded(
                    f"hitting-set tree for {target} exceeded {node_limit} nodes"
                )
            reuse = next((j for j in found if not (j & child)), None)
            if reuse is not None:
                queue.append((child, reuse))
                continue
            j = one_justification(universe - child, (), target, oracle=check)
            if j is None:
                closed.append(child)
                continue
            found.append(j)
            queue.append((child, j))
    with check._lock:
        check.stats.hst_nodes += nodes
    return canonical(found)


def just_bottom(
    fluents: Iterable[Axiom],
    static: Ontology,
    reasoner: Reasoner | None = None,
    oracle: EntailmentOracle | None = None,
    node_limit: int = DEFAULT_HST_LIMIT,
) -> list[Justification]:
    """All minimal sets of fluents that are inconsistent with ``static``."""
    check = _oracle(static, reasoner, oracle)
    if not check.consistent():
        raise StaticOntologyInconsistent("the static ontology is inconsistent; every state would be too")
    return all_justifications(fluents, static, INCONSISTENCY, oracle=check, node_limit=node_limit)


def just_alpha(
    fluents: Iterable[Axiom],
    static: Ontology,
    target: Axiom,
    reasoner: Reasoner | None = None,
    oracle: EntailmentOracle | None = None,
    node_limit: int = DEFAULT_HST_LIMIT,
    bottom: Sequence[Justification] | None = None,
) -> list[Justification]:
    """Just(F ∪ O, O, alpha) minus Just_⊥."""
    check = _oracle(static, reasoner, oracle)
    if bottom is None:
        bottom = just_bottom(fluents, static, oracle=check, node_limit=node_limit)
    excluded = set(bottom)
    return [j for j in all_justifications(fluents, static, target, oracle=check, node_limit=node_limit)
            if j not in excluded]


def justify_targets(
    fluents: Iterable[Axiom],
    static: Ontology,
    targets: Iterable[Axiom],
    reasoner: Reasoner | None = None,
    node_limit: int = DEFAULT_HST_LIMIT,
    jobs: int = 1,
    oracle: EntailmentOracle | None = None,
) -> tuple[list[Justification], dict[Axiom, list[Justification]]]:
    """Just_⊥ once, then Just_alpha for every distinct target, optionally in parallel.

    The result does not depend on ``jobs``: each target's enumeration is
    deterministic and the shared cache only memoizes reasoner answers.
    """
    fluents = fluent_order(fluents)
    check = _oracle(static, reasoner, oracle)
    bottom = just_bottom(fluents, static, oracle=check, node_limit=node_limit)
    distinct = list(dict.fromkeys(targets))

    def run(t: Axiom) -> list[Justification]:
        return just_alpha(fluents, static, t, oracle=check, node_limit=node_limit, bottom=bottom)

    if jobs > 1 and len(distinct) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, distinct))
    else:
        results = [run(t) for t in distinct]
    return bottom, dict(zip(distinct, results))

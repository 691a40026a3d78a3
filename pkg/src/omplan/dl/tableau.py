"""Tableau decision procedure for ALCOQ knowledge bases.

Concepts are interned in negation normal form. GCIs with an atomic (or
conjunction-with-atom) left side are absorbed into lazy-unfolding triggers;
everything else is internalized. Search is depth-first with copy-on-branch
and subset blocking between blockable ancestors. Every fact records the
branch points it depends on so that failures backjump over irrelevant choices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from ..errors import ResourceLimitExceeded
from .syntax import (
    Axiom,
    Bottom,
    ClassAssertion,
    ClassExpr,
    Complement,
    DifferentIndividuals,
    Exactly,
    AtLeast,
    AtMost,
    Intersection,
    NamedClass,
    Nominal,
    Only,
    PropertyAssertion,
    Some,
    SubClassOf,
    Top,
    Union_,
    expand_axiom,
)

DEFAULT_NODE_LIMIT = 10**6

# concept kinds
TOP, BOT, ATOM, NATOM, NOM, NNOM, AND, OR, SOME, ALL, MIN, MAX = range(12)
_LITERALS = frozenset((TOP, BOT, ATOM, NATOM, NOM, NNOM))


_NODEP: frozenset = frozenset()
_PROPAGATED: list = []


class _Clash(Exception):
    """A contradiction; ``dep`` holds the branch points it depends on."""

    def __init__(self, dep: frozenset = _NODEP):
        super().__init__()
        self.dep = dep


class ConceptTable:
    """Interns NNF concepts as small integers; ``neg`` gives the NNF complement."""

    def __init__(self):
        self._ids: dict[tuple, int] = {}
        self.defs: list[tuple] = []
        self._neg: dict[int, int] = {}
        self.top = self._intern((TOP,))
        self.bot = self._intern((BOT,))

    def _intern(self, key: tuple) -> int:
        cid = self._ids.get(key)
        if cid is None:
            cid = len(self.defs)
            self._ids[key] = cid
            self.defs.append(key)
        return cid

    def junction(self, kind: int, parts: Iterable[int]) -> int:
        absorbing, neutral = (self.bot, self.top) if kind == AND else (self.top, self.bot)
        out: list[int] = []
        for p in parts:
            if p == absorbing:
                return absorbing
            if p == neutral:
                continue
            d = self.defs[p]
            for q in d[1] if d[0] == kind else (p,):
                if q not in out:
                    out.append(q)
        if not out:
            return neutral
        if len(out) == 1:
            return out[0]
        return self._intern((kind, tuple(out)))

    def some(self, role: str, c: int) -> int:
        return self.bot if c == self.bot else self._intern((SOME, role, c))

    def all(self, role: str, c: int) -> int:
        return self.top if c == self.top else self._intern((ALL, role, c))

    def at_least(self, n: int, role: str, c: int) -> int:
        if n == 0:
            return self.top
        if n == 1:
            return self.some(role, c)
        return self.bot if c == self.bot else self._intern((MIN, n, role, c))

    def at_most(self, n: int, role: str, c: int) -> int:
        if n == 0:
            return self.all(role, self.neg(c))
        return self.top if c == self.bot else self._intern((MAX, n, role, c))

    def nnf(self, expr: ClassExpr, positive: bool = True) -> int:
        if isinstance(expr, NamedClass):
            return self._intern((ATOM if positive else NATOM, expr.name))
        if isinstance(expr, Top):
            return self.top if positive else self.bot
        if isinstance(expr, Bottom):
            return self.bot if positive else self.top
        if isinstance(expr, Nominal):
            return self._intern((NOM if positive else NNOM, expr.individual))
        if isinstance(expr, Complement):
            return self.nnf(expr.arg, not positive)
        if isinstance(expr, (Intersection, Union_)):
            conj = isinstance(expr, Intersection) == positive
            return self.junction(AND if conj else OR, (self.nnf(a, positive) for a in expr.args))
        if isinstance(expr, Some):
            f = self.nnf(expr.filler, positive)
            return self.some(expr.role, f) if positive else self.all(expr.role, f)
        if isinstance(expr, Only):
            f = self.nnf(expr.filler, positive)
            return self.all(expr.role, f) if positive else self.some(expr.role, f)
        if isinstance(expr, AtLeast):
            f = self.nnf(expr.filler)
            if positive:
                return self.at_least(expr.n, expr.role, f)
            return self.bot if expr.n == 0 else self.at_most(expr.n - 1, expr.role, f)
        if isinstance(expr, AtMost):
            f = self.nnf(expr.filler)
            return self.at_most(expr.n, expr.role, f) if positive else self.at_least(expr.n + 1, expr.role, f)
        if isinstance(expr, Exactly):
            both = Intersection((AtMost(expr.n, expr.role, expr.filler), AtLeast(expr.n, expr.role, expr.filler)))
            return self.nnf(both, positive)
        raise TypeError(f"not a class expression: {expr!r}")

    def neg(self, cid: int) -> int:
        out = self._neg.get(cid)
        if out is not None:
            return out
        d = self.defs[cid]
        kind = d[0]
        if kind == TOP:
            out = self.bot
        elif kind == BOT:
            out = self.top
        elif kind in (ATOM, NATOM):
            out = self._intern((NATOM if kind == ATOM else ATOM, d[1]))
        elif kind in (NOM, NNOM):
            out = self._intern((NNOM if kind == NOM else NOM, d[1]))
        elif kind in (AND, OR):
            out = self.junction(OR if kind == AND else AND, (self.neg(p) for p in d[1]))
        elif kind == SOME:
            out = self.all(d[1], self.neg(d[2]))
        elif kind == ALL:
            out = self.some(d[1], self.neg(d[2]))
        elif kind == MIN:
            out = self.at_most(d[1] - 1, d[2], d[3])
        else:
            out = self.at_least(d[1] + 1, d[2], d[3])
        self._neg[cid] = out
        self._neg[out] = cid
        return out


class _Graph:
    """A completion graph. Nominal nodes are roots; blockable nodes form trees below them.

    Every fact (label entry, edge, inequality) carries the set of branch
    points it depends on, which drives dependency-directed backtracking.
    """

    __slots__ = ("labels", "succ", "parent", "nominal", "ind_node", "neq", "next_id", "expanded")

    def copy(self) -> "_Graph":
        g = _Graph.__new__(_Graph)
        g.labels = {n: dict(l) for n, l in self.labels.items()}
        g.succ = {n: {r: dict(s) for r, s in e.items()} for n, e in self.succ.items()}
        g.parent = dict(self.parent)
        g.nominal = set(self.nominal)
        g.ind_node = dict(self.ind_node)
        g.neq = dict(self.neq)
        g.next_id = self.next_id
        g.expanded = {n: set(s) for n, s in self.expanded.items()}
        return g

    def successors(self, x: int, role: str) -> dict[int, frozenset]:
        return self.succ[x].get(role, {})

    def distinct(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.neq


class _Branch:
    __slots__ = ("graph", "alts", "index", "bid", "accum")

    def __init__(self, graph: _Graph, alts: list, bid: int):
        self.graph = graph
        self.alts = alts
        self.index = 0
        self.bid = bid
        self.accum: frozenset = _NODEP


class Tableau:
    """One satisfiability test. Construct, then call :meth:`run`."""

    def __init__(self, axioms: Iterable[Axiom], node_limit: int = DEFAULT_NODE_LIMIT):
        self.node_limit = node_limit
        self.nodes_created = 0
        self.branches = 0
        t = self.table = ConceptTable()
        self.universal: list[int] = []
        self.triggers: dict[int, list[int]] = {}
        self.trivially_inconsistent = False

        tbox: list[SubClassOf] = []
        abox: list[Axiom] = []
        for ax in axioms:
            for e in expand_axiom(ax):
                (tbox if isinstance(e, SubClassOf) else abox).append(e)

        for ax in tbox:
            self._absorb(ax)

        asserted = {ax: t.nnf(ax.concept) for ax in abox if isinstance(ax, ClassAssertion)}
        individuals: list[str] = []
        for ax in abox:
            names = (ax.individual,) if isinstance(ax, ClassAssertion) else \
                (ax.subject, ax.object) if isinstance(ax, PropertyAssertion) else (ax.left, ax.right)
            for a in names:
                if a not in individuals:
                    individuals.append(a)
        for d in list(t.defs):
            if d[0] in (NOM, NNOM) and d[1] not in individuals:
                individuals.append(d[1])

        g = self.graph = _Graph()
        g.labels, g.succ, g.parent, g.expanded = {}, {}, {}, {}
        g.nominal, g.ind_node, g.neq, g.next_id = set(), {}, {}, 0
        try:
            for a in individuals:
                x = self._new_node(g, None, _NODEP)
                g.nominal.add(x)
                g.ind_node[a] = x
                self._add(g, x, t._intern((NOM, a)), _NODEP)
            for ax in abox:
                if isinstance(ax, ClassAssertion):
                    self._add(g, g.ind_node[ax.individual], asserted[ax], _NODEP)
                elif isinstance(ax, PropertyAssertion):
                    g.succ[g.ind_node[ax.subject]].setdefault(ax.role, {})[g.ind_node[ax.object]] = _NODEP
                else:
                    a, b = g.ind_node[ax.left], g.ind_node[ax.right]
                    if a == b:
                        raise _Clash()
                    g.neq[frozenset((a, b))] = _NODEP
        except _Clash:
            self.trivially_inconsistent = True

    # preprocessing -------------------------------------------------------

    def _absorb(self, ax: SubClassOf) -> None:
        t = self.table
        sub, sup = ax.sub, ax.sup
        if isinstance(sub, Top):
            c = t.nnf(sup)
            if c != t.top and c not in self.universal:
                self.universal.append(c)
            return
        if isinstance(sub, (NamedClass, Nominal)):
            self.triggers.setdefault(t.nnf(sub), []).append(t.nnf(sup))
            return
        if isinstance(sub, Intersection):
            for i, part in enumerate(sub.args):
                if isinstance(part, (NamedClass, Nominal)):
                    rest = sub.args[:i] + sub.args[i + 1:]
                    body = Union_((Complement(Intersection(rest)), sup)) if rest else sup
                    self.triggers.setdefault(t.nnf(part), []).append(t.nnf(body))
                    return
        c = t.nnf(Union_((Complement(sub), sup)))
        if c != t.top and c not in self.universal:
            self.universal.append(c)

    # graph primitives ----------------------------------------------------

    def _new_node(self, g: _Graph, parent: int | None, dep: frozenset) -> int:
        self.nodes_created += 1
        if self.nodes_created > self.node_limit:
            raise ResourceLimitExceeded(f"tableau exceeded the node budget of {self.node_limit}")
        x = g.next_id
        g.next_id += 1
        g.labels[x] = {}
        g.succ[x] = {}
        g.expanded[x] = set()
        g.parent[x] = parent
        for c in self.universal:
            self._add(g, x, c, dep)
        return x

    def _add(self, g: _Graph, x: int, c: int, dep: frozenset) -> bool:
        label = g.labels[x]
        if c in label:
            return False
        t = self.table
        if c == t.bot:
            raise _Clash(dep)
        if t.defs[c][0] in _LITERALS:
            other = label.get(t.neg(c))
            if other is not None:
                raise _Clash(dep | other)
        label[c] = dep
        return True

    def _has(self, g: _Graph, y: int, c: int) -> bool:
        return c == self.table.top or c in g.labels[y]

    def _dep_has(self, g: _Graph, y: int, c: int) -> frozenset:
        return _NODEP if c == self.table.top else g.labels[y][c]

    def _add_edge(self, g: _Graph, x: int, role: str, y: int, dep: frozenset) -> None:
        targets = g.succ[x].setdefault(role, {})
        if y not in targets:
            targets[y] = dep

    def _prune(self, g: _Graph, y: int) -> None:
        for targets in g.succ[y].values():
            for w in targets:
                if w not in g.nominal and w in g.labels and g.parent.get(w) == y:
                    self._prune(g, w)
        for store in (g.labels, g.succ, g.parent, g.expanded):
            del store[y]
        g.neq = {p: d for p, d in g.neq.items() if y not in p}

    def _merge(self, g: _Graph, y: int, x: int, dep: frozenset) -> None:
        """Merge node ``y`` into node ``x``."""
        pair = frozenset((x, y))
        if pair in g.neq:
            raise _Clash(dep | g.neq[pair])
        for c, d in sorted(g.labels[y].items()):
            self._add(g, x, c, d | dep)
        for z, edges in g.succ.items():
            if z == y:
                continue
            for role, targets in edges.items():
                d = targets.pop(y, None)
                if d is not None and x not in targets:
                    targets[x] = d | dep
        for role, targets in g.succ[y].items():
            for w, d in targets.items():
                if w == y:
                    self._add_edge(g, x, role, x, d | dep)
                elif w in g.nominal:
                    self._add_edge(g, x, role, w, d | dep)
        moved: dict[frozenset, frozenset] = {}
        for p, d in g.neq.items():
            if y in p:
                (other,) = p - {y}
                q = frozenset((x, other))
                moved.setdefault(q, d | dep)
            else:
                moved.setdefault(p, d)
        g.neq = moved
        for a, n in g.ind_node.items():
            if n == y:
                g.ind_node[a] = x
        # y's blockable successors are regenerated from x's label
        for targets in g.succ[y].values():
            for w in list(targets):
                if w not in g.nominal and w in g.labels and g.parent.get(w) == y:
                    self._prune(g, w)
        g.nominal.discard(y)
        for store in (g.labels, g.succ, g.parent, g.expanded):
            del store[y]
        g.neq = {p: d for p, d in g.neq.items() if y not in p}

    def _merge_pair(self, g: _Graph, a: int, b: int, dep: frozenset) -> None:
        """Merge two nodes: blockable into nominal, otherwise the younger into the older."""
        if (b in g.nominal) and (a not in g.nominal):
            a, b = b, a
        elif (a in g.nominal) == (b in g.nominal) and b < a:
            a, b = b, a
        self._merge(g, b, a, dep)

    # blocking ------------------------------------------------------------

    def _blocking(self, g: _Graph) -> dict[int, int]:
        """0 = not blocked, 1 = directly blocked, 2 = indirectly blocked (subset blocking)."""
        status: dict[int, int] = {}
        for x in sorted(g.labels):
            if x in g.nominal:
                status[x] = 0
                continue
            p = g.parent[x]
            if status.get(p, 0):
                status[x] = 2
                continue
            label = g.labels[x].keys()
            a = p
            status[x] = 0
            while a is not None and a not in g.nominal:
                if label <= g.labels[a].keys():
                    status[x] = 1
                    break
                a = g.parent[a]
        return status

    # rules ---------------------------------------------------------------

    def _deterministic(self, g: _Graph, blocked: dict[int, int]) -> bool:
        """Apply the and, trigger, all and nominal rules once over the graph."""
        defs = self.table.defs
        changed = False
        for x in sorted(g.labels):
            if x not in g.labels or blocked.get(x, 0) == 2:
                continue
            label = g.labels[x]
            pending = label.keys() - g.expanded[x]
            while pending:
                for c in sorted(pending):
                    g.expanded[x].add(c)
                    d = defs[c]
                    if d[0] == AND:
                        for p in d[1]:
                            changed |= self._add(g, x, p, label[c])
                    elif d[0] in (ATOM, NOM):
                        for p in self.triggers.get(c, ()):
                            changed |= self._add(g, x, p, label[c])
                pending = label.keys() - g.expanded[x]
            for c in sorted(label):
                d = defs[c]
                if d[0] == NOM:
                    target = g.ind_node[d[1]]
                    if target != x:
                        self._merge_pair(g, target, x, label[c])
                        return True
                elif d[0] == ALL:
                    for y, de in sorted(g.successors(x, d[1]).items()):
                        changed |= self._add(g, y, d[2], label[c] | de)
        return changed

    def _choose(self, g: _Graph, blocked: dict[int, int]):
        t = self.table
        for x in sorted(g.labels):
            if blocked[x] == 2:
                continue
            label = g.labels[x]
            for c in sorted(label):
                d = t.defs[c]
                if d[0] != MAX or d[3] == t.top:
                    continue
                f, nf = d[3], t.neg(d[3])
                for y, de in sorted(g.successors(x, d[2]).items()):
                    lab = g.labels[y]
                    if f not in lab and nf not in lab:
                        base = label[c] | de
                        return [
                            lambda h, bid, acc, y=y, f=f, base=base: self._add(h, y, f, base | {bid}),
                            lambda h, bid, acc, y=y, nf=nf, base=base: self._add(h, y, nf, base | acc | {bid}),
                        ]
        return None

    def _clique(self, g: _Graph, nodes: list[int], size: int) -> tuple[int, ...] | None:
        if size <= 1:
            return tuple(nodes[:size]) if len(nodes) >= size else None
        for combo in combinations(nodes, size):
            if all(g.distinct(a, b) for a, b in combinations(combo, 2)):
                return combo
        return None

    def _at_most(self, g: _Graph, blocked: dict[int, int]):
        defs = self.table.defs
        for x in sorted(g.labels):
            if blocked[x] == 2:
                continue
            label = g.labels[x]
            for c in sorted(label):
                d = defs[c]
                if d[0] != MAX:
                    continue
                n, role, f = d[1], d[2], d[3]
                succ = g.successors(x, role)
                cands = sorted(y for y in succ if self._has(g, y, f))
                if len(cands) <= n:
                    continue
                clique = self._clique(g, cands, n + 1)
                if clique is not None:
                    dep = label[c]
                    for y in clique:
                        dep = dep | succ[y] | self._dep_has(g, y, f)
                    for a, b in combinations(clique, 2):
                        dep = dep | g.neq[frozenset((a, b))]
                    raise _Clash(dep)
                base = label[c]
                for y in cands:
                    base = base | succ[y] | self._dep_has(g, y, f)
                pairs = [(a, b) for a, b in combinations(cands, 2) if not g.distinct(a, b)]
                return [lambda h, bid, acc, a=a, b=b, base=base: self._merge_pair(h, a, b, base | acc | {bid})
                        for a, b in pairs]
        return None

    def _cost(self, c: int) -> int:
        """Rough price of committing to ``c``; cheap disjuncts are tried first."""
        d = self.table.defs[c]
        if d[0] in _LITERALS or d[0] in (ALL, MAX):
            return 0
        if d[0] == SOME:
            return 2
        if d[0] == MIN:
            return 1 + d[1]
        return max(self._cost(p) for p in d[1]) if d[0] in (AND, OR) else 1

    def _disjunction(self, g: _Graph, blocked: dict[int, int]):
        t = self.table
        for x in sorted(g.labels):
            if blocked[x] == 2:
                continue
            label = g.labels[x]
            for c in sorted(label):
                d = t.defs[c]
                if d[0] != OR or any(p in label for p in d[1]):
                    continue
                base = label[c]
                live = []
                for p in d[1]:
                    np_ = t.neg(p)
                    if np_ in label:
                        base = base | label[np_]
                    else:
                        live.append(p)
                if not live:
                    raise _Clash(base)
                if len(live) == 1:
                    self._add(g, x, live[0], base)
                    return _PROPAGATED
                live.sort(key=self._cost)
                options = []
                for i, p in enumerate(live):
                    # semantic branching: earlier disjuncts are known to fail
                    earlier = tuple(t.neg(q) for q in live[:i])

                    def alt(h, bid, acc, x=x, p=p, earlier=earlier, base=base):
                        for e in earlier:
                            self._add(h, x, e, base | acc | {bid})
                        self._add(h, x, p, base | {bid})

                    options.append(alt)
                return options
        return None

    def _generate(self, g: _Graph, blocked: dict[int, int]) -> bool:
        defs = self.table.defs
        for x in sorted(g.labels):
            if blocked[x]:
                continue
            label = g.labels[x]
            for c in sorted(label):
                d = defs[c]
                if d[0] == SOME:
                    role, f = d[1], d[2]
                    if any(self._has(g, y, f) for y in g.successors(x, role)):
                        continue
                    dep = label[c]
                    y = self._new_node(g, x, dep)
                    self._add_edge(g, x, role, y, dep)
                    self._add(g, y, f, dep)
                    return True
                if d[0] == MIN:
                    n, role, f = d[1], d[2], d[3]
                    cands = sorted(y for y in g.successors(x, role) if self._has(g, y, f))
                    if len(cands) >= n and self._clique(g, cands, n) is not None:
                        continue
                    dep = label[c]
                    fresh = [self._new_node(g, x, dep) for _ in range(n)]
                    for y in fresh:
                        self._add_edge(g, x, role, y, dep)
                        self._add(g, y, f, dep)
                    for a, b in combinations(fresh, 2):
                        g.neq[frozenset((a, b))] = dep
                    return True
        return False

    # search --------------------------------------------------------------

    def _expand(self, g: _Graph):
        """Saturate deterministically; return branch alternatives or None when complete."""
        while True:
            blocked = self._blocking(g)
            if self._deterministic(g, blocked):
                continue
            for rule in (self._choose, self._at_most, self._disjunction):
                alts = rule(g, blocked)
                if alts is _PROPAGATED:
                    break
                if alts:
                    return alts
            else:
                if self._generate(g, blocked):
                    continue
                return None

    def _try(self, br: _Branch) -> _Graph:
        last = br.index == len(br.alts) - 1
        g = br.graph if last else br.graph.copy()
        br.alts[br.index](g, br.bid, br.accum)
        return g

    def run(self) -> bool:
        """True iff the knowledge base is satisfiable."""
        if self.trivially_inconsistent:
            return False
        stack: list[_Branch] = []
        g: _Graph | None = self.graph
        next_bid = 1
        while True:
            try:
                if g is None:
                    raise AssertionError
                alts = self._expand(g)
                if alts is None:
                    return True
                self.branches += 1
                br = _Branch(g, alts, next_bid)
                next_bid += 1
                stack.append(br)
                g = self._try(br)
                continue
            except _Clash as clash:
                dep = clash.dep
            # dependency-directed backtracking
            g = None
            while g is None:
                if not stack:
                    return False
                br = stack[-1]
                if br.bid not in dep:
                    stack.pop()
                    continue
                br.accum = br.accum | (dep - {br.bid})
                if br.index + 1 >= len(br.alts):
                    stack.pop()
                    dep = br.accum
                    continue
                br.index += 1
                try:
                    g = self._try(br)
                except _Clash as clash:
                    dep = clash.dep


def satisfiable(axioms: Iterable[Axiom], node_limit: int = DEFAULT_NODE_LIMIT) -> bool:
    return Tableau(axioms, node_limit).run()

"""Generators for the fixture families used by the demos and the test suite.

Each generator returns a :class:`Fixture` holding the five input texts; call
:meth:`Fixture.load` to parse them into an :class:`OMPlanningSpec`.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources

from .interface import OMPlanningSpec, load_om_spec


@dataclass(frozen=True)
class Fixture:
    name: str
    domain: str
    problem: str
    ontology: str
    fluents: str
    queries: str

    def load(self, una: bool = False) -> OMPlanningSpec:
        return load_om_spec(self.domain, self.problem, self.ontology, self.fluents, self.queries, una)

    def write(self, directory) -> dict[str, str]:
        """Write the five files into ``directory``; returns the paths by role."""
        from pathlib import Path

        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        paths = {}
        for role, fname in FILE_NAMES.items():
            p = d / fname
            p.write_text(getattr(self, role))
            paths[role] = str(p)
        return paths


FILE_NAMES = {
    "domain": "domain.pddl",
    "problem": "problem.pddl",
    "ontology": "ontology.txt",
    "fluents": "fluents.txt",
    "queries": "queries.txt",
}


def packaged(name: str) -> Fixture:
    """A fixture shipped with the package (currently ``blocksworld``)."""
    base = resources.files("omplan") / "data" / name
    texts = {role: (base / fname).read_text() for role, fname in FILE_NAMES.items()}
    return Fixture(name, **texts)


def running_example() -> Fixture:
    """The three-block, one-robot example with goal ``on(blockA, blockB)``."""
    return packaged("blocksworld")


# blocksworld ---------------------------------------------------------------

BLOCKSWORLD_DOMAIN = resources.files("omplan").joinpath("data/blocksworld/domain.pddl").read_text()

_BW_QUERIES = """PREDICATE: fullHands
VARIABLES: ?r
TYPE_SPECIFICATION:
   Robot(?r)
QUERY:
   FullHands(?r)
"""


def block_names(n: int) -> list[str]:
    if not 1 <= n <= 26:
        raise ValueError("between 1 and 26 blocks")
    return [f"block{c}" for c in string.ascii_uppercase[:n]]


def blocksworld(n: int, robots: tuple[str, ...] = ("stackBot",), goal: str = "tower") -> Fixture:
    """``n`` blocks on the table, two-handed PR2 robots, goal a single tower.

    With ``goal="tower"`` the tower is blockA on blockB on ... on the last block.
    """
    blocks = block_names(n)
    objects = list(robots) + blocks
    init = [f"(robot {r})" for r in robots]
    init += [f"(block {b})" for b in blocks]
    init += [f"(onTable {b})" for b in blocks] + [f"(clear {b})" for b in blocks]
    if goal == "tower":
        goal_atoms = [f"(on {a} {b})" for a, b in zip(blocks, blocks[1:])] or [f"(onTable {blocks[0]})"]
    else:
        goal_atoms = [goal]
    problem = (
        f"(define (problem bw-{n})\n  (:domain om-blocksworld)\n"
        f"  (:objects {' '.join(objects)})\n"
        "  (:init\n    " + "\n    ".join(init) + ")\n"
        "  (:goal (and " + " ".join(goal_atoms) + ")))\n"
    )
    onto = ["SubClassOf(PR2, and(Robot, max(2, holds, Block)))",
            "SubClassOf(and(PR2, exactly(2, holds, Block)), FullHands)"]
    if len(blocks) > 1:
        onto.insert(0, f"DifferentIndividuals({', '.join(blocks)})")
    onto += [f"ClassAssertion({r}, PR2)" for r in robots]
    onto += [f"Block({b})" for b in blocks]
    fluents = [f"OBJECT {o} -> {o}" for o in objects] + ["PREDICATE holds(_,_) -> holds"]
    return Fixture(
        f"blocksworld-{n}" + (f"-{len(robots)}robots" if len(robots) > 1 else ""),
        BLOCKSWORLD_DOMAIN,
        problem,
        "\n".join(onto) + "\n",
        "\n".join(fluents) + "\n",
        _BW_QUERIES,
    )


def two_robot_blocksworld(n: int = 2) -> Fixture:
    """Two PR2 robots, so the fullHands query has two legal assignments."""
    return blocksworld(n, robots=("liftBot", "stackBot"))


# pipes ----------------------------------------------------------------------

PIPES_DOMAIN = """; An underwater vehicle documents damaged pipe segments and closes valves
; so that no tank stays connected to a damaged segment.
(define (domain om-pipes)
  (:requirements :strips)
  (:predicates
    (auv ?r) (atWp ?r ?w) (adjacent ?w ?v) (located ?c ?w)
    (segment ?s) (valve ?v)
    (photographed ?s) (operated ?v)
    (documented ?s) (tankSafe ?t))
  (:action move
    :parameters (?r ?from ?to)
    :precondition (and (auv ?r) (atWp ?r ?from) (adjacent ?from ?to))
    :effect (and (atWp ?r ?to) (not (atWp ?r ?from))))
  (:action photograph
    :parameters (?r ?s ?w)
    :precondition (and (auv ?r) (atWp ?r ?w) (located ?s ?w) (segment ?s))
    :effect (photographed ?s))
  (:action operate
    :parameters (?r ?v ?w)
    :precondition (and (auv ?r) (atWp ?r ?w) (located ?v ?w) (valve ?v))
    :effect (operated ?v)))
"""

PIPES_QUERIES = """PREDICATE: documented
VARIABLES: ?s
TYPE_SPECIFICATION:
   DamagedSegment(?s)
QUERY:
   Documented(?s)

PREDICATE: tankSafe
VARIABLES: ?t
TYPE_SPECIFICATION:
   Tank(?t)
QUERY:
   SafeTank(?t)
"""

PIPES_TBOX = """# every valve is either turned by hand or remotely; both close it when operated
SubClassOf(Valve, or(ManualValve, RemoteValve))
SubClassOf(and(ManualValve, Operated), ClosedValve)
SubClassOf(and(RemoteValve, Operated), ClosedValve)
SubClassOf(and(Tank, some(isolatedBy, ClosedValve)), SafeTank)
SubClassOf(and(DamagedSegment, Photographed), Documented)
SubClassOf(DamagedSegment, Segment)
# tanks have no handle
DisjointClasses(Tank, Operated)
"""


def pipes(n: int) -> Fixture:
    """``n`` waypoints in a row, a pipe segment at each, valves and tanks interleaved.

    Valves sit at waypoints 2, 5, 8, tanks at 3, 6; each tank is isolated by
    the valve just before it. The last segment and the middle one are damaged.
    """
    if n < 3:
        raise ValueError("pipes needs at least 3 waypoints")
    wps = [f"wp{i}" for i in range(1, n + 1)]
    segs = [f"seg{i}" for i in range(1, n + 1)]
    valves = [(f"valve{k}", i) for k, i in enumerate(range(2, n + 1, 3), start=1)]
    tanks = [(f"tank{k}", i) for k, i in enumerate(range(3, n + 1, 3), start=1)]
    damaged = sorted({n, (n + 1) // 2})
    objects = ["auv1"] + wps + segs + [v for v, _ in valves] + [t for t, _ in tanks]
    init = ["(auv auv1)", "(atWp auv1 wp1)"]
    for a, b in zip(wps, wps[1:]):
        init += [f"(adjacent {a} {b})", f"(adjacent {b} {a})"]
    init += [f"(located {s} {w})" for s, w in zip(segs, wps)] + [f"(segment {s})" for s in segs]
    init += [f"(located {v} wp{i})" for v, i in valves] + [f"(valve {v})" for v, _ in valves]
    init += [f"(located {t} wp{i})" for t, i in tanks]
    goal = [f"(documented seg{i})" for i in damaged] + [f"(tankSafe {t})" for t, _ in tanks]
    problem = (
        f"(define (problem pipes-{n})\n  (:domain om-pipes)\n"
        f"  (:objects {' '.join(objects)})\n"
        "  (:init\n    " + "\n    ".join(init) + ")\n"
        "  (:goal (and " + " ".join(goal) + ")))\n"
    )
    abox = [f"Valve({v})" for v, _ in valves] + [f"Tank({t})" for t, _ in tanks]
    abox += [f"DamagedSegment(seg{i})" if i in damaged else f"Segment(seg{i})" for i in range(1, n + 1)]
    for t, i in tanks:
        v = max((v for v, j in valves if j < i), key=lambda v: dict(valves)[v])
        abox.append(f"isolatedBy({t}, {v})")
    mapped = segs + [v for v, _ in valves] + [t for t, _ in tanks]
    fluents = [f"OBJECT {o} -> {o}" for o in mapped]
    fluents += ["PREDICATE photographed(_) -> Photographed", "PREDICATE operated(_) -> Operated"]
    return Fixture(
        f"pipes-{n}", PIPES_DOMAIN, problem, PIPES_TBOX + "\n".join(abox) + "\n", "\n".join(fluents) + "\n",
        PIPES_QUERIES,
    )


# one-armed delivery -----------------------------------------------------------

DELIVERY_DOMAIN = """; A one-armed robot must deliver two blocks together. Grabbing the second
; block overloads it: the ontology view of that state is inconsistent.
(define (domain om-delivery)
  (:requirements :strips :equality :negative-preconditions)
  (:predicates (robot ?r) (block ?b) (onTable ?b) (holds ?r ?b) (delivered ?b) (busy ?r))
  (:action grab
    :parameters (?r ?b)
    :precondition (and (robot ?r) (block ?b) (onTable ?b))
    :effect (and (holds ?r ?b) (not (onTable ?b))))
  (:action deliverPair
    :parameters (?r ?b ?c)
    :precondition (and (holds ?r ?b) (holds ?r ?c) (not (= ?b ?c)))
    :effect (and (delivered ?b) (delivered ?c) (not (holds ?r ?b)) (not (holds ?r ?c)))))
"""


def one_armed_delivery() -> Fixture:
    """The only plan passes through a state whose ontology view is inconsistent."""
    problem = """(define (problem deliver-two)
  (:domain om-delivery)
  (:objects grabBot blockA blockB)
  (:init (robot grabBot) (block blockA) (block blockB) (onTable blockA) (onTable blockB))
  (:goal (and (delivered blockA) (delivered blockB))))
"""
    ontology = """DifferentIndividuals(blockA, blockB)
SubClassOf(OneArm, and(Robot, max(1, holds, Block)))
ClassAssertion(grabBot, OneArm)
Block(blockA)
Block(blockB)
"""
    fluents = """OBJECT grabBot -> grabBot
OBJECT blockA -> blockA
OBJECT blockB -> blockB
PREDICATE holds(_,_) -> holds
"""
    queries = """PREDICATE: busy
VARIABLES: ?r
TYPE_SPECIFICATION:
   Robot(?r)
QUERY:
   ClassAssertion(?r, some(holds, Block))
"""
    return Fixture("one-armed-delivery", DELIVERY_DOMAIN, problem, ontology, fluents, queries)


def all_fixtures() -> list[Fixture]:
    """Every fixture used by the end-to-end checks."""
    out = [running_example()]
    out += [blocksworld(n) for n in range(2, 7)]
    out += [pipes(n) for n in range(3, 9)]
    out += [one_armed_delivery(), two_robot_blocksworld(2)]
    return out

import pytest

from omplan.benchmarks import running_example
from omplan.compilation import CompileOptions, compile_om, emit_pddl
from omplan.pddl.parser import parse_spec
from omplan.pddl.semantics import validate_plan
from omplan.planner import LIMIT, SOLVED, UNSOLVABLE, Limits, grounded_actions, solve, static_predicates

TOY = """
(define (domain d)
  (:constants o1)
  (:predicates (p ?x) (q ?x) (never ?x))
  (:action a :parameters (?x) :precondition (p ?x) :effect (q ?x))
  (:action nullary :parameters () :precondition (and) :effect (p o1)))
"""


def toy(goal):
    return parse_spec(TOY, f"(define (problem t) (:domain d) (:objects o2 o3) (:init (p o2)) (:goal {goal}))")


@pytest.fixture(scope="module")
def compiled():
    return compile_om(running_example().load())


def test_ground_action_counts():
    spec = toy("(q o1)")
    acts = grounded_actions(spec, prune=False)
    assert sum(a.name == "a" for a in acts) == 3
    assert sum(a.name == "nullary" for a in acts) == 1


def test_running_example_ground_count(compiled):
    # pickup 3, putdown 4, stack 4*3-3, unstack 16
    assert len(grounded_actions(compiled.planning)) == 32
    assert static_predicates(compiled.planning) == {"robot", "block"}


def test_running_example_plan(compiled):
    result = solve(compiled.planning)
    assert result.status == SOLVED
    assert [str(a) for a in result.plan] == ["(pickup stackBot blockA)", "(stack stackBot blockA blockB)"]
    assert validate_plan(compiled.planning, result.plan)


def test_reparsed_pddl_gives_same_plan(compiled):
    d, p = emit_pddl(compiled)
    again = parse_spec(d, p, ["fullHands"])
    assert solve(again).plan == solve(compiled.planning).plan


def test_goal_already_true():
    r = solve(toy("(p o2)"))
    assert r.status == SOLVED and r.plan == ()


def test_unreachable_goal():
    assert solve(toy("(never o1)")).status == UNSOLVABLE


def test_shortest_plan_and_determinism():
    first = solve(toy("(and (q o1) (q o2))"))
    # breadth-first with actions tried in name order
    assert [str(a) for a in first.plan] == ["(a o2)", "(nullary)", "(a o1)"]
    assert solve(toy("(and (q o1) (q o2))")).plan == first.plan


def test_state_limit(compiled):
    r = solve(compiled.planning, Limits(max_states=2))
    assert r.status == LIMIT and "states" in r.message


def test_heuristic_hook_is_not_implemented(compiled):
    with pytest.raises(NotImplementedError):
        solve(compiled.planning, heuristic=lambda s: 0)


def test_block_inconsistent_keeps_running_example_solvable():
    c = compile_om(running_example().load(), CompileOptions(block_inconsistent=True))
    assert len(solve(c.planning).plan) == 2

"""Plans that pass through states the ontology considers impossible.

A one-armed robot has to deliver two blocks together, so it must grab both.
Holding two blocks contradicts the axiom that it holds at most one, so the
middle state is inconsistent. By default such states are allowed; with
``block_inconsistent`` every action requires a consistent state and the
task becomes unsolvable.
"""

from omplan.benchmarks import one_armed_delivery
from omplan.compilation import CompileOptions, compile_om
from omplan.oracle import DirectSemantics
from omplan.planner import solve

om = one_armed_delivery().load()
direct = DirectSemantics(om)

for block in (False, True):
    compiled = compile_om(om, CompileOptions(block_inconsistent=block))
    result = solve(compiled.planning)
    print(f"block_inconsistent={block}: {result.status}")
    if result.solved:
        verdict = direct.validate_plan(result.plan)
        for action, state in zip(result.plan, verdict.states[1:]):
            flag = "consistent" if direct.consistent(direct.extend(state)) else "INCONSISTENT"
            print(f"    {str(action):40} -> {flag}")

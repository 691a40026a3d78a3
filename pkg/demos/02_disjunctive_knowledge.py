"""Pipe inspection: a tank is safe once its valve is operated, whatever kind of valve it is.

The ontology only says a valve is manual or remote. Either kind closes when
operated, so ``tankSafe`` follows by case analysis over the disjunction,
which lies outside Horn fragments. The compiled rule needs nothing more
than ``operated(valve1)``.
"""

from omplan.benchmarks import pipes
from omplan.compilation import compile_om
from omplan.oracle import DirectSemantics
from omplan.planner import solve

om = pipes(5).load()
compiled = compile_om(om)
for rule in compiled.rules:
    print(rule)

result = solve(compiled.planning)
print(f"\nplan of length {len(result.plan)}:")
for action in result.plan:
    print("   ", action)

direct = DirectSemantics(om)
optimum, seen = direct.bfs()
print(f"\nsearch over ontology-enhanced states finds length {len(optimum)} after {seen} states")
print("valid under the direct semantics:", bool(direct.validate_plan(result.plan)))

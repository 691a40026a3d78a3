"""Compilation and search effort as the number of blocks grows."""

import time

from omplan.benchmarks import blocksworld
from omplan.compilation import compile_om
from omplan.planner import solve

print(f"{'blocks':>6} {'fluents':>8} {'just_bot':>8} {'just_q':>6} {'compile s':>9} {'plan':>4} {'states':>7} {'search s':>8}")
for n in range(2, 7):
    om = blocksworld(n).load()
    t0 = time.perf_counter()
    compiled = compile_om(om)
    t1 = time.perf_counter()
    result = solve(compiled.planning)
    t2 = time.perf_counter()
    r = compiled.report
    print(f"{n:>6} {r['fluents']:>8} {r['justifications_bottom']:>8} {r['justifications_query']:>6} "
          f"{t1 - t0:>9.2f} {len(result.plan):>4} {result.stats.states:>7} {t2 - t1:>8.2f}")

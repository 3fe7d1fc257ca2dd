"""Definitive acceptance-cell measurement at high n, using the harness."""
import sys
import time

from project_game.agents import StrategyKind
from project_game.tournament import ExperimentPlan, run_cell

S, TW, CF, ME = (StrategyKind.SHAPER, StrategyKind.TEAMWORKER,
                 StrategyKind.COMPLETER_FINISHER, StrategyKind.MONITOR_EVALUATOR)

N = int(sys.argv[1]) if len(sys.argv) > 1 else 300
JOBS = int(sys.argv[2]) if len(sys.argv) > 2 else 2

CELLS = [
    ((TW, S), 200, (0.0, 0.2, 0.5, 0.8)),
    ((ME, CF), 200, (0.0, 0.2, 0.5, 0.8)),
    ((CF, S), 50, (0.0, 0.2, 0.5, 0.8)),
    ((CF, S), 200, (0.0, 0.5, 0.8)),
]

for pair, cost, risks in CELLS:
    plan = ExperimentPlan(pair=pair, risks=risks, test_costs=(cost,),
                          games_per_cell=N, master_seed=0)
    for risk in risks:
        t0 = time.time()
        r = run_cell(plan, risk, cost, jobs=JOBS)
        print(f'{pair[0].value[:2]}v{pair[1].value[:2]}@{risk}/c{cost}: '
              f'rate={r.win_rate_a:.3f} ci=({r.ci_low:.3f},{r.ci_high:.3f}) '
              f'draws={r.draws} dur={r.mean_duration_ms:.0f} '
              f'({time.time()-t0:.0f}s)', flush=True)

"""Sweep agent-design knobs over the acceptance-critical matchup cells."""
import itertools
import sys
import time

import project_game.agents as A
from project_game import GameConfig, GameSetup, StrategyKind, run_game
from project_game.seeding import derive_seed

S, TW, CF, ME = (StrategyKind.SHAPER, StrategyKind.TEAMWORKER,
                 StrategyKind.COMPLETER_FINISHER, StrategyKind.MONITOR_EVALUATOR)

N = int(sys.argv[1]) if len(sys.argv) > 1 else 200


def rate(a, b, risk, test_cost=200, n=N):
    wins_a = 0
    for i in range(n):
        swap = i >= n // 2
        red, blue = (b, a) if swap else (a, b)
        cfg = GameConfig(risk_level=risk, test_cost_ms=test_cost,
                         seed=derive_seed(99, a.value, b.value, risk, test_cost, i))
        st = run_game(GameSetup(cfg, red, blue))
        if st.winner is not None and (st.winner.value == 'red') != swap:
            wins_a += 1
    return wins_a / n


def run_config(tag):
    t0 = time.time()
    tw = [rate(TW, S, r) for r in (0.0, 0.2, 0.5, 0.8)]
    me = [rate(ME, CF, r) for r in (0.0, 0.2, 0.5, 0.8)]
    lo_tw, lo_me = min(tw), min(me)
    print(f'{tag}: TWvS={[f"{x:.2f}" for x in tw]} MEvCF={[f"{x:.2f}" for x in me]} '
          f'min_tw={lo_tw:.2f} min_me={lo_me:.2f} ({time.time()-t0:.0f}s)', flush=True)


VERIFY_DEFAULT = True

def set_knobs(verify, pool, cap):
    A.SCOUT_VERIFY_GOALS = verify
    A.SCOUT_POOL = pool
    A.GRADIENT_EXTRAPOLATION_CAP = cap


for verify, pool, cap in itertools.product((True, False), (1, 3), (2, 5)):
    set_knobs(verify, pool, cap)
    run_config(f'verify={int(verify)} pool={pool} cap={cap}')

"""Regime sweep: scout/camp/verify combinations over all criterion cells."""
import sys
import time

import project_game.agents as A
from project_game import GameConfig, GameSetup, StrategyKind, run_game
from project_game.seeding import derive_seed

S, TW, CF, ME = (StrategyKind.SHAPER, StrategyKind.TEAMWORKER,
                 StrategyKind.COMPLETER_FINISHER, StrategyKind.MONITOR_EVALUATOR)

N = int(sys.argv[1]) if len(sys.argv) > 1 else 150


def rate(a, b, risk, cost, n=N):
    wins = 0
    for i in range(n):
        swap = i >= n // 2
        red, blue = (b, a) if swap else (a, b)
        cfg = GameConfig(risk_level=risk, test_cost_ms=cost,
                         seed=derive_seed(99, a.value, b.value, risk, cost, i))
        st = run_game(GameSetup(cfg, red, blue))
        if st.winner is not None and (st.winner.value == 'red') != swap:
            wins += 1
    return wins / n


def run_config(tag):
    t0 = time.time()
    tw = [rate(TW, S, r, 200) for r in (0.0, 0.5, 0.8)]
    me = [rate(ME, CF, r, 200) for r in (0.0, 0.5, 0.8)]
    cf50 = [rate(CF, S, r, 50) for r in (0.0, 0.5, 0.8)]
    cf200 = rate(CF, S, 0.0, 200)
    print(f'{tag}:\n  TWvS(200)={[f"{x:.2f}" for x in tw]}  MEvCF(200)={[f"{x:.2f}" for x in me]}\n'
          f'  CFvS(50)={[f"{x:.2f}" for x in cf50]}  CFvS(200)@0={cf200:.2f}'
          f'  ({time.time()-t0:.0f}s)', flush=True)


for tag, knobs in {
    'scout+camp+noverify': dict(SCOUT_ENABLED=True, CAMP_ENABLED=True, SCOUT_VERIFY_GOALS=False),
    'scout+NOcamp+noverify': dict(SCOUT_ENABLED=True, CAMP_ENABLED=False, SCOUT_VERIFY_GOALS=False),
    'scout+NOcamp+verify': dict(SCOUT_ENABLED=True, CAMP_ENABLED=False, SCOUT_VERIFY_GOALS=True),
    'NOscout+NOcamp': dict(SCOUT_ENABLED=False, CAMP_ENABLED=False, SCOUT_VERIFY_GOALS=False),
}.items():
    for k, v in knobs.items():
        setattr(A, k, v)
    run_config(tag)

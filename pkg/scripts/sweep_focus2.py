"""Second focused sweep: freshness window, stale range, reorientation."""
import itertools
import sys
import time

import project_game.agents as A
from project_game import GameConfig, GameSetup, StrategyKind, run_game
from project_game.seeding import derive_seed

S, TW, CF, ME = (StrategyKind.SHAPER, StrategyKind.TEAMWORKER,
                 StrategyKind.COMPLETER_FINISHER, StrategyKind.MONITOR_EVALUATOR)

N = int(sys.argv[1]) if len(sys.argv) > 1 else 150


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
    print(f'{tag}: TWvS={[f"{x:.2f}" for x in tw]} MEvCF={[f"{x:.2f}" for x in me]} '
          f'min_tw={min(tw):.2f} min_me={min(me):.2f} ({time.time()-t0:.0f}s)',
          flush=True)


BASE = dict(
    SCOUT_ENABLED=True, SCOUT_VERIFY_GOALS=False, SCOUT_POOL=3,
    GRADIENT_EXTRAPOLATION_CAP=5, FRESH_WINDOW_INTERVALS=1,
    STALE_RANGE_DISCOVERIES=1, REORIENT_AFTER_BLOCKS=1,
)

for fresh, stale, reorient in itertools.product((1, 2, 4), (1, 3), (1, 2)):
    for k, v in BASE.items():
        setattr(A, k, v)
    A.FRESH_WINDOW_INTERVALS = fresh
    A.STALE_RANGE_DISCOVERIES = stale
    A.REORIENT_AFTER_BLOCKS = reorient
    run_config(f'fresh={fresh} stale={stale} reorient={reorient}')

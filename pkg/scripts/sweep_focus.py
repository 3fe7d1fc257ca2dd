"""Focused comparison of structurally different agent-base configurations."""
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
    dur = 0
    for i in range(n):
        swap = i >= n // 2
        red, blue = (b, a) if swap else (a, b)
        cfg = GameConfig(risk_level=risk, test_cost_ms=test_cost,
                         seed=derive_seed(99, a.value, b.value, risk, test_cost, i))
        st = run_game(GameSetup(cfg, red, blue))
        dur += st.clock_ms
        if st.winner is not None and (st.winner.value == 'red') != swap:
            wins_a += 1
    return wins_a / n, dur // n


def run_config(tag):
    t0 = time.time()
    tw = [rate(TW, S, r) for r in (0.0, 0.2, 0.5, 0.8)]
    me = [rate(ME, CF, r) for r in (0.0, 0.2, 0.5, 0.8)]
    print(f'{tag}:\n  TWvS ={[f"{x:.2f}/{d}" for x, d in tw]}\n'
          f'  MEvCF={[f"{x:.2f}/{d}" for x, d in me]}\n'
          f'  min_tw={min(x for x, _ in tw):.2f} min_me={min(x for x, _ in me):.2f}'
          f' ({time.time()-t0:.0f}s)', flush=True)


CONFIGS = {
    'literal (no scout, cap1)': dict(SCOUT_ENABLED=False, GRADIENT_EXTRAPOLATION_CAP=1),
    'no scout, cap5': dict(SCOUT_ENABLED=False, GRADIENT_EXTRAPOLATION_CAP=5),
    'scout no-verify pool3 cap5': dict(SCOUT_ENABLED=True, SCOUT_VERIFY_GOALS=False,
                                       SCOUT_POOL=3, GRADIENT_EXTRAPOLATION_CAP=5),
    'scout verify pool3 cap1': dict(SCOUT_ENABLED=True, SCOUT_VERIFY_GOALS=True,
                                    SCOUT_POOL=3, GRADIENT_EXTRAPOLATION_CAP=1),
}

DEFAULTS = dict(
    SCOUT_ENABLED=True, SCOUT_VERIFY_GOALS=True, SCOUT_POOL=3,
    GRADIENT_EXTRAPOLATION_CAP=5, FRESH_WINDOW_INTERVALS=1,
    STALE_RANGE_DISCOVERIES=1,
)

for tag, knobs in CONFIGS.items():
    for k, v in DEFAULTS.items():
        setattr(A, k, v)
    for k, v in knobs.items():
        setattr(A, k, v)
    run_config(tag)

"""Deterministic tournament harness: strategy-pair match series across risk
levels and testing costs, with side swapping, Wilson intervals, and CSV/SVG
reporting.

Per-game seeds are derived statelessly from (master seed, cell content, game
index), so cells are independent: removing one cell never changes another
cell's games.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .agents import StrategyKind
from .errors import DomainError
from .eventlog import LogReport, validate_log, write_event_log
from .metrics import PlayerCounters, fold_counters
from .model import GameConfig, TeamColor
from .runner import GameSetup, run_game
from .seeding import derive_seed


@dataclass(frozen=True)
class ExperimentPlan:
    pair: tuple[StrategyKind, StrategyKind]
    risks: tuple[float, ...] = (0.0, 0.2, 0.5, 0.8)
    test_costs: tuple[int, ...] = (200,)
    games_per_cell: int = 200
    master_seed: int = 0
    swap_sides: bool = True

    def __post_init__(self):
        if any(not 0.0 <= r <= 1.0 for r in self.risks):
            raise DomainError("risks must lie in [0, 1]")
        if self.swap_sides and (self.games_per_cell < 2 or self.games_per_cell % 2):
            raise DomainError(
                "games_per_cell must be even and >= 2 when swapping sides"
            )


@dataclass(frozen=True)
class MatchReport:
    risk: float
    test_cost: int
    strategy_a: str
    strategy_b: str
    games: int
    wins_a: int
    wins_b: int
    draws: int
    win_rate_a: float
    ci_low: float
    ci_high: float
    mean_duration_ms: float
    win_rate_a_excl_draws: float


class GameSpec(NamedTuple):
    """Everything needed to play one tournament game in any process."""

    strategy_a: str
    strategy_b: str
    risk: float
    test_cost: int
    seed: int
    a_plays_red: bool
    game_id: str
    log_dir: str | None


class GameOutcome(NamedTuple):
    """Compact, picklable result of one played game."""

    spec: GameSpec
    a_won: bool
    b_won: bool
    draw: bool
    duration_ms: int
    invariants: LogReport
    counters: dict[int, PlayerCounters]
    team_of: dict[int, str]  # player id -> strategy name


def game_seed(master_seed: int, a: str, b: str, risk: float, test_cost: int,
              index: int) -> int:
    return derive_seed(master_seed, a, b, repr(float(risk)), test_cost, index)


def play_game_spec(spec: GameSpec) -> GameOutcome:
    """Worker entry point: play one game, validate its log, tally counters."""
    red_name = spec.strategy_a if spec.a_plays_red else spec.strategy_b
    blue_name = spec.strategy_b if spec.a_plays_red else spec.strategy_a
    cfg = GameConfig(
        risk_level=spec.risk, test_cost_ms=spec.test_cost, seed=spec.seed
    )
    setup = GameSetup(cfg, StrategyKind(red_name), StrategyKind(blue_name))
    log_path = None
    if spec.log_dir:
        log_path = Path(spec.log_dir) / f"{spec.game_id}.jsonl"
    state = run_game(setup, log_path=log_path)
    a_team = TeamColor.RED if spec.a_plays_red else TeamColor.BLUE
    team_of = {
        p.player_id: (spec.strategy_a if p.team is a_team else spec.strategy_b)
        for p in state.players
    }
    return GameOutcome(
        spec=spec,
        a_won=state.winner is a_team,
        b_won=state.winner is not None and state.winner is not a_team,
        draw=state.winner is None,
        duration_ms=state.clock_ms,
        invariants=validate_log(state.event_log),
        counters=fold_counters(state.event_log),
        team_of=team_of,
    )


def cell_specs(plan: ExperimentPlan, risk: float, test_cost: int,
               log_dir: str | None = None) -> list[GameSpec]:
    a, b = plan.pair[0].value, plan.pair[1].value
    half = plan.games_per_cell // 2
    specs = []
    for i in range(plan.games_per_cell):
        a_red = (i < half) if plan.swap_sides else True
        specs.append(
            GameSpec(
                strategy_a=a,
                strategy_b=b,
                risk=float(risk),
                test_cost=int(test_cost),
                seed=game_seed(plan.master_seed, a, b, risk, test_cost, i),
                a_plays_red=a_red,
                game_id=f"{a}-vs-{b}_r{risk}_c{test_cost}_g{i:04d}",
                log_dir=log_dir,
            )
        )
    return specs


def run_specs(specs: Sequence[GameSpec], jobs: int = 1) -> list[GameOutcome]:
    """Play the given games, in order-stable fashion regardless of jobs."""
    if jobs <= 1:
        return [play_game_spec(s) for s in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(specs) // (jobs * 8))
        return list(pool.map(play_game_spec, specs, chunksize=chunk))


def summarize_cell(plan: ExperimentPlan, risk: float, test_cost: int,
                   outcomes: Sequence[GameOutcome]) -> MatchReport:
    wins_a = sum(o.a_won for o in outcomes)
    wins_b = sum(o.b_won for o in outcomes)
    draws = sum(o.draw for o in outcomes)
    games = len(outcomes)
    win_rate = wins_a / games
    low, high = wilson_interval(wins_a, games)
    decided = wins_a + wins_b
    return MatchReport(
        risk=float(risk),
        test_cost=int(test_cost),
        strategy_a=plan.pair[0].value,
        strategy_b=plan.pair[1].value,
        games=games,
        wins_a=wins_a,
        wins_b=wins_b,
        draws=draws,
        win_rate_a=win_rate,
        ci_low=low,
        ci_high=high,
        mean_duration_ms=sum(o.duration_ms for o in outcomes) / games,
        win_rate_a_excl_draws=(wins_a / decided) if decided else 0.0,
    )


def run_cell(plan: ExperimentPlan, risk: float, test_cost: int,
             jobs: int = 1, log_dir: str | None = None) -> MatchReport:
    outcomes = run_specs(cell_specs(plan, risk, test_cost, log_dir), jobs=jobs)
    return summarize_cell(plan, risk, test_cost, outcomes)


def run_plan(plan: ExperimentPlan, jobs: int = 1,
             log_dir: str | None = None) -> list[MatchReport]:
    return [
        run_cell(plan, risk, cost, jobs=jobs, log_dir=log_dir)
        for cost in plan.test_costs
        for risk in plan.risks
    ]


def wilson_interval(wins: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0 <= wins <= n:
        raise DomainError("wins must lie in [0, n]")
    p = wins / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = p + z2 / (2 * n)
    margin = z * math.sqrt((p * (1.0 - p) + z2 / (4 * n)) / n)
    low = max(0.0, (center - margin) / denom)
    high = min(1.0, (center + margin) / denom)
    return low, high


CSV_HEADER = (
    "risk,test_cost,strategy_a,strategy_b,games,wins_a,wins_b,draws,"
    "win_rate_a,ci_low,ci_high,mean_duration_ms,win_rate_a_excl_draws"
)


def report_csv(reports: Sequence[MatchReport]) -> str:
    lines = [CSV_HEADER]
    for r in reports:
        lines.append(
            f"{r.risk},{r.test_cost},{r.strategy_a},{r.strategy_b},{r.games},"
            f"{r.wins_a},{r.wins_b},{r.draws},{r.win_rate_a:.6f},"
            f"{r.ci_low:.6f},{r.ci_high:.6f},{r.mean_duration_ms:.3f},"
            f"{r.win_rate_a_excl_draws:.6f}"
        )
    return "\n".join(lines) + "\n"


def emit_report(reports: Sequence[MatchReport], csv_path: str | Path,
                plot_path: str | Path | None = None) -> None:
    """Write the CSV (and optionally an SVG chart of win rate vs risk, one
    series per pair and testing cost)."""
    if not reports:
        raise DomainError("no reports to emit")
    Path(csv_path).write_text(report_csv(reports), encoding="utf-8")
    if plot_path is not None:
        _plot(reports, plot_path)


def _plot(reports: Sequence[MatchReport], path: str | Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict[tuple[str, str, int], list[MatchReport]] = {}
    for r in reports:
        series.setdefault((r.strategy_a, r.strategy_b, r.test_cost), []).append(r)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (a, b, cost), rows in series.items():
        rows = sorted(rows, key=lambda r: r.risk)
        xs = [r.risk for r in rows]
        ys = [100 * r.win_rate_a for r in rows]
        err_low = [100 * (r.win_rate_a - r.ci_low) for r in rows]
        err_high = [100 * (r.ci_high - r.win_rate_a) for r in rows]
        ax.errorbar(
            xs, ys, yerr=[err_low, err_high], marker="o", capsize=3,
            label=f"{a} vs {b} ({cost})",
        )
    ax.axhline(50, color="grey", linewidth=0.8, linestyle="--")
    ax.set_xlabel("risk level")
    ax.set_ylabel("% of games won by first strategy")
    ax.set_ylim(0, 100)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def default_matchups(games_per_cell: int = 200, master_seed: int = 0
                     ) -> list[ExperimentPlan]:
    """The standard scenario set: communication pairs at testing cost 200 and
    the testing pair at both costs."""
    tw, s = StrategyKind.TEAMWORKER, StrategyKind.SHAPER
    me, cf = StrategyKind.MONITOR_EVALUATOR, StrategyKind.COMPLETER_FINISHER
    mk = lambda pair, costs: ExperimentPlan(
        pair=pair, test_costs=costs, games_per_cell=games_per_cell,
        master_seed=master_seed,
    )
    return [
        mk((tw, s), (200,)),
        mk((me, cf), (200,)),
        mk((cf, s), (200,)),
        mk((cf, s), (50,)),
        mk((me, tw), (200,)),
    ]

"""Harness: Wilson interval, seed derivation, cell fairness, CSV output."""
import pytest
import statsmodels.stats.proportion as smp

from project_game.agents import StrategyKind
from project_game.errors import DomainError
from project_game.tournament import (
    CSV_HEADER,
    ExperimentPlan,
    cell_specs,
    default_matchups,
    emit_report,
    game_seed,
    play_game_spec,
    report_csv,
    run_cell,
    summarize_cell,
    wilson_interval,
)

S = StrategyKind.SHAPER
CF = StrategyKind.COMPLETER_FINISHER


class TestWilson:
    def test_zero_wins_low_is_zero(self):
        low, high = wilson_interval(0, 10)
        assert low == 0.0
        assert high < 0.35

    def test_all_wins_high_is_one(self):
        low, high = wilson_interval(10, 10)
        assert high == 1.0
        assert low > 0.65

    def test_reference_value_against_statsmodels(self):
        # independent oracle for 120/200 at 95%
        low, high = wilson_interval(120, 200, z=1.96)
        ref_low, ref_high = smp.proportion_confint(120, 200, alpha=0.05,
                                                   method="wilson")
        assert low == pytest.approx(ref_low, abs=5e-4)
        assert high == pytest.approx(ref_high, abs=5e-4)
        assert round(low, 3) == 0.531
        assert round(high, 3) == 0.665

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            wilson_interval(0, 0)
        with pytest.raises(DomainError):
            wilson_interval(5, 4)
        with pytest.raises(DomainError):
            wilson_interval(-1, 4)

    def test_contains_point_estimate(self):
        for wins, n in ((1, 7), (3, 9), (50, 60)):
            low, high = wilson_interval(wins, n)
            assert low <= wins / n <= high


class TestSeeding:
    def test_cell_independence(self):
        # seeds for one cell do not depend on which other cells exist
        s1 = game_seed(42, "shaper", "teamworker", 0.5, 200, 3)
        s2 = game_seed(42, "shaper", "teamworker", 0.5, 200, 3)
        assert s1 == s2
        assert s1 != game_seed(42, "shaper", "teamworker", 0.2, 200, 3)
        assert s1 != game_seed(42, "shaper", "teamworker", 0.5, 50, 3)
        assert s1 != game_seed(43, "shaper", "teamworker", 0.5, 200, 3)
        assert s1 != game_seed(42, "shaper", "teamworker", 0.5, 200, 4)

    def test_specs_split_sides_evenly(self):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=8, master_seed=1)
        specs = cell_specs(plan, 0.2, 200)
        assert sum(s.a_plays_red for s in specs) == 4
        assert [s.a_plays_red for s in specs[:4]] == [True] * 4

    def test_swap_requires_even(self):
        with pytest.raises(DomainError):
            ExperimentPlan(pair=(S, CF), games_per_cell=3)

    def test_bad_risk_rejected(self):
        with pytest.raises(DomainError):
            ExperimentPlan(pair=(S, CF), risks=(1.2,), games_per_cell=2)


class TestRunCell:
    @pytest.fixture(scope="class")
    def report(self):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=6, master_seed=5)
        return run_cell(plan, 0.0, 200)

    def test_counts_consistent(self, report):
        assert report.games == 6
        assert report.wins_a + report.wins_b + report.draws == 6
        assert report.ci_low <= report.win_rate_a <= report.ci_high

    def test_outcomes_deterministic(self):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=4, master_seed=5)
        a = run_cell(plan, 0.2, 200)
        b = run_cell(plan, 0.2, 200)
        assert a == b

    def test_invariants_checked_per_game(self):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=2, master_seed=5)
        specs = cell_specs(plan, 0.5, 200)
        for spec in specs:
            outcome = play_game_spec(spec)
            assert outcome.invariants.all_ok, outcome.invariants.problems

    def test_logs_written(self, tmp_path):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=2, master_seed=5)
        run_cell(plan, 0.0, 200, log_dir=str(tmp_path))
        files = sorted(tmp_path.glob("*.jsonl"))
        assert len(files) == 2


class TestEmitReport:
    def test_csv_shape_and_determinism(self, tmp_path):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=2, master_seed=5,
                              risks=(0.0, 0.5))
        reports = [run_cell(plan, r, 200) for r in plan.risks]
        text = report_csv(reports)
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3
        out = tmp_path / "report.csv"
        emit_report(reports, out)
        assert out.read_text() == text
        # rerun is byte-identical
        reports2 = [run_cell(plan, r, 200) for r in plan.risks]
        assert report_csv(reports2) == text

    def test_empty_reports_rejected(self, tmp_path):
        with pytest.raises(DomainError):
            emit_report([], tmp_path / "x.csv")

    def test_plot_svg(self, tmp_path):
        plan = ExperimentPlan(pair=(S, CF), games_per_cell=2, master_seed=5)
        reports = [run_cell(plan, 0.0, 200)]
        emit_report(reports, tmp_path / "r.csv", tmp_path / "r.svg")
        svg = (tmp_path / "r.svg").read_text()
        assert svg.lstrip().startswith("<?xml")
        assert "<svg" in svg


class TestDefaults:
    def test_default_matchups_cover_fig3(self):
        plans = default_matchups()
        described = {(p.pair[0].value, p.pair[1].value, p.test_costs) for p in plans}
        assert ("teamworker", "shaper", (200,)) in described
        assert ("monitor_evaluator", "completer_finisher", (200,)) in described
        assert ("completer_finisher", "shaper", (200,)) in described
        assert ("completer_finisher", "shaper", (50,)) in described
        assert ("monitor_evaluator", "teamworker", (200,)) in described

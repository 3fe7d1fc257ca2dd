"""Belief ingestion, merge semantics, and nearest_known."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from project_game.actions import (
    ActionResult,
    DISCOVER,
    DiscoverReading,
    GOAL_COMPLETED,
    NOT_A_GOAL,
    NO_PIECE_HERE,
    PICK_UP,
    PLACE,
    SHAM_WASTED,
)
from project_game.errors import CrossTeamMergeError, ForeignResultError
from project_game.knowledge import (
    Belief,
    FieldBelief,
    ingest_observation,
    merge,
    nearest_known,
    new_belief,
)
from project_game.model import GameConfig, GoalStatus, Position

CFG = GameConfig()


def mk_belief(owner=0, teammates=(0, 1, 2)):
    return new_belief(owner, CFG, teammates)


def discover_result(pid, pos, readings, t=100):
    return ActionResult(
        ok=True,
        kind=DISCOVER,
        player_id=pid,
        completed_at_ms=t,
        pos=pos,
        readings=tuple(readings),
    )


class TestIngest:
    def test_discover_goal_written(self):
        b = mk_belief()
        r = discover_result(
            0,
            Position(2, 3),
            [DiscoverReading(Position(2, 3), 4, GoalStatus.GOAL)],
        )
        ingest_observation(b, r, 100)
        assert b.fields[Position(2, 3)].goal_status is GoalStatus.GOAL
        assert b.fields[Position(2, 3)].last_seen_ms == 100
        assert b.fields[Position(2, 3)].distance_to_piece == 4

    def test_not_visible_reading_keeps_status_unknown(self):
        b = mk_belief()
        r = discover_result(
            0,
            Position(2, 8),
            [DiscoverReading(Position(2, 8), 1, GoalStatus.NOT_VISIBLE)],
        )
        ingest_observation(b, r, 100)
        assert b.fields[Position(2, 8)].goal_status is GoalStatus.UNKNOWN
        assert b.fields[Position(2, 8)].distance_to_piece == 1

    def test_place_sham_reveals_nothing(self):
        b = mk_belief()
        pos = Position(1, 2)
        res = ActionResult(
            ok=True, kind=PLACE, player_id=0, completed_at_ms=120, pos=pos,
            piece_id=7, outcome=SHAM_WASTED,
        )
        ingest_observation(b, res, 100)
        assert pos not in b.fields

    def test_place_outcomes_update_status(self):
        b = mk_belief()
        pos = Position(1, 2)
        res = ActionResult(
            ok=True, kind=PLACE, player_id=0, completed_at_ms=120, pos=pos,
            piece_id=7, outcome=GOAL_COMPLETED,
        )
        ingest_observation(b, res, 100)
        assert b.fields[pos].goal_status is GoalStatus.COMPLETED_GOAL
        res2 = ActionResult(
            ok=True, kind=PLACE, player_id=0, completed_at_ms=140, pos=pos,
            piece_id=8, outcome=NOT_A_GOAL,
        )
        ingest_observation(b, res2, 120)
        assert b.fields[pos].goal_status is GoalStatus.NO_GOAL

    def test_pickup_clears_distance(self):
        b = mk_belief()
        pos = Position(3, 7)
        ingest_observation(
            b,
            discover_result(0, pos, [DiscoverReading(pos, 0, GoalStatus.NOT_VISIBLE)]),
            50,
        )
        assert b.fields[pos].distance_to_piece == 0
        res = ActionResult(
            ok=True, kind=PICK_UP, player_id=0, completed_at_ms=90, pos=pos, piece_id=1
        )
        ingest_observation(b, res, 70)
        assert b.fields[pos].distance_to_piece is None
        assert b.fields[pos].last_seen_ms == 70

    def test_failed_pickup_also_clears(self):
        b = mk_belief()
        pos = Position(3, 7)
        ingest_observation(
            b,
            discover_result(0, pos, [DiscoverReading(pos, 0, GoalStatus.NOT_VISIBLE)]),
            50,
        )
        res = ActionResult(
            ok=False, kind=PICK_UP, player_id=0, completed_at_ms=90, pos=pos,
            reject=NO_PIECE_HERE,
        )
        ingest_observation(b, res, 70)
        assert b.fields[pos].distance_to_piece is None

    def test_foreign_result_rejected(self):
        b = mk_belief(owner=0)
        res = ActionResult(
            ok=True, kind=PICK_UP, player_id=1, completed_at_ms=90,
            pos=Position(0, 0), piece_id=1,
        )
        with pytest.raises(ForeignResultError):
            ingest_observation(b, res, 70)


class TestMerge:
    def test_idempotent_on_equal(self):
        a = mk_belief(0)
        a.fields[Position(1, 1)] = FieldBelief(100, 2, GoalStatus.GOAL)
        b = mk_belief(1)
        b.fields[Position(1, 1)] = FieldBelief(100, 2, GoalStatus.GOAL)
        merge(a, b)
        assert a.fields[Position(1, 1)].last_seen_ms == 100
        assert b.fields[Position(1, 1)].goal_status is GoalStatus.GOAL

    def test_newest_wins_both_sides(self):
        a = mk_belief(0)
        b = mk_belief(1)
        a.fields[Position(2, 2)] = FieldBelief(500, 3, GoalStatus.NO_GOAL)
        b.fields[Position(2, 2)] = FieldBelief(700, 1, GoalStatus.GOAL)
        merge(a, b)
        assert a.fields[Position(2, 2)].last_seen_ms == 700
        assert a.fields[Position(2, 2)].goal_status is GoalStatus.GOAL
        assert b.fields[Position(2, 2)].last_seen_ms == 700

    def test_union_of_keys(self):
        a = mk_belief(0)
        b = mk_belief(1)
        a.fields[Position(0, 1)] = FieldBelief(10)
        b.fields[Position(5, 9)] = FieldBelief(20)
        merge(a, b)
        assert set(a.fields) == {Position(0, 1), Position(5, 9)}
        assert set(b.fields) == {Position(0, 1), Position(5, 9)}

    def test_transferred_records_do_not_alias(self):
        a = mk_belief(0)
        b = mk_belief(1)
        a.fields[Position(0, 1)] = FieldBelief(10, 2)
        merge(a, b)
        b.fields[Position(0, 1)].distance_to_piece = 99
        assert a.fields[Position(0, 1)].distance_to_piece == 2

    def test_cross_team_rejected(self):
        a = new_belief(0, CFG, [0, 1, 2])
        b = new_belief(3, CFG, [3, 4, 5])
        with pytest.raises(CrossTeamMergeError):
            merge(a, b)

    @settings(max_examples=300, deadline=None)
    @given(data=st.data())
    def test_merge_properties_random(self, data):
        positions = [Position(x, y) for x in range(6) for y in range(18)]
        field_st = st.builds(
            FieldBelief,
            st.integers(min_value=0, max_value=10_000),
            st.one_of(st.none(), st.integers(min_value=0, max_value=12)),
            st.sampled_from(
                [GoalStatus.UNKNOWN, GoalStatus.GOAL, GoalStatus.NO_GOAL,
                 GoalStatus.COMPLETED_GOAL]
            ),
        )
        map_st = st.dictionaries(st.sampled_from(positions), field_st, max_size=20)
        a = mk_belief(0)
        b = mk_belief(1)
        a.fields = data.draw(map_st)
        b.fields = data.draw(map_st)
        before_a = {p: fb.last_seen_ms for p, fb in a.fields.items()}
        before_b = {p: fb.last_seen_ms for p, fb in b.fields.items()}
        keys = set(a.fields) | set(b.fields)
        merge(a, b)
        assert set(a.fields) == keys
        assert set(b.fields) == keys
        for p in keys:
            assert a.fields[p].last_seen_ms >= before_a.get(p, -1)
            assert b.fields[p].last_seen_ms >= before_b.get(p, -1)
            assert a.fields[p].last_seen_ms == b.fields[p].last_seen_ms or (
                before_a.get(p) == before_b.get(p)
            )
        # idempotence: a second merge changes nothing
        snap_a = {p: (fb.last_seen_ms, fb.distance_to_piece, fb.goal_status)
                  for p, fb in a.fields.items()}
        merge(a, b)
        assert snap_a == {
            p: (fb.last_seen_ms, fb.distance_to_piece, fb.goal_status)
            for p, fb in a.fields.items()
        }


class TestNearestKnown:
    def test_empty_belief_no_goal(self):
        b = mk_belief()
        assert (
            nearest_known(b, Position(0, 0), lambda p, fb: fb.goal_status is GoalStatus.GOAL)
            is None
        )

    def test_minimizes_distance(self):
        b = mk_belief()
        b.fields[Position(0, 2)] = FieldBelief(10, None, GoalStatus.GOAL)
        b.fields[Position(0, 5)] = FieldBelief(10, None, GoalStatus.GOAL)
        got = nearest_known(
            b, Position(0, 0), lambda p, fb: fb.goal_status is GoalStatus.GOAL
        )
        assert got == Position(0, 2)

    def test_tie_breaks_row_major(self):
        b = mk_belief()
        b.fields[Position(2, 0)] = FieldBelief(10, None, GoalStatus.GOAL)
        b.fields[Position(0, 2)] = FieldBelief(10, None, GoalStatus.GOAL)
        got = nearest_known(
            b, Position(0, 0), lambda p, fb: fb.goal_status is GoalStatus.GOAL
        )
        assert got == Position(2, 0)  # same distance, smaller row

    def test_unseen_fields_presented_as_unknown(self):
        b = mk_belief()
        got = nearest_known(
            b,
            Position(3, 8),
            lambda p, fb: fb.goal_status is GoalStatus.UNKNOWN,
        )
        assert got == Position(3, 8)


class TestSerialization:
    def test_wire_map_keys(self):
        b = mk_belief()
        b.fields[Position(2, 3)] = FieldBelief(7, 1, GoalStatus.GOAL)
        obj = b.to_json()
        assert obj == {
            "2,3": {"last_seen_ms": 7, "distance_to_piece": 1, "goal_status": "goal"}
        }

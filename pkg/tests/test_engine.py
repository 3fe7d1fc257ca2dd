"""Rules engine: init, action handling, costs, spawning, winner detection."""
import random

import pytest

from project_game.actions import (
    ACCEPTED,
    Discover,
    ExchangeInfo,
    GENUINE,
    GOAL_COMPLETED,
    HANDS_FULL,
    Move,
    NOT_A_GOAL,
    NOT_IN_GOAL_AREA,
    NOT_TEAMMATE,
    NO_PIECE_HELD,
    NO_PIECE_HERE,
    OCCUPIED,
    OFF_BOARD,
    OPPONENT_GOAL_AREA,
    PickUp,
    Place,
    REJECTED,
    SELF_EXCHANGE,
    SHAM_DESTROYED,
    SHAM_WASTED,
    Test,
    UNKNOWN_TARGET,
)
from project_game.engine import REASON_TIMEOUT, GameState, init_game
from project_game.errors import (
    ConfigError,
    GameFinishedError,
    NotReadyError,
    UnknownPlayerError,
)
from project_game.knowledge import FieldBelief
from project_game.model import (
    Area,
    Direction,
    GameConfig,
    GoalStatus,
    Piece,
    Position,
    TeamColor,
    area_of,
    manhattan,
)


def fresh(risk=0.0, seed=1, **kw):
    return init_game(GameConfig(risk_level=risk, seed=seed, **kw))


def put_piece(state: GameState, pos: Position, is_sham=False, pid=900):
    piece = Piece(pid, is_sham)
    state.pieces_on_board[pos] = piece
    return piece


def move_player(state: GameState, player_id: int, pos: Position):
    player = state.players[player_id]
    state._occupied.discard(player.pos)
    player.pos = pos
    state._occupied.add(pos)
    return player


class TestInitGame:
    def test_counts_match_config(self):
        state = fresh()
        assert len(state.players) == 6
        assert len(state.goal_fields[TeamColor.RED]) == 4
        assert len(state.goal_fields[TeamColor.BLUE]) == 4
        assert len(state.pieces_on_board) == 6
        assert state.clock_ms == 0
        assert state.next_spawn_at_ms == 300

    def test_zero_risk_spawns_no_shams(self):
        state = fresh(risk=0.0)
        assert all(not p.is_sham for p in state.pieces_on_board.values())

    def test_risk_one_spawns_only_shams(self):
        state = fresh(risk=1.0)
        assert all(p.is_sham for p in state.pieces_on_board.values())

    def test_placement_respects_areas(self):
        state = fresh(seed=77)
        for team in (TeamColor.RED, TeamColor.BLUE):
            for pos in state.goal_fields[team]:
                assert area_of(pos, state.cfg) is state.cfg.goal_area(team)
        for player in state.players:
            assert area_of(player.pos, state.cfg) is state.cfg.goal_area(player.team)
        for pos in state.pieces_on_board:
            assert area_of(pos, state.cfg) is Area.TASK_AREA

    def test_leaders_are_first_of_each_team(self):
        state = fresh()
        leaders = [p.player_id for p in state.players if p.is_leader]
        assert leaders == [0, 3]

    def test_distinct_start_positions(self):
        state = fresh(seed=5)
        positions = [p.pos for p in state.players]
        assert len(set(positions)) == len(positions)

    def test_same_seed_identical_init_events(self):
        a = fresh(seed=1234)
        b = fresh(seed=1234)
        assert a.event_log[0].record == b.event_log[0].record
        assert [e.record for e in a.event_log] == [e.record for e in b.event_log]

    def test_invalid_config_raises(self):
        with pytest.raises(ConfigError):
            GameConfig(board_height=7)


class TestSubmitGuards:
    def test_unknown_player(self):
        state = fresh()
        with pytest.raises(UnknownPlayerError):
            state.submit_action(99, Discover())

    def test_not_ready(self):
        state = fresh()
        state.submit_action(0, Discover())
        with pytest.raises(NotReadyError) as err:
            state.submit_action(0, Discover())
        assert err.value.remaining_ms == state.cfg.discovery_cost_ms

    def test_finished_game_rejects_actions(self):
        state = fresh()
        for goals in state.goal_fields.values():
            for g in goals.values():
                g.completed = True
        state.check_winner()
        with pytest.raises(GameFinishedError):
            state.submit_action(0, Discover())

    def test_cost_charged_on_reject(self):
        state = fresh(seed=3)
        player = move_player(state, 0, Position(3, 8))
        # a blue player on the team boundary: move into red area from blue side
        result = state.submit_action(0, PickUp())  # nothing here
        assert not result.ok
        assert player.ready_at_ms == state.cfg.pickup_cost_ms
        assert result.completed_at_ms == state.cfg.pickup_cost_ms


class TestMove:
    def test_ok_move_updates_position(self):
        state = fresh(seed=3)
        player = move_player(state, 0, Position(3, 8))
        result = state.submit_action(0, Move(Direction.NORTH))
        assert result.ok
        assert player.pos == Position(3, 7)
        assert result.pos == Position(3, 7)
        assert player.ready_at_ms == state.cfg.move_cost_ms

    def test_off_board_rejected(self):
        state = fresh(seed=3)
        move_player(state, 0, Position(0, 8))
        result = state.submit_action(0, Move(Direction.WEST))
        assert not result.ok and result.reject == OFF_BOARD

    def test_opponent_goal_area_rejected(self):
        state = fresh(seed=3)
        # blue player (id 3) at top task row tries to enter red goal area
        move_player(state, 3, Position(2, 6))
        result = state.submit_action(3, Move(Direction.NORTH))
        assert not result.ok and result.reject == OPPONENT_GOAL_AREA

    def test_occupied_rejected_and_charged(self):
        state = fresh(seed=3)
        mover = move_player(state, 0, Position(3, 8))
        move_player(state, 1, Position(3, 7))
        result = state.submit_action(0, Move(Direction.NORTH))
        assert not result.ok and result.reject == OCCUPIED
        assert mover.pos == Position(3, 8)
        assert mover.ready_at_ms == state.cfg.move_cost_ms


class TestDiscover:
    def test_distances_match_brute_force(self):
        # independent oracle: scan all pieces for each neighborhood field
        state = fresh(seed=11)
        state.pieces_on_board.clear()
        put_piece(state, Position(2, 9), pid=900)
        put_piece(state, Position(5, 6), pid=901)
        player = move_player(state, 0, Position(2, 7))
        result = state.submit_action(0, Discover())
        pieces = [Position(2, 9), Position(5, 6)]
        assert result.ok
        assert len(result.readings) == 9
        for reading in result.readings:
            expect = min(manhattan(reading.pos, pp) for pp in pieces)
            assert reading.distance == expect

    def test_single_piece_example(self):
        state = fresh(seed=11)
        state.pieces_on_board.clear()
        put_piece(state, Position(2, 9))
        move_player(state, 0, Position(2, 7))
        result = state.submit_action(0, Discover())
        by_pos = {r.pos: r for r in result.readings}
        assert by_pos[Position(2, 8)].distance == 1
        assert by_pos[Position(2, 6)].distance == 3

    def test_empty_board_reports_none(self):
        state = fresh(seed=11)
        state.pieces_on_board.clear()
        move_player(state, 0, Position(2, 7))
        result = state.submit_action(0, Discover())
        assert all(r.distance is None for r in result.readings)

    def test_goal_status_own_area_only(self):
        state = fresh(seed=11)
        goal_pos = next(iter(state.goal_fields[TeamColor.RED]))
        player = move_player(state, 0, goal_pos)
        result = state.submit_action(0, Discover())
        by_pos = {r.pos: r for r in result.readings}
        assert by_pos[goal_pos].goal_status is GoalStatus.GOAL
        for reading in result.readings:
            own = area_of(reading.pos, state.cfg) is Area.RED_GOAL_AREA
            if own:
                assert reading.goal_status in (
                    GoalStatus.GOAL, GoalStatus.NO_GOAL, GoalStatus.COMPLETED_GOAL
                )
            else:
                assert reading.goal_status is GoalStatus.NOT_VISIBLE

    def test_completed_goal_reported(self):
        state = fresh(seed=11)
        goal_pos = next(iter(state.goal_fields[TeamColor.RED]))
        state.goal_fields[TeamColor.RED][goal_pos].completed = True
        move_player(state, 0, goal_pos)
        result = state.submit_action(0, Discover())
        by_pos = {r.pos: r for r in result.readings}
        assert by_pos[goal_pos].goal_status is GoalStatus.COMPLETED_GOAL

    def test_forwarded_to_engine_belief(self):
        state = fresh(seed=11)
        move_player(state, 0, Position(2, 7))
        state.submit_action(0, Discover())
        assert Position(2, 7) in state.beliefs[0].fields


class TestPickUpTestPlace:
    def test_pickup_moves_piece_to_hand(self):
        state = fresh(seed=3)
        pos = Position(3, 8)
        piece = put_piece(state, pos)
        player = move_player(state, 0, pos)
        result = state.submit_action(0, PickUp())
        assert result.ok and result.piece_id == piece.id
        assert player.held_piece is piece
        assert not player.held_piece_tested
        assert pos not in state.pieces_on_board

    def test_pickup_hands_full(self):
        state = fresh(seed=3)
        pos = Position(3, 8)
        put_piece(state, pos)
        player = move_player(state, 0, pos)
        player.held_piece = Piece(55, False)
        result = state.submit_action(0, PickUp())
        assert not result.ok and result.reject == HANDS_FULL

    def test_pickup_empty_field(self):
        state = fresh(seed=3)
        move_player(state, 0, Position(3, 8))
        state.pieces_on_board.pop(Position(3, 8), None)
        result = state.submit_action(0, PickUp())
        assert not result.ok and result.reject == NO_PIECE_HERE

    def test_test_genuine_and_repeat(self):
        state = fresh(seed=3)
        player = state.players[0]
        player.held_piece = Piece(7, False)
        result = state.submit_action(0, Test())
        assert result.ok and result.outcome == GENUINE
        assert player.held_piece_tested
        state.clock_ms = player.ready_at_ms
        result2 = state.submit_action(0, Test())
        assert result2.outcome == GENUINE
        assert player.held_piece is not None

    def test_test_sham_destroys(self):
        state = fresh(seed=3)
        player = state.players[0]
        player.held_piece = Piece(7, True)
        result = state.submit_action(0, Test())
        assert result.ok and result.outcome == SHAM_DESTROYED
        assert player.held_piece is None
        assert not player.held_piece_tested

    def test_test_empty_hand(self):
        state = fresh(seed=3)
        result = state.submit_action(0, Test())
        assert not result.ok and result.reject == NO_PIECE_HELD

    def test_place_goal_completed(self):
        state = fresh(seed=3)
        goal_pos = next(iter(state.goal_fields[TeamColor.RED]))
        player = move_player(state, 0, goal_pos)
        player.held_piece = Piece(7, False)
        result = state.submit_action(0, Place())
        assert result.ok and result.outcome == GOAL_COMPLETED
        assert state.goal_fields[TeamColor.RED][goal_pos].completed
        assert player.held_piece is None

    def test_place_not_a_goal_consumes_piece(self):
        state = fresh(seed=3)
        non_goal = next(
            p for p in state.cfg.goal_area_positions(TeamColor.RED)
            if p not in state.goal_fields[TeamColor.RED]
            and p not in state._occupied
        )
        player = move_player(state, 0, non_goal)
        player.held_piece = Piece(7, False)
        result = state.submit_action(0, Place())
        assert result.ok and result.outcome == NOT_A_GOAL
        assert player.held_piece is None

    def test_place_on_completed_goal_is_not_a_goal(self):
        state = fresh(seed=3)
        goal_pos = next(iter(state.goal_fields[TeamColor.RED]))
        state.goal_fields[TeamColor.RED][goal_pos].completed = True
        player = move_player(state, 0, goal_pos)
        player.held_piece = Piece(7, False)
        result = state.submit_action(0, Place())
        assert result.outcome == NOT_A_GOAL

    def test_place_sham_wasted(self):
        state = fresh(seed=3)
        goal_pos = next(iter(state.goal_fields[TeamColor.RED]))
        player = move_player(state, 0, goal_pos)
        player.held_piece = Piece(7, True)
        result = state.submit_action(0, Place())
        assert result.ok and result.outcome == SHAM_WASTED
        assert not state.goal_fields[TeamColor.RED][goal_pos].completed
        assert player.held_piece is None

    def test_place_outside_goal_area(self):
        state = fresh(seed=3)
        player = move_player(state, 0, Position(3, 8))
        player.held_piece = Piece(7, False)
        result = state.submit_action(0, Place())
        assert not result.ok and result.reject == NOT_IN_GOAL_AREA
        assert player.held_piece is not None

    def test_place_empty_hand(self):
        state = fresh(seed=3)
        goal_pos = next(iter(state.goal_fields[TeamColor.RED]))
        move_player(state, 0, goal_pos)
        result = state.submit_action(0, Place())
        assert not result.ok and result.reject == NO_PIECE_HELD


class TestExchange:
    def test_accepted_merges_and_charges_both(self):
        state = fresh(seed=3)
        state.beliefs[1].fields[Position(0, 9)] = FieldBelief(50, 0)
        result = state.submit_action(0, ExchangeInfo(1))
        assert result.ok and result.outcome == ACCEPTED
        assert state.players[0].ready_at_ms == 300
        assert state.players[1].ready_at_ms == 300
        assert Position(0, 9) in state.beliefs[0].fields

    def test_busy_target_absorbs_charge(self):
        state = fresh(seed=3)
        state.players[1].ready_at_ms = 450
        state.submit_action(0, ExchangeInfo(1))
        assert state.players[1].ready_at_ms == 450
        state2 = fresh(seed=3)
        state2.players[1].ready_at_ms = 100
        state2.submit_action(0, ExchangeInfo(1))
        assert state2.players[1].ready_at_ms == 300

    def test_rejected_charges_initiator_only(self):
        state = fresh(seed=3)
        state.exchange_policies[2] = lambda from_id: False
        result = state.submit_action(1, ExchangeInfo(2))
        assert result.ok and result.outcome == REJECTED
        assert state.players[1].ready_at_ms == 300
        assert state.players[2].ready_at_ms == 0

    def test_leader_target_forces_accept(self):
        state = fresh(seed=3)
        state.exchange_policies[0] = lambda from_id: False  # leader would reject
        result = state.submit_action(1, ExchangeInfo(0))
        assert result.outcome == ACCEPTED

    def test_leader_initiator_forces_accept(self):
        state = fresh(seed=3)
        state.exchange_policies[1] = lambda from_id: False
        result = state.submit_action(0, ExchangeInfo(1))
        assert result.outcome == ACCEPTED

    def test_opponent_rejected(self):
        state = fresh(seed=3)
        result = state.submit_action(0, ExchangeInfo(4))
        assert not result.ok and result.reject == NOT_TEAMMATE

    def test_self_rejected(self):
        state = fresh(seed=3)
        result = state.submit_action(0, ExchangeInfo(0))
        assert not result.ok and result.reject == SELF_EXCHANGE

    def test_unknown_target(self):
        state = fresh(seed=3)
        result = state.submit_action(0, ExchangeInfo(42))
        assert not result.ok and result.reject == UNKNOWN_TARGET

    def test_exchange_completed_logged(self):
        state = fresh(seed=3)
        state.submit_action(0, ExchangeInfo(1))
        kinds = [e.record["type"] for e in state.event_log]
        assert "exchange_completed" in kinds


class TestAdvance:
    def test_spawn_cadence(self):
        state = fresh(seed=9)
        for p in state.players:
            p.ready_at_ms = 10_000
        events = state.advance()
        spawns = [e for e in events if e.record["type"] == "piece_spawn"]
        assert state.clock_ms == 300
        assert len(spawns) == 1
        assert spawns[0].t_ms == 300
        state.players[0].ready_at_ms = 10_000
        events = state.advance()
        assert state.clock_ms == 600

    def test_advance_to_processes_all_ticks(self):
        state = fresh(seed=9)
        events = state.advance_to(1000)
        spawns = [e for e in events if e.record["type"] == "piece_spawn"]
        assert [e.t_ms for e in spawns] == [300, 600, 900]
        assert state.next_spawn_at_ms == 1200

    def test_spawn_skipped_when_full(self):
        state = fresh(seed=9)
        for pos in state.cfg.task_area_positions():
            state.pieces_on_board.setdefault(pos, Piece(500 + pos.x + 10 * pos.y, False))
        before = dict(state.pieces_on_board)
        state.advance_to(300)
        assert state.pieces_on_board == before
        assert state.next_spawn_at_ms == 600

    def test_risk_one_spawns_sham(self):
        state = fresh(risk=1.0, seed=9)
        state.advance_to(300)
        newest = max(state.pieces_on_board.values(), key=lambda p: p.id)
        assert newest.is_sham

    def test_timeout_ends_game(self):
        state = fresh(seed=9, max_game_time_ms=1000)
        state.advance_to(5000)
        assert state.clock_ms == 1000
        assert not state.is_running()
        assert state.winner is None
        assert state.finish_reason == REASON_TIMEOUT

    def test_advance_finished_raises(self):
        state = fresh(seed=9, max_game_time_ms=1000)
        state.advance_to(5000)
        with pytest.raises(GameFinishedError):
            state.advance()

    def test_sham_fraction_statistics(self):
        # 10000 seeded spawns, counted independently from the event stream
        cfg = GameConfig(risk_level=0.5, seed=424242, max_game_time_ms=10**9)
        state = init_game(cfg)
        total = sham = 0
        while total < 10_000 and state.is_running():
            state.pieces_on_board.clear()
            events = state.advance_to(state.clock_ms + 3000)
            for e in events:
                if e.record["type"] == "piece_spawn":
                    total += 1
                    sham += int(e.record["is_sham"])
        assert total >= 10_000
        frac = sham / total
        se = (0.5 * 0.5 / total) ** 0.5
        assert abs(frac - 0.5) <= 3 * se


class TestCheckWinner:
    def test_all_goals_completed_wins(self):
        state = fresh(seed=3)
        for g in state.goal_fields[TeamColor.RED].values():
            g.completed = True
        assert state.check_winner() is TeamColor.RED
        assert state.winner is TeamColor.RED
        assert not state.is_running()

    def test_three_of_four_is_not_enough(self):
        state = fresh(seed=3)
        goals = list(state.goal_fields[TeamColor.RED].values())
        for g in goals[:3]:
            g.completed = True
        assert state.check_winner() is None
        assert state.is_running()

    def test_game_over_event_logged_once(self):
        state = fresh(seed=3)
        for g in state.goal_fields[TeamColor.BLUE].values():
            g.completed = True
        state.check_winner()
        state.check_winner()
        overs = [e for e in state.event_log if e.record["type"] == "game_over"]
        assert len(overs) == 1
        assert overs[0].record["winner"] == "blue"

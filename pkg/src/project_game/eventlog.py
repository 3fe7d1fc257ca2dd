"""Event-log serialization (JSONL), replay, and log validation.

One GameEvent per line, first line game_init. The JSON encoding here is the
persistence contract shared by replay, metrics, and the UI.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .actions import (
    ACCEPTED,
    COST_FIELD,
    EXCHANGE_INFO,
    ActionResult,
    GOAL_COMPLETED,
    MOVE,
    PICK_UP,
    PLACE,
    SHAM_DESTROYED,
    SHAM_WASTED,
    TEST,
)
from .engine import FINISHED, GameEvent, GameState, GoalField, PlayerState
from .errors import MalformedLogError
from .knowledge import ingest_observation, merge, new_belief
from .model import GameConfig, Piece, Position, TeamColor


def event_to_line(ev: GameEvent) -> str:
    return json.dumps(ev.to_json(), sort_keys=True, separators=(",", ":"))


def events_to_jsonl(events: Iterable[GameEvent]) -> str:
    return "".join(event_to_line(ev) + "\n" for ev in events)


def event_from_json(obj: dict) -> GameEvent:
    try:
        return GameEvent(
            seq=obj["seq"],
            t_ms=obj["t_ms"],
            player_id=obj["player_id"],
            record=obj["record"],
        )
    except (KeyError, TypeError) as exc:
        raise MalformedLogError(f"bad event object: {exc}") from exc


def write_event_log(path: str | Path, events: Iterable[GameEvent]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(events_to_jsonl(events))


def read_event_log(path: str | Path) -> list[GameEvent]:
    events = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedLogError(f"bad JSON line: {exc}") from exc
            events.append(event_from_json(obj))
    return events


def _check_order(events: list[GameEvent]) -> None:
    if not events:
        raise MalformedLogError("empty log")
    if events[0].record.get("type") != "game_init":
        raise MalformedLogError("log must begin with game_init")
    prev_seq = None
    prev_t = None
    for ev in events:
        if prev_seq is not None and ev.seq <= prev_seq:
            raise MalformedLogError(f"seq not strictly increasing at {ev.seq}")
        if prev_t is not None and ev.t_ms < prev_t:
            raise MalformedLogError(f"t_ms decreasing at seq {ev.seq}")
        prev_seq = ev.seq
        prev_t = ev.t_ms
    return None


def replay(events: list[GameEvent]) -> GameState:
    """Reconstruct the game state implied by a (possibly truncated) log.

    The returned state matches the live game's snapshot() at the last event;
    the PRNG stream position is not reconstructable and is reseeded fresh.
    """
    _check_order(events)
    init = events[0].record
    cfg = GameConfig.from_json(init["cfg"])
    state = GameState(cfg, random.Random(cfg.seed))
    state._next_seq = events[0].seq + 1

    for team in (TeamColor.RED, TeamColor.BLUE):
        for pos_obj in init["goal_positions"][team.value]:
            pos = Position.from_json(pos_obj)
            state.goal_fields[team][pos] = GoalField(pos, team)
    team_ids: dict[TeamColor, list[int]] = {TeamColor.RED: [], TeamColor.BLUE: []}
    for entry in init["start_positions"]:
        team = TeamColor(entry["team"])
        pos = Position.from_json(entry["pos"])
        player = PlayerState(
            player_id=entry["player_id"],
            team=team,
            pos=pos,
            is_leader=entry["is_leader"],
        )
        state.players.append(player)
        state._occupied.add(pos)
        team_ids[team].append(player.player_id)
    state.players.sort(key=lambda p: p.player_id)
    for team, ids in team_ids.items():
        for pid in ids:
            state.beliefs[pid] = new_belief(pid, cfg, ids)

    for ev in events[1:]:
        state._next_seq = ev.seq + 1
        record = ev.record
        rtype = record.get("type")
        state.clock_ms = ev.t_ms
        if rtype == "piece_spawn":
            pos = Position.from_json(record["pos"])
            piece = Piece(record["piece_id"], record["is_sham"])
            state.pieces_on_board[pos] = piece
            state._next_piece_id = max(state._next_piece_id, piece.id + 1)
        elif rtype == "action_taken":
            _apply_action_event(state, ev)
        elif rtype == "exchange_completed":
            merge(state.beliefs[record["a"]], state.beliefs[record["b"]])
        elif rtype == "game_over":
            state.phase = FINISHED
            state.winner = (
                TeamColor(record["winner"]) if record["winner"] else None
            )
            state.finish_reason = record["reason"]
        else:
            raise MalformedLogError(f"unknown record type {rtype!r} at seq {ev.seq}")

    interval = cfg.piece_spawn_interval_ms
    state.next_spawn_at_ms = (state.clock_ms // interval + 1) * interval
    return state


def _apply_action_event(state: GameState, ev: GameEvent) -> None:
    record = ev.record
    result = ActionResult.from_json(record["result"])
    try:
        actor = state.players[result.player_id]
    except IndexError as exc:
        raise MalformedLogError(f"unknown actor at seq {ev.seq}") from exc
    actor.ready_at_ms = result.completed_at_ms
    ingest_observation(state.beliefs[actor.player_id], result, result.completed_at_ms)
    if not result.ok:
        return
    if result.kind == MOVE:
        state._occupied.discard(actor.pos)
        actor.pos = result.pos
        state._occupied.add(actor.pos)
    elif result.kind == PICK_UP:
        piece = state.pieces_on_board.pop(result.pos, None)
        if piece is None or piece.id != result.piece_id:
            raise MalformedLogError(f"pickup of absent piece at seq {ev.seq}")
        actor.held_piece = piece
        actor.held_piece_tested = False
    elif result.kind == TEST:
        if result.outcome == SHAM_DESTROYED:
            actor.held_piece = None
            actor.held_piece_tested = False
        else:
            actor.held_piece_tested = True
    elif result.kind == PLACE:
        actor.held_piece = None
        actor.held_piece_tested = False
        if result.outcome == GOAL_COMPLETED:
            goal = state.goal_fields[actor.team].get(result.pos)
            if goal is None:
                raise MalformedLogError(f"completed non-goal at seq {ev.seq}")
            goal.completed = True
    elif result.kind == EXCHANGE_INFO and result.outcome == ACCEPTED:
        target = state.players[result.target_player_id]
        target.ready_at_ms = max(target.ready_at_ms, result.completed_at_ms)


@dataclass
class LogReport:
    """Invariant-check results for one game log."""

    pieces_spawned: int = 0
    shams_spawned: int = 0
    pieces_destroyed: int = 0
    pieces_consumed: int = 0
    pieces_on_board: int = 0
    pieces_in_hands: int = 0
    winner: str | None = None
    duration_ms: int = 0
    conservation_ok: bool = True
    cost_accounting_ok: bool = True
    winner_sound: bool = True
    monotone_ok: bool = True
    problems: list[str] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return (
            self.conservation_ok
            and self.cost_accounting_ok
            and self.winner_sound
            and self.monotone_ok
        )


def validate_log(events: list[GameEvent]) -> LogReport:
    """Check the engine invariants that are observable from a log alone:
    piece conservation, cost accounting, winner soundness, monotone clock."""
    report = LogReport()
    try:
        _check_order(events)
    except MalformedLogError as exc:
        report.monotone_ok = False
        report.problems.append(str(exc))
        return report

    cfg = GameConfig.from_json(events[0].record["cfg"])
    teams: dict[int, str] = {
        e["player_id"]: e["team"] for e in events[0].record["start_positions"]
    }
    ready: dict[int, int] = {pid: 0 for pid in teams}
    holding: dict[int, int | None] = {pid: None for pid in teams}
    sham_truth: dict[int, bool] = {}
    sham_reported: set[int] = set()
    goal_completions: list[tuple[int, str, dict]] = []  # piece_id, team, pos
    board: set[int] = set()

    for ev in events[1:]:
        record = ev.record
        rtype = record["type"]
        if rtype == "piece_spawn":
            report.pieces_spawned += 1
            report.shams_spawned += int(record["is_sham"])
            sham_truth[record["piece_id"]] = record["is_sham"]
            board.add(record["piece_id"])
        elif rtype == "action_taken":
            result = record["result"]
            pid = result["player_id"]
            kind = result["kind"]
            cost = getattr(cfg, COST_FIELD[kind])
            if result["completed_at_ms"] - ev.t_ms != cost:
                report.cost_accounting_ok = False
                report.problems.append(f"wrong charge at seq {ev.seq}")
            if ev.t_ms < ready.get(pid, 0):
                report.cost_accounting_ok = False
                report.problems.append(f"acted while blocked at seq {ev.seq}")
            ready[pid] = result["completed_at_ms"]
            payload = result.get("payload") or {}
            if result["ok"]:
                if kind == PICK_UP:
                    board.discard(payload["piece_id"])
                    holding[pid] = payload["piece_id"]
                elif kind == TEST:
                    if payload["outcome"] == SHAM_DESTROYED:
                        report.pieces_destroyed += 1
                        sham_reported.add(payload["piece_id"])
                        holding[pid] = None
                elif kind == PLACE:
                    report.pieces_consumed += 1
                    outcome = payload["outcome"]
                    if outcome == SHAM_WASTED:
                        sham_reported.add(payload["piece_id"])
                    elif outcome == GOAL_COMPLETED:
                        goal_completions.append(
                            (payload["piece_id"], teams[pid], result["pos"])
                        )
                    holding[pid] = None
                elif kind == EXCHANGE_INFO and payload["outcome"] == ACCEPTED:
                    tgt = payload["target_player_id"]
                    ready[tgt] = max(ready[tgt], ev.t_ms + cfg.exchange_cost_ms)
        elif rtype == "game_over":
            report.winner = record["winner"]
        report.duration_ms = ev.t_ms

    report.pieces_on_board = len(board)
    report.pieces_in_hands = sum(1 for held in holding.values() if held is not None)
    balance = (
        report.pieces_on_board
        + report.pieces_in_hands
        + report.pieces_destroyed
        + report.pieces_consumed
    )
    if balance != report.pieces_spawned:
        report.conservation_ok = False
        report.problems.append(
            f"conservation: spawned={report.pieces_spawned} accounted={balance}"
        )

    if report.winner is not None:
        completions = [gc for gc in goal_completions if gc[1] == report.winner]
        positions = {(gc[2]["x"], gc[2]["y"]) for gc in completions}
        clean = all(
            gc[0] not in sham_reported and not sham_truth.get(gc[0], False)
            for gc in completions
        )
        if (
            len(completions) != cfg.goals_per_team
            or len(positions) != cfg.goals_per_team
            or not clean
        ):
            report.winner_sound = False
            report.problems.append("winner soundness violated")
    return report

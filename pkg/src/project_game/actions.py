"""Player actions and their results.

These types are the shared vocabulary of the rules engine, the belief
module, the agents, and the wire protocol. JSON field names here are a
contract: the event log and the network messages both use them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import GameError
from .model import Direction, GoalStatus, Position


@dataclass(frozen=True)
class Move:
    direction: Direction


@dataclass(frozen=True)
class Discover:
    pass


@dataclass(frozen=True)
class PickUp:
    pass


@dataclass(frozen=True)
class Test:
    __test__ = False  # keep pytest from collecting the action class


@dataclass(frozen=True)
class Place:
    pass


@dataclass(frozen=True)
class ExchangeInfo:
    target_player_id: int


GameAction = Union[Move, Discover, PickUp, Test, Place, ExchangeInfo]

MOVE = "move"
DISCOVER = "discover"
PICK_UP = "pick_up"
TEST = "test"
PLACE = "place"
EXCHANGE_INFO = "exchange_info"

_KIND_BY_TYPE = {
    Move: MOVE,
    Discover: DISCOVER,
    PickUp: PICK_UP,
    Test: TEST,
    Place: PLACE,
    ExchangeInfo: EXCHANGE_INFO,
}

# Each action variant maps to exactly one cost field of GameConfig.
COST_FIELD = {
    MOVE: "move_cost_ms",
    DISCOVER: "discovery_cost_ms",
    PICK_UP: "pickup_cost_ms",
    TEST: "test_cost_ms",
    PLACE: "place_cost_ms",
    EXCHANGE_INFO: "exchange_cost_ms",
}

# Test outcomes
GENUINE = "genuine"
SHAM_DESTROYED = "sham_destroyed"
# Place outcomes
GOAL_COMPLETED = "goal_completed"
NOT_A_GOAL = "not_a_goal"
SHAM_WASTED = "sham_wasted"
# ExchangeInfo outcomes
ACCEPTED = "accepted"
REJECTED = "rejected"

# Reject reasons (carried in the result, never raised)
OFF_BOARD = "off_board"
OPPONENT_GOAL_AREA = "opponent_goal_area"
OCCUPIED = "occupied"
HANDS_FULL = "hands_full"
NO_PIECE_HERE = "no_piece_here"
NO_PIECE_HELD = "no_piece_held"
NOT_IN_GOAL_AREA = "not_in_goal_area"
NOT_TEAMMATE = "not_teammate"
SELF_EXCHANGE = "self_exchange"
UNKNOWN_TARGET = "unknown_target"


def action_kind(action: GameAction) -> str:
    return _KIND_BY_TYPE[type(action)]


def action_to_json(action: GameAction) -> dict:
    if isinstance(action, Move):
        return {"type": MOVE, "direction": action.direction.value}
    if isinstance(action, ExchangeInfo):
        return {"type": EXCHANGE_INFO, "target_player_id": action.target_player_id}
    return {"type": action_kind(action)}


def action_from_json(obj: dict) -> GameAction:
    kind = obj.get("type")
    if kind == MOVE:
        return Move(Direction(obj["direction"]))
    if kind == DISCOVER:
        return Discover()
    if kind == PICK_UP:
        return PickUp()
    if kind == TEST:
        return Test()
    if kind == PLACE:
        return Place()
    if kind == EXCHANGE_INFO:
        return ExchangeInfo(int(obj["target_player_id"]))
    raise GameError(f"unknown action type: {kind!r}")


class DiscoverReading(NamedTuple):
    """One field of a 3x3 discovery sweep.

    distance is the manhattan distance from this field to the nearest piece
    on the board, or None when the board holds no pieces. goal_status is
    NOT_VISIBLE for every field outside the observer's own goal area.
    """

    pos: Position
    distance: int | None
    goal_status: GoalStatus

    def to_json(self) -> dict:
        return {
            "pos": self.pos.to_json(),
            "distance": self.distance,
            "goal_status": self.goal_status.value,
        }

    @staticmethod
    def from_json(obj: dict) -> "DiscoverReading":
        return DiscoverReading(
            Position.from_json(obj["pos"]),
            obj["distance"],
            GoalStatus(obj["goal_status"]),
        )


@dataclass(frozen=True)
class ActionResult:
    """Outcome of one submitted action.

    completed_at_ms is the submission clock plus the charged cost; the cost
    is charged whether or not the action succeeded. pos is the actor's
    position after the action (the new field for a successful move).
    """

    ok: bool
    kind: str
    player_id: int
    completed_at_ms: int
    pos: Position
    reject: str | None = None
    readings: tuple[DiscoverReading, ...] | None = None
    piece_id: int | None = None
    outcome: str | None = None
    target_player_id: int | None = None

    def to_json(self) -> dict:
        payload: dict | None = None
        if self.ok:
            if self.kind == MOVE:
                payload = {"new_pos": self.pos.to_json()}
            elif self.kind == DISCOVER:
                payload = {"readings": [r.to_json() for r in self.readings or ()]}
            elif self.kind == PICK_UP:
                payload = {"piece_id": self.piece_id}
            elif self.kind == TEST:
                payload = {"outcome": self.outcome, "piece_id": self.piece_id}
            elif self.kind == PLACE:
                payload = {"outcome": self.outcome, "piece_id": self.piece_id}
            elif self.kind == EXCHANGE_INFO:
                payload = {
                    "outcome": self.outcome,
                    "target_player_id": self.target_player_id,
                }
        return {
            "ok": self.ok,
            "kind": self.kind,
            "player_id": self.player_id,
            "completed_at_ms": self.completed_at_ms,
            "pos": self.pos.to_json(),
            "payload": payload,
            "reject": self.reject,
        }

    @staticmethod
    def from_json(obj: dict) -> "ActionResult":
        kind = obj["kind"]
        payload = obj.get("payload") or {}
        readings = None
        if kind == DISCOVER and obj["ok"]:
            readings = tuple(
                DiscoverReading.from_json(r) for r in payload.get("readings", [])
            )
        return ActionResult(
            ok=obj["ok"],
            kind=kind,
            player_id=obj["player_id"],
            completed_at_ms=obj["completed_at_ms"],
            pos=Position.from_json(obj["pos"]),
            reject=obj.get("reject"),
            readings=readings,
            piece_id=payload.get("piece_id"),
            outcome=payload.get("outcome"),
            target_player_id=payload.get("target_player_id"),
        )

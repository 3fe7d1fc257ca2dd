"""Per-player fog-of-war beliefs and the merge used by information exchange.

A Belief holds an entry only for fields the owner has observed directly or
received through an exchange. Exchanges merge full beliefs both ways with
newest-timestamp-wins semantics.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .actions import (
    ActionResult,
    DISCOVER,
    GOAL_COMPLETED,
    NOT_A_GOAL,
    NO_PIECE_HERE,
    PICK_UP,
    PLACE,
    SHAM_WASTED,
)
from .errors import CrossTeamMergeError, ForeignResultError
from .model import GameConfig, GoalStatus, Position, manhattan


@dataclass
class FieldBelief:
    last_seen_ms: int
    distance_to_piece: int | None = None
    goal_status: GoalStatus = GoalStatus.UNKNOWN

    def copy(self) -> "FieldBelief":
        return FieldBelief(self.last_seen_ms, self.distance_to_piece, self.goal_status)

    def to_json(self) -> dict:
        return {
            "last_seen_ms": self.last_seen_ms,
            "distance_to_piece": self.distance_to_piece,
            "goal_status": self.goal_status.value,
        }


# Placeholder handed to nearest_known predicates for never-observed fields.
# Shared and read-only by convention.
UNSEEN = FieldBelief(last_seen_ms=-1)


@dataclass
class Belief:
    owner: int
    cfg: GameConfig
    fields: dict[Position, FieldBelief]
    known_teammates: list[int]

    def at(self, pos: Position) -> FieldBelief:
        return self.fields.get(pos, UNSEEN)

    def to_json(self) -> dict:
        return {
            f"{pos.x},{pos.y}": fb.to_json() for pos, fb in sorted(self.fields.items())
        }


def belief_from_json(owner: int, cfg: GameConfig, obj: dict,
                     known_teammates: list[int] | None = None) -> Belief:
    fields: dict[Position, FieldBelief] = {}
    for key, fb in obj.items():
        x, y = key.split(",")
        fields[Position(int(x), int(y))] = FieldBelief(
            last_seen_ms=fb["last_seen_ms"],
            distance_to_piece=fb["distance_to_piece"],
            goal_status=GoalStatus(fb["goal_status"]),
        )
    return Belief(owner, cfg, fields, list(known_teammates or []))


def new_belief(owner: int, cfg: GameConfig, teammates: Iterable[int]) -> Belief:
    return Belief(owner, cfg, {}, sorted(teammates))


def ingest_observation(belief: Belief, result: ActionResult, t: int) -> Belief:
    """Fold one of the owner's action results into the belief.

    Discover writes distances for all readings and goal status for visible
    (own-goal-area) readings. Place outcomes settle the target field's goal
    status, except a sham waste which reveals nothing. Pick-up attempts clear
    the distance estimate for the current field, whether or not a piece was
    actually there.
    """
    if result.player_id != belief.owner:
        raise ForeignResultError(
            f"result for player {result.player_id} offered to belief of {belief.owner}"
        )
    if result.kind == DISCOVER and result.ok:
        for reading in result.readings or ():
            fb = belief.fields.get(reading.pos)
            if fb is None:
                fb = FieldBelief(t)
                belief.fields[reading.pos] = fb
            fb.last_seen_ms = t
            fb.distance_to_piece = reading.distance
            if reading.goal_status is not GoalStatus.NOT_VISIBLE:
                fb.goal_status = reading.goal_status
    elif result.kind == PICK_UP and (result.ok or result.reject == NO_PIECE_HERE):
        fb = belief.fields.get(result.pos)
        if fb is None:
            fb = FieldBelief(t)
            belief.fields[result.pos] = fb
        fb.last_seen_ms = t
        fb.distance_to_piece = None
    elif result.kind == PLACE and result.ok and result.outcome != SHAM_WASTED:
        fb = belief.fields.get(result.pos)
        if fb is None:
            fb = FieldBelief(t)
            belief.fields[result.pos] = fb
        fb.last_seen_ms = t
        if result.outcome == GOAL_COMPLETED:
            fb.goal_status = GoalStatus.COMPLETED_GOAL
        elif result.outcome == NOT_A_GOAL:
            fb.goal_status = GoalStatus.NO_GOAL
    return belief


def merge(a: Belief, b: Belief) -> tuple[Belief, Belief]:
    """Mutually merge two teammates' beliefs in place.

    For every field known to either side, both keep the record with the
    larger last_seen_ms; on a timestamp tie each side keeps its own. Records
    are copied when they cross sides, so the beliefs never alias.
    """
    if b.owner not in a.known_teammates or a.owner not in b.known_teammates:
        raise CrossTeamMergeError(
            f"players {a.owner} and {b.owner} are not on the same team"
        )
    for pos in set(a.fields) | set(b.fields):
        fa = a.fields.get(pos)
        fb = b.fields.get(pos)
        if fa is None:
            a.fields[pos] = fb.copy()
        elif fb is None:
            b.fields[pos] = fa.copy()
        elif fb.last_seen_ms > fa.last_seen_ms:
            a.fields[pos] = fb.copy()
        elif fa.last_seen_ms > fb.last_seen_ms:
            b.fields[pos] = fa.copy()
        # equal timestamps: both keep their own record
    teammates = sorted(set(a.known_teammates) | set(b.known_teammates))
    a.known_teammates = list(teammates)
    b.known_teammates = list(teammates)
    return a, b


def nearest_known(
    belief: Belief,
    from_pos: Position,
    predicate: Callable[[Position, FieldBelief], bool],
    candidates: Iterable[Position] | None = None,
) -> Position | None:
    """Closest position (manhattan, ties row-major) whose belief satisfies
    the predicate.

    Never-observed candidates are presented to the predicate as UNSEEN, so
    predicates over goal_status=UNKNOWN work for unexplored fields too.
    candidates must be in row-major order for the tie rule; it defaults to
    the whole board.
    """
    if candidates is None:
        candidates = belief.cfg.all_positions()
    best: Position | None = None
    best_d = -1
    fields = belief.fields
    for pos in candidates:
        fb = fields.get(pos)
        if fb is None:
            fb = UNSEEN
        if predicate(pos, fb):
            d = manhattan(pos, from_pos)
            if best is None or d < best_d:
                best = pos
                best_d = d
    return best

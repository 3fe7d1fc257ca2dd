"""Pure domain types and board geometry shared by every other module.

Coordinate convention: x is the column, y is the row, origin at the top-left.
The red goal area occupies the top rows, the task area the middle band, and
the blue goal area the bottom rows.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import NamedTuple

from .errors import ConfigError, GeometryError


class Position(NamedTuple):
    x: int
    y: int

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y}

    @staticmethod
    def from_json(obj: dict) -> "Position":
        return Position(int(obj["x"]), int(obj["y"]))


class TeamColor(Enum):
    RED = "red"
    BLUE = "blue"

    def opponent(self) -> "TeamColor":
        return TeamColor.BLUE if self is TeamColor.RED else TeamColor.RED


class Area(Enum):
    RED_GOAL_AREA = "red_goal_area"
    TASK_AREA = "task_area"
    BLUE_GOAL_AREA = "blue_goal_area"


class GoalStatus(Enum):
    """What is known about a field's goal role.

    Beliefs store UNKNOWN/GOAL/NO_GOAL/COMPLETED_GOAL; discovery readings for
    fields outside the observer's own goal area carry NOT_VISIBLE instead.
    """

    UNKNOWN = "unknown"
    GOAL = "goal"
    NO_GOAL = "no_goal"
    COMPLETED_GOAL = "completed_goal"
    NOT_VISIBLE = "not_visible"


class Direction(Enum):
    """Orthogonal moves; enumeration order is the tie-break order everywhere."""

    NORTH = "north"
    SOUTH = "south"
    EAST = "east"
    WEST = "west"

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]


_DELTAS = {
    Direction.NORTH: (0, -1),
    Direction.SOUTH: (0, 1),
    Direction.EAST: (1, 0),
    Direction.WEST: (-1, 0),
}


@dataclass(frozen=True)
class Piece:
    """A spawned resource. is_sham is hidden truth, revealed only through
    Test and Place outcomes."""

    id: int
    is_sham: bool


@dataclass(frozen=True)
class GameConfig:
    board_width: int = 6
    board_height: int = 18
    task_area_height: int = 6
    goals_per_team: int = 4
    players_per_team: int = 3
    risk_level: float = 0.0
    move_cost_ms: int = 20
    discovery_cost_ms: int = 100
    pickup_cost_ms: int = 20
    place_cost_ms: int = 20
    test_cost_ms: int = 200
    exchange_cost_ms: int = 300
    initial_pieces: int = 6
    piece_spawn_interval_ms: int = 300
    max_game_time_ms: int = 600_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.board_width < 1 or self.board_height < 1:
            raise ConfigError("board dimensions must be positive")
        goal_rows = self.board_height - self.task_area_height
        if goal_rows <= 0 or goal_rows % 2 != 0:
            raise ConfigError(
                "board_height - task_area_height must be positive and even"
            )
        gh = goal_rows // 2
        if not (1 <= self.goals_per_team <= self.board_width * gh):
            raise ConfigError("goals_per_team must fit inside one goal area")
        if not (1 <= self.players_per_team <= self.board_width * gh):
            raise ConfigError("players_per_team must fit inside one goal area")
        if not (0 <= self.initial_pieces <= self.board_width * self.task_area_height):
            raise ConfigError("initial_pieces must fit inside the task area")
        if not 0.0 <= self.risk_level <= 1.0:
            raise ConfigError("risk_level must be in [0, 1]")
        for name in (
            "move_cost_ms",
            "discovery_cost_ms",
            "pickup_cost_ms",
            "place_cost_ms",
            "test_cost_ms",
            "exchange_cost_ms",
        ):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if self.piece_spawn_interval_ms < 1:
            raise ConfigError("piece_spawn_interval_ms must be positive")
        if self.max_game_time_ms < 1:
            raise ConfigError("max_game_time_ms must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @property
    def goal_area_height(self) -> int:
        return (self.board_height - self.task_area_height) // 2

    def goal_rows(self, team: TeamColor) -> range:
        gh = self.goal_area_height
        if team is TeamColor.RED:
            return range(0, gh)
        return range(self.board_height - gh, self.board_height)

    def goal_area(self, team: TeamColor) -> Area:
        return Area.RED_GOAL_AREA if team is TeamColor.RED else Area.BLUE_GOAL_AREA

    def goal_area_positions(self, team: TeamColor) -> list[Position]:
        """Goal-area fields of one team in row-major order."""
        return [
            Position(x, y) for y in self.goal_rows(team) for x in range(self.board_width)
        ]

    def task_area_positions(self) -> list[Position]:
        gh = self.goal_area_height
        return [
            Position(x, y)
            for y in range(gh, gh + self.task_area_height)
            for x in range(self.board_width)
        ]

    def all_positions(self) -> list[Position]:
        return [
            Position(x, y)
            for y in range(self.board_height)
            for x in range(self.board_width)
        ]

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @staticmethod
    def from_json(obj: dict) -> "GameConfig":
        known = {f.name for f in fields(GameConfig)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return GameConfig(**obj)


def load_config(path: str | Path) -> GameConfig:
    """Load a GameConfig from a JSON file; unknown keys are rejected."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must contain one JSON object")
    return GameConfig.from_json(data)


def on_board(pos: Position, cfg: GameConfig) -> bool:
    return 0 <= pos.x < cfg.board_width and 0 <= pos.y < cfg.board_height


def area_of(pos: Position, cfg: GameConfig) -> Area:
    """Band containing pos: red rows on top, task band, blue rows below."""
    if not on_board(pos, cfg):
        raise GeometryError(f"position {pos} is off the board")
    gh = cfg.goal_area_height
    if pos.y < gh:
        return Area.RED_GOAL_AREA
    if pos.y < gh + cfg.task_area_height:
        return Area.TASK_AREA
    return Area.BLUE_GOAL_AREA


def manhattan(a: Position, b: Position) -> int:
    return abs(a.x - b.x) + abs(a.y - b.y)


def neighborhood(pos: Position, cfg: GameConfig) -> list[Position]:
    """On-board positions of the 3x3 square centered at pos, row-major."""
    if not on_board(pos, cfg):
        raise GeometryError(f"position {pos} is off the board")
    out = []
    for dy in (-1, 0, 1):
        y = pos.y + dy
        if not 0 <= y < cfg.board_height:
            continue
        for dx in (-1, 0, 1):
            x = pos.x + dx
            if 0 <= x < cfg.board_width:
                out.append(Position(x, y))
    return out


def step(pos: Position, direction: Direction) -> Position:
    dx, dy = direction.delta
    return Position(pos.x + dx, pos.y + dy)

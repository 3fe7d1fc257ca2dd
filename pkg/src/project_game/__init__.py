"""Project Game: authoritative simulator, agents, server, and experiment
tooling for a two-team fog-of-war board game of project work."""

from .model import (
    Area,
    Direction,
    GameConfig,
    GoalStatus,
    Piece,
    Position,
    TeamColor,
    area_of,
    load_config,
    manhattan,
    neighborhood,
)
from .engine import GameState, init_game
from .agents import StrategyKind, parse_strategy
from .runner import GameSetup, run_game

__all__ = [
    "Area",
    "Direction",
    "GameConfig",
    "GameSetup",
    "GameState",
    "GoalStatus",
    "Piece",
    "Position",
    "StrategyKind",
    "TeamColor",
    "area_of",
    "init_game",
    "load_config",
    "manhattan",
    "neighborhood",
    "parse_strategy",
    "run_game",
]

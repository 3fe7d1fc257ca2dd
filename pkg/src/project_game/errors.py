"""Exception types shared across the package."""
from __future__ import annotations


class GameError(Exception):
    """Base class for all game-related errors."""


class GeometryError(GameError):
    """Position is off the board or otherwise geometrically invalid."""


class ConfigError(GameError):
    """Game configuration violates an invariant."""


class NotReadyError(GameError):
    """Player tried to act before its ready time."""

    def __init__(self, remaining_ms: int):
        super().__init__(f"player blocked for another {remaining_ms}ms")
        self.remaining_ms = remaining_ms


class GameFinishedError(GameError):
    """Action or advance attempted on a finished game."""


class UnknownPlayerError(GameError):
    """Referenced player id does not exist in this game."""


class ForeignResultError(GameError):
    """Result was offered to a belief or agent that does not own it."""


class CrossTeamMergeError(GameError):
    """Belief merge attempted between players of different teams."""


class MalformedLogError(GameError):
    """Event log violates the log format contract."""


class DomainError(GameError):
    """Numeric argument outside the function's domain."""

"""Per-player behavioral profiles computed from event logs.

Profiles quantify four action-preference axes: delivered quality, risk
acceptance, willingness to cooperate, and delivery pace. They are pure
functions of the log, so recomputation is byte-stable.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .actions import (
    ACCEPTED,
    DISCOVER,
    EXCHANGE_INFO,
    GENUINE,
    GOAL_COMPLETED,
    PICK_UP,
    PLACE,
    TEST,
)
from .engine import GameEvent
from .errors import MalformedLogError, UnknownPlayerError


@dataclass
class PlayerCounters:
    """Raw per-player tallies from one or more game logs."""

    actions_total: int = 0
    pickups_ok: int = 0
    tests_ok: int = 0
    places_ok: int = 0
    untested_places: int = 0
    exchanges_initiated: int = 0
    exchanges_accepted: int = 0
    discoveries: int = 0
    goals_validated: int = 0
    duration_ms: int = 0

    def add(self, other: "PlayerCounters") -> "PlayerCounters":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self


@dataclass(frozen=True)
class PlayerProfile:
    player_id: int
    actions_total: int
    tests_per_pickup: float
    untested_delivery_rate: float
    exchanges_initiated_per_min: float
    exchanges_accepted_per_min: float
    discoveries_per_min: float
    goals_validated: int
    deliveries_attempted: int
    quality: float
    risk_acceptance: float
    cooperation: float
    pace: float

    def axes(self, pace_norm: float) -> tuple[float, float, float, float]:
        return (self.quality, self.risk_acceptance, self.cooperation, pace_norm)


def fold_counters(events: Sequence[GameEvent]) -> dict[int, PlayerCounters]:
    """Tally every player's action counts from one game log."""
    if not events or events[0].record.get("type") != "game_init":
        raise MalformedLogError("log must begin with game_init")
    players = [e["player_id"] for e in events[0].record["start_positions"]]
    counters = {pid: PlayerCounters() for pid in players}
    tested: dict[int, bool] = {pid: False for pid in players}
    duration = 0
    prev_seq = None
    for ev in events:
        if prev_seq is not None and ev.seq <= prev_seq:
            raise MalformedLogError(f"seq not strictly increasing at {ev.seq}")
        prev_seq = ev.seq
        duration = ev.t_ms
        record = ev.record
        if record["type"] != "action_taken":
            continue
        result = record["result"]
        pid = result["player_id"]
        c = counters[pid]
        c.actions_total += 1
        kind = result["kind"]
        payload = result.get("payload") or {}
        if kind == EXCHANGE_INFO:
            c.exchanges_initiated += 1
            if result["ok"] and payload.get("outcome") == ACCEPTED:
                c.exchanges_accepted += 1
        if not result["ok"]:
            continue
        if kind == PICK_UP:
            c.pickups_ok += 1
            tested[pid] = False
        elif kind == TEST:
            c.tests_ok += 1
            tested[pid] = payload.get("outcome") == GENUINE
        elif kind == PLACE:
            c.places_ok += 1
            if not tested[pid]:
                c.untested_places += 1
            if payload.get("outcome") == GOAL_COMPLETED:
                c.goals_validated += 1
            tested[pid] = False
        elif kind == DISCOVER:
            c.discoveries += 1
    for c in counters.values():
        c.duration_ms = duration
    return counters


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def profile_from_counters(player_id: int, c: PlayerCounters) -> PlayerProfile:
    minutes = c.duration_ms / 60_000
    per_min = lambda n: n / minutes if minutes > 0 else 0.0
    untested_rate = _ratio(c.untested_places, c.places_ok)
    exch_rate = per_min(c.exchanges_initiated)
    return PlayerProfile(
        player_id=player_id,
        actions_total=c.actions_total,
        tests_per_pickup=_ratio(c.tests_ok, c.pickups_ok),
        untested_delivery_rate=untested_rate,
        exchanges_initiated_per_min=exch_rate,
        exchanges_accepted_per_min=per_min(c.exchanges_accepted),
        discoveries_per_min=per_min(c.discoveries),
        goals_validated=c.goals_validated,
        deliveries_attempted=c.places_ok,
        quality=1.0 - untested_rate,
        risk_acceptance=untested_rate,
        cooperation=exch_rate / (1.0 + exch_rate),
        pace=per_min(c.places_ok),
    )


def compute_profile(events: Sequence[GameEvent], player_id: int) -> PlayerProfile:
    counters = fold_counters(events)
    if player_id not in counters:
        raise UnknownPlayerError(f"player {player_id} not in this game")
    return profile_from_counters(player_id, counters[player_id])


def compute_profiles(events: Sequence[GameEvent]) -> list[PlayerProfile]:
    counters = fold_counters(events)
    return [profile_from_counters(pid, c) for pid, c in sorted(counters.items())]


def aggregate_profile(
    counter_sets: Iterable[PlayerCounters], player_id: int = -1
) -> PlayerProfile:
    """Pool raw counts across games/players into one mean profile.

    Pooling keeps ratio semantics exact (sum of numerators over sum of
    denominators), unlike averaging per-game ratios with empty denominators.
    """
    total = PlayerCounters()
    for c in counter_sets:
        total.add(c)
    return profile_from_counters(player_id, total)


def profile_distance(
    a: PlayerProfile,
    b: PlayerProfile,
    pace_bounds: tuple[float, float] | None = None,
) -> float:
    """Euclidean distance over the four axis scores.

    Pace is min-max normalized over the compared set; by default that set is
    the pair itself, so callers comparing many profiles should pass the
    set-wide bounds.
    """
    if pace_bounds is None:
        pace_bounds = (min(a.pace, b.pace), max(a.pace, b.pace))
    low, high = pace_bounds
    span = high - low

    def norm(p: float) -> float:
        return (p - low) / span if span > 0 else 0.0

    va = a.axes(norm(a.pace))
    vb = b.axes(norm(b.pace))
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(va, vb)))


PROFILE_COLUMNS = [f.name for f in fields(PlayerProfile)]


def profiles_to_csv(profiles: Sequence[PlayerProfile], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PROFILE_COLUMNS)
        for p in profiles:
            writer.writerow([getattr(p, col) for col in PROFILE_COLUMNS])

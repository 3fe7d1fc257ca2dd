"""The four team-role strategies as deterministic-given-RNG policies.

The base behavior gathers pieces and delivers them to own goal fields.
CompleterFinisher adds testing straight after pickup; Teamworker adds an
information exchange after newly discovering a goal field; MonitorEvaluator
adds testing plus an exchange after validating a goal (a config switch moves
its trigger to discovery instead, mirroring Teamworker).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .actions import (
    ACCEPTED,
    ActionResult,
    DISCOVER,
    Discover,
    DiscoverReading,
    ExchangeInfo,
    GOAL_COMPLETED,
    GameAction,
    Move,
    PLACE,
    PickUp,
    Place,
    Test,
)
from .engine import PlayerState
from .errors import ForeignResultError
from .knowledge import Belief, ingest_observation, nearest_known
from .model import (
    Direction,
    GoalStatus,
    Position,
    TeamColor,
    manhattan,
    on_board,
    step,
)


class StrategyKind(Enum):
    SHAPER = "shaper"
    COMPLETER_FINISHER = "completer_finisher"
    TEAMWORKER = "teamworker"
    MONITOR_EVALUATOR = "monitor_evaluator"


_TESTERS = frozenset((StrategyKind.COMPLETER_FINISHER, StrategyKind.MONITOR_EVALUATOR))
_EXCHANGERS = frozenset((StrategyKind.TEAMWORKER, StrategyKind.MONITOR_EVALUATOR))

_ALIASES = {
    "s": StrategyKind.SHAPER,
    "cf": StrategyKind.COMPLETER_FINISHER,
    "tw": StrategyKind.TEAMWORKER,
    "me": StrategyKind.MONITOR_EVALUATOR,
}

# How long a piece sighting stays trustworthy (in spawn intervals), and how
# far a stale sighting is still worth walking to (in discovery-cost moves).
FRESH_WINDOW_INTERVALS = 1
STALE_RANGE_DISCOVERIES = 1
# How many steps to walk along a sensed distance gradient before re-sensing.
GRADIENT_EXTRAPOLATION_CAP = 5
# Drought scouting: whether idle players drift to unexplored own-goal fields,
# whether they re-verify aging goal records, and how many of the nearest
# candidate cells to randomize over (fans teammates out).
SCOUT_ENABLED = True
SCOUT_VERIFY_GOALS = False
SCOUT_POOL = 3
# How many consecutive occupied-rejections a walk tolerates before spending a
# discovery to reorient.
REORIENT_AFTER_BLOCKS = 1
# Whether fully-scouted idle players drift toward the spawn zone to be first
# at the next piece.
CAMP_ENABLED = True


def parse_strategy(name: str) -> StrategyKind:
    key = name.strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return StrategyKind(key)
    except ValueError:
        valid = ", ".join(k.value for k in StrategyKind)
        raise ValueError(f"unknown strategy {name!r}; expected one of {valid}")


@dataclass
class AgentMemory:
    """Everything one agent remembers between turns.

    belief may be shared with the engine's authoritative store (in-process
    play) or owned outright (remote play); ingestion is idempotent so both
    arrangements behave identically. known_goals records every field ever
    seen as a goal, so only genuinely new discoveries fire the exchange
    trigger.
    """

    belief: Belief
    rng: random.Random
    team: TeamColor
    own_area_cells: tuple[Position, ...]
    own_area_set: frozenset[Position]
    pending_exchange_trigger: bool = False
    me_exchange_on_discovery: bool = False
    known_goals: set[Position] = field(default_factory=set)
    gradient: tuple[DiscoverReading, ...] | None = None
    gradient_target: Position | None = None
    gather_target: Position | None = None
    scout_target: Position | None = None
    blocked_direction: Direction | None = None
    consecutive_blocks: int = 0
    # Piece sightings given up on (another player squats on the field),
    # keyed by the belief timestamp they had; a refreshed sighting requalifies.
    abandoned: dict[Position, int] = field(default_factory=dict)


def new_agent_memory(
    belief: Belief,
    rng: random.Random,
    team: TeamColor,
    me_exchange_on_discovery: bool = False,
) -> AgentMemory:
    cells = tuple(belief.cfg.goal_area_positions(team))
    return AgentMemory(
        belief=belief,
        rng=rng,
        team=team,
        own_area_cells=cells,
        own_area_set=frozenset(cells),
        me_exchange_on_discovery=me_exchange_on_discovery,
    )


def decide(kind: StrategyKind, mem: AgentMemory, me: PlayerState) -> GameAction:
    """Choose the next action. Total: always returns something chargeable,
    falling back to Discover when no target is known."""
    if kind in _TESTERS and me.held_piece is not None and not me.held_piece_tested:
        return Test()

    if mem.pending_exchange_trigger and kind in _EXCHANGERS:
        mem.pending_exchange_trigger = False
        teammates = [pid for pid in mem.belief.known_teammates if pid != me.player_id]
        if teammates:
            return ExchangeInfo(mem.rng.choice(teammates))

    here = mem.belief.at(me.pos)
    if me.held_piece is not None:
        if here.goal_status is GoalStatus.GOAL:
            return Place()
        if me.pos in mem.own_area_set and here.goal_status is GoalStatus.UNKNOWN:
            return Discover()
        target = nearest_known(
            mem.belief,
            me.pos,
            lambda pos, fb: fb.goal_status is GoalStatus.GOAL,
            mem.own_area_cells,
        )
        if target is None:
            target = nearest_known(
                mem.belief,
                me.pos,
                lambda pos, fb: fb.goal_status is GoalStatus.UNKNOWN,
                mem.own_area_cells,
            )
        if target is None:
            return Discover()
        return _move_toward(mem, me, target)

    # Empty-handed: gather.
    if here.distance_to_piece == 0:
        mem.gather_target = None
        return PickUp()
    target = _pick_gather_target(mem, me)
    if target is not None:
        mem.gradient_target = None
        return _move_toward(mem, me, target)
    # A walk that keeps bumping into someone is reoriented with a fresh sweep
    # instead of circling blind: the board may have changed under our feet.
    if mem.blocked_direction is not None and mem.consecutive_blocks >= REORIENT_AFTER_BLOCKS:
        mem.blocked_direction = None
        mem.consecutive_blocks = 0
        mem.gradient = None
        mem.gradient_target = None
        return Discover()
    if mem.gradient is not None:
        cell = _gradient_walk_target(mem, me)
        mem.gradient = None
        mem.gradient_target = cell if cell != me.pos else None
    if mem.gradient_target is not None:
        if me.pos == mem.gradient_target:
            mem.gradient_target = None
        else:
            return _move_toward(mem, me, mem.gradient_target)
    # Piece drought: the last sweep saw an empty board, so the distance
    # gradient gives nothing to follow. Spend the wait scouting unknown own
    # goal fields; the sweeps there sense new spawns and map goals at once.
    # (An agent that has never sensed at all discovers first.)
    if SCOUT_ENABLED and mem.belief.fields:
        scout = _pick_scout_target(mem, me)
        if scout is not None and scout != me.pos:
            return _move_toward(mem, me, scout)
        if scout is None and CAMP_ENABLED:
            camp = _pick_camp_target(mem, me)
            if camp is not None and camp != me.pos:
                return _move_toward(mem, me, camp)
    return Discover()


def on_result(kind: StrategyKind, mem: AgentMemory, result: ActionResult) -> AgentMemory:
    """Fold an action result into the agent's memory: belief ingestion plus
    the strategy-specific exchange triggers."""
    if result.player_id != mem.belief.owner:
        raise ForeignResultError(
            f"result for {result.player_id} offered to agent {mem.belief.owner}"
        )
    t = result.completed_at_ms
    if result.kind == DISCOVER and result.ok:
        readings = result.readings or ()
        new_goal = any(
            r.goal_status is GoalStatus.GOAL and r.pos not in mem.known_goals
            for r in readings
        )
        ingest_observation(mem.belief, result, t)
        _note_goals(mem, readings)
        mem.gradient = (
            readings if any(r.distance is not None for r in readings) else None
        )
        if new_goal and (
            kind is StrategyKind.TEAMWORKER
            or (kind is StrategyKind.MONITOR_EVALUATOR and mem.me_exchange_on_discovery)
        ):
            mem.pending_exchange_trigger = True
        return mem
    ingest_observation(mem.belief, result, t)
    if (
        result.kind == PLACE
        and result.ok
        and result.outcome == GOAL_COMPLETED
        and kind is StrategyKind.MONITOR_EVALUATOR
        and not mem.me_exchange_on_discovery
    ):
        mem.pending_exchange_trigger = True
    return mem


def accept_exchange(kind: StrategyKind, mem: AgentMemory, from_player: int) -> str:
    """All four built-in strategies always accept teammate exchanges."""
    return ACCEPTED


def remember_blocked(mem: AgentMemory, direction: Direction, from_pos: Position) -> None:
    """Record an occupied-field move rejection; steps dodge it until a move
    succeeds again. When the occupied field is the agent's own piece target,
    the target is abandoned: whoever stands there will resolve it first."""
    mem.blocked_direction = direction
    mem.consecutive_blocks += 1
    blocked_cell = step(from_pos, direction)
    if blocked_cell == mem.gather_target:
        fb = mem.belief.fields.get(blocked_cell)
        mem.abandoned[blocked_cell] = fb.last_seen_ms if fb else 0
        mem.gather_target = None
    if blocked_cell == mem.gradient_target:
        mem.gradient_target = None


def clear_blocked(mem: AgentMemory) -> None:
    mem.blocked_direction = None
    mem.consecutive_blocks = 0


def note_exchange(mem: AgentMemory) -> None:
    """Refresh trigger bookkeeping after a belief merge: goals learned from a
    teammate do not count as own discoveries later."""
    for pos, fb in mem.belief.fields.items():
        if fb.goal_status in (GoalStatus.GOAL, GoalStatus.COMPLETED_GOAL):
            mem.known_goals.add(pos)


# -- internals ---------------------------------------------------------------


def _note_goals(mem: AgentMemory, readings: tuple[DiscoverReading, ...]) -> None:
    for r in readings:
        if r.goal_status in (GoalStatus.GOAL, GoalStatus.COMPLETED_GOAL):
            mem.known_goals.add(r.pos)


def _pick_gather_target(mem: AgentMemory, me: PlayerState) -> Position | None:
    """Choose (stickily) a believed piece location to walk to.

    Fresh sightings (not older than one spawn interval) are trusted at any
    range. Older ones are hints only: worth chasing when closer than the
    move-equivalent of one discovery, otherwise re-sensing wins. The current
    target is kept unless it was invalidated or something strictly closer
    shows up, so pursuit never oscillates."""
    cfg = mem.belief.cfg
    fields = mem.belief.fields
    current = mem.gather_target
    if current is not None:
        fb = fields.get(current)
        if fb is None or fb.distance_to_piece != 0:
            current = None
            mem.gather_target = None

    now = me.ready_at_ms
    move_cost = max(cfg.move_cost_ms, 1)
    fresh_window = FRESH_WINDOW_INTERVALS * cfg.piece_spawn_interval_ms
    stale_range = max(1, (STALE_RANGE_DISCOVERIES * cfg.discovery_cost_ms) // move_cost)
    best = current
    best_key = (
        (manhattan(current, me.pos), current.y, current.x)
        if current is not None
        else None
    )
    for pos, fb in fields.items():
        if fb.distance_to_piece != 0:
            continue
        if mem.abandoned.get(pos) == fb.last_seen_ms:
            continue
        d = manhattan(pos, me.pos)
        if now - fb.last_seen_ms > fresh_window and d > stale_range:
            continue
        key = (d, pos.y, pos.x)
        if best_key is None or key < best_key:
            best = pos
            best_key = key
    mem.gather_target = best
    return best


def _pick_scout_target(mem: AgentMemory, me: PlayerState) -> Position | None:
    """Own-goal-area field worth a look while waiting for spawns: an unknown
    field, or failing that a believed goal whose record has aged enough that
    a teammate may have completed it meanwhile.

    Sticky, and randomized among the closest few so teammates with merged
    (identical) maps fan out instead of stacking on one cell."""
    fields = mem.belief.fields
    verify_age = 2 * mem.belief.cfg.piece_spawn_interval_ms
    now = me.ready_at_ms
    current = mem.scout_target
    if current is not None:
        if me.pos == current:
            mem.scout_target = None
            return current
        fb = fields.get(current)
        if (
            fb is None
            or fb.goal_status is GoalStatus.UNKNOWN
            or (
                SCOUT_VERIFY_GOALS
                and fb.goal_status is GoalStatus.GOAL
                and now - fb.last_seen_ms > verify_age
            )
        ):
            return current
        mem.scout_target = None
    unknown = []
    stale_goals = []
    for pos in mem.own_area_cells:
        fb = fields.get(pos)
        if fb is None or fb.goal_status is GoalStatus.UNKNOWN:
            unknown.append((manhattan(pos, me.pos), pos.y, pos.x, pos))
        elif (
            SCOUT_VERIFY_GOALS
            and fb.goal_status is GoalStatus.GOAL
            and now - fb.last_seen_ms > verify_age
        ):
            stale_goals.append((manhattan(pos, me.pos), pos.y, pos.x, pos))
    ranked = unknown or stale_goals
    if not ranked:
        return None
    ranked.sort()
    pool = ranked[:SCOUT_POOL]
    chosen = pool[0][3] if len(pool) == 1 else pool[mem.rng.randrange(len(pool))][3]
    mem.scout_target = chosen
    return chosen


def _pick_camp_target(mem: AgentMemory, me: PlayerState) -> Position | None:
    """Waiting spot for a player with nothing to scout: a central cell of the
    team's half of the task area, where the next spawn is likely closest.
    Randomized among a small pool so teammates spread out."""
    cfg = mem.belief.cfg
    gh = cfg.goal_area_height
    if me.team is TeamColor.RED:
        rows = (gh, gh + 1)
    else:
        rows = (gh + cfg.task_area_height - 2, gh + cfg.task_area_height - 1)
    mid = cfg.board_width // 2
    cols = (max(0, mid - 1), mid) if cfg.board_width > 1 else (0,)
    pool = [Position(x, y) for y in rows for x in cols]
    if me.pos in pool:
        return None
    return pool[mem.rng.randrange(len(pool))]


def _gradient_walk_target(mem: AgentMemory, me: PlayerState) -> Position | None:
    """Pick the smallest-distance cell of the last sweep (ties at random) and
    extend the walk along that direction: a reading of d means the nearest
    piece is d fields beyond it, so re-sensing any earlier is wasted time."""
    readings = [r for r in (mem.gradient or ()) if r.distance is not None]
    if not readings:
        return None
    best_d = min(r.distance for r in readings)
    cells = [r.pos for r in readings if r.distance == best_d]
    cell = cells[0] if len(cells) == 1 else cells[mem.rng.randrange(len(cells))]
    if best_d <= 1:
        return cell
    cfg = mem.belief.cfg
    opponent_rows = cfg.goal_rows(me.team.opponent())
    dx = _sign(cell.x - me.pos.x)
    dy = _sign(cell.y - me.pos.y)
    steps = min(best_d - 1, GRADIENT_EXTRAPOLATION_CAP)
    x, y = cell.x, cell.y
    while steps > 0:
        moved = False
        if dx and 0 <= x + dx < cfg.board_width:
            x += dx
            steps -= 1
            moved = True
        if steps > 0 and dy and 0 <= y + dy < cfg.board_height and (y + dy) not in opponent_rows:
            y += dy
            steps -= 1
            moved = True
        if not moved:
            break
    if Position(x, y).y in opponent_rows:
        return cell
    return Position(x, y)


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


_VERTICAL = (Direction.NORTH, Direction.SOUTH)


def _move_toward(mem: AgentMemory, me: PlayerState, target: Position) -> GameAction:
    """One greedy step: minimize manhattan distance to target, ties broken in
    Direction declaration order; never steps off-board or into the opposing
    goal area.

    After an occupied rejection the blocked direction is avoided while it is
    remembered; among the remaining closest options, sidesteps perpendicular
    to the blockage are preferred and equal ones are picked at random, which
    breaks the mirror dance of two players blocking each other."""
    cfg = mem.belief.cfg
    opponent_rows = cfg.goal_rows(me.team.opponent())
    candidates: list[tuple[int, int, Direction]] = []
    for idx, direction in enumerate(Direction):
        nxt = step(me.pos, direction)
        if not on_board(nxt, cfg):
            continue
        if nxt.y in opponent_rows:
            continue
        candidates.append((manhattan(nxt, target), idx, direction))
    if not candidates:
        return Discover()
    candidates.sort()
    blocked = mem.blocked_direction
    if blocked is None:
        return Move(candidates[0][2])
    pool = [c for c in candidates if c[2] is not blocked] or candidates
    best_d = pool[0][0]
    pool = [c for c in pool if c[0] == best_d]
    if len(pool) > 1:
        perpendicular = [
            c for c in pool if (c[2] in _VERTICAL) != (blocked in _VERTICAL)
        ]
        if perpendicular:
            pool = perpendicular
    if len(pool) > 1:
        return Move(pool[mem.rng.randrange(len(pool))][2])
    return Move(pool[0][2])

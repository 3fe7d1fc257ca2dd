"""Authoritative rules engine and discrete-event scheduler.

One GameState instance is owned by a single logical executor: every mutation
goes through submit_action / advance / advance_to, which serialize all
players' actions, charge simulated time costs, spawn pieces, realize risk,
detect the winner, and append to a replayable event log.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .actions import (
    ACCEPTED,
    ActionResult,
    COST_FIELD,
    DISCOVER,
    DiscoverReading,
    EXCHANGE_INFO,
    ExchangeInfo,
    GENUINE,
    GOAL_COMPLETED,
    GameAction,
    HANDS_FULL,
    MOVE,
    NOT_A_GOAL,
    NOT_IN_GOAL_AREA,
    NOT_TEAMMATE,
    NO_PIECE_HELD,
    NO_PIECE_HERE,
    OCCUPIED,
    OFF_BOARD,
    OPPONENT_GOAL_AREA,
    PICK_UP,
    PLACE,
    REJECTED,
    SELF_EXCHANGE,
    SHAM_DESTROYED,
    SHAM_WASTED,
    TEST,
    UNKNOWN_TARGET,
    action_kind,
    action_to_json,
)
from .errors import (
    GameFinishedError,
    NotReadyError,
    UnknownPlayerError,
)
from .knowledge import Belief, ingest_observation, merge, new_belief
from .model import (
    Direction,
    GameConfig,
    GoalStatus,
    Piece,
    Position,
    TeamColor,
    area_of,
    manhattan,
    neighborhood,
    on_board,
    step,
)

RUNNING = "running"
FINISHED = "finished"

REASON_ALL_GOALS = "all_goals_completed"
REASON_TIMEOUT = "timeout"

# Per-game exchange-acceptance policy: maps initiator id to a verdict.
AcceptPolicy = Callable[[int], bool]


@dataclass
class PlayerState:
    player_id: int
    team: TeamColor
    pos: Position
    held_piece: Piece | None = None
    held_piece_tested: bool = False
    ready_at_ms: int = 0
    is_leader: bool = False


@dataclass
class GoalField:
    pos: Position
    owner: TeamColor
    completed: bool = False


class GameEvent(NamedTuple):
    seq: int
    t_ms: int
    player_id: int | None
    record: dict

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "t_ms": self.t_ms,
            "player_id": self.player_id,
            "record": self.record,
        }


class GameState:
    """Complete authoritative game state plus the per-player belief stores.

    The engine keeps the authoritative Belief of every player so exchanges
    can be merged server-side even when a party is a remote session; the
    in-process agent driver shares these objects with its agents.
    """

    def __init__(self, cfg: GameConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.clock_ms = 0
        self.players: list[PlayerState] = []
        self.pieces_on_board: dict[Position, Piece] = {}
        self.goal_fields: dict[TeamColor, dict[Position, GoalField]] = {
            TeamColor.RED: {},
            TeamColor.BLUE: {},
        }
        self.next_spawn_at_ms = cfg.piece_spawn_interval_ms
        self.event_log: list[GameEvent] = []
        self.phase = RUNNING
        self.winner: TeamColor | None = None
        self.finish_reason: str | None = None
        self.beliefs: dict[int, Belief] = {}
        self.exchange_policies: dict[int, AcceptPolicy] = {}
        self._next_piece_id = 0
        self._next_seq = 0
        self._occupied: set[Position] = set()
        self._task_positions = cfg.task_area_positions()

    # -- queries ----------------------------------------------------------

    def player(self, player_id: int) -> PlayerState:
        if not 0 <= player_id < len(self.players):
            raise UnknownPlayerError(f"no player {player_id}")
        return self.players[player_id]

    def team_players(self, team: TeamColor) -> list[PlayerState]:
        return [p for p in self.players if p.team is team]

    def is_running(self) -> bool:
        return self.phase == RUNNING

    def snapshot(self) -> dict:
        """Canonical observable state, used for replay-equality checks.

        The PRNG position is intentionally excluded: it is not observable
        and cannot be reconstructed from the event log.
        """
        return {
            "cfg": self.cfg.to_json(),
            "clock_ms": self.clock_ms,
            "phase": self.phase,
            "winner": self.winner.value if self.winner else None,
            "finish_reason": self.finish_reason,
            "next_spawn_at_ms": self.next_spawn_at_ms,
            "players": [
                {
                    "player_id": p.player_id,
                    "team": p.team.value,
                    "pos": p.pos.to_json(),
                    "held_piece": None
                    if p.held_piece is None
                    else {"id": p.held_piece.id, "is_sham": p.held_piece.is_sham},
                    "held_piece_tested": p.held_piece_tested,
                    "ready_at_ms": p.ready_at_ms,
                    "is_leader": p.is_leader,
                }
                for p in self.players
            ],
            "pieces_on_board": [
                {"pos": pos.to_json(), "id": pc.id, "is_sham": pc.is_sham}
                for pos, pc in sorted(self.pieces_on_board.items())
            ],
            "goal_fields": {
                team.value: [
                    {"pos": g.pos.to_json(), "completed": g.completed}
                    for _, g in sorted(self.goal_fields[team].items())
                ]
                for team in (TeamColor.RED, TeamColor.BLUE)
            },
        }

    # -- event plumbing ----------------------------------------------------

    def _emit(self, t_ms: int, player_id: int | None, record: dict) -> GameEvent:
        ev = GameEvent(self._next_seq, t_ms, player_id, record)
        self._next_seq += 1
        self.event_log.append(ev)
        return ev

    # -- lifecycle ---------------------------------------------------------

    def _spawn_piece(self, t_ms: int) -> GameEvent | None:
        empty = [p for p in self._task_positions if p not in self.pieces_on_board]
        if not empty:
            return None  # task area full: this tick is skipped silently
        pos = empty[self.rng.randrange(len(empty))]
        is_sham = self.rng.random() < self.cfg.risk_level
        piece = Piece(self._next_piece_id, is_sham)
        self._next_piece_id += 1
        self.pieces_on_board[pos] = piece
        return self._emit(
            t_ms,
            None,
            {
                "type": "piece_spawn",
                "pos": pos.to_json(),
                "piece_id": piece.id,
                "is_sham": piece.is_sham,
            },
        )

    def advance_to(self, t_ms: int) -> list[GameEvent]:
        """Advance the clock to t_ms (clamped to the game-time cap),
        processing every spawn tick on the way and the timeout."""
        if self.phase != RUNNING:
            raise GameFinishedError("cannot advance a finished game")
        target = min(max(t_ms, self.clock_ms), self.cfg.max_game_time_ms)
        start = len(self.event_log)
        while self.next_spawn_at_ms <= target:
            tick = self.next_spawn_at_ms
            self.clock_ms = tick
            self._spawn_piece(tick)
            self.next_spawn_at_ms = tick + self.cfg.piece_spawn_interval_ms
        self.clock_ms = target
        self.check_winner()
        return self.event_log[start:]

    def advance(self) -> list[GameEvent]:
        """Advance to the earliest pending timestamp: the next spawn tick or
        the earliest player ready time, whichever comes first."""
        if self.phase != RUNNING:
            raise GameFinishedError("cannot advance a finished game")
        t_next = min(
            [self.next_spawn_at_ms] + [p.ready_at_ms for p in self.players]
        )
        return self.advance_to(t_next)

    def check_winner(self) -> TeamColor | None:
        if self.phase == FINISHED:
            return self.winner
        for team in (TeamColor.RED, TeamColor.BLUE):
            goals = self.goal_fields[team]
            if goals and all(g.completed for g in goals.values()):
                self.phase = FINISHED
                self.winner = team
                self.finish_reason = REASON_ALL_GOALS
                self._emit(
                    self.clock_ms,
                    None,
                    {
                        "type": "game_over",
                        "winner": team.value,
                        "reason": REASON_ALL_GOALS,
                    },
                )
                return team
        if self.clock_ms >= self.cfg.max_game_time_ms:
            self.phase = FINISHED
            self.winner = None
            self.finish_reason = REASON_TIMEOUT
            self._emit(
                self.clock_ms,
                None,
                {"type": "game_over", "winner": None, "reason": REASON_TIMEOUT},
            )
        return None

    # -- action handling ----------------------------------------------------

    def submit_action(self, player_id: int, action: GameAction) -> ActionResult:
        """Validate, charge, apply, and log one action.

        The action's configured cost is charged whether or not it succeeds;
        a rejected action carries its reason in the result instead of
        raising.
        """
        if self.phase != RUNNING:
            raise GameFinishedError("game is over")
        player = self.player(player_id)
        if self.clock_ms < player.ready_at_ms:
            raise NotReadyError(player.ready_at_ms - self.clock_ms)
        kind = action_kind(action)
        cost = getattr(self.cfg, COST_FIELD[kind])
        completed_at = self.clock_ms + cost

        if kind == MOVE:
            result = self._handle_move(player, action.direction, completed_at)
        elif kind == DISCOVER:
            result = self._handle_discover(player, completed_at)
        elif kind == PICK_UP:
            result = self._handle_pickup(player, completed_at)
        elif kind == TEST:
            result = self._handle_test(player, completed_at)
        elif kind == PLACE:
            result = self._handle_place(player, completed_at)
        else:
            result = self._handle_exchange(player, action, completed_at)

        player.ready_at_ms = completed_at
        # Observations are stamped with the action's completion time: that is
        # when the result (and therefore the knowledge) becomes available,
        # and remote clients ingesting delivered results agree byte-for-byte.
        ingest_observation(self.beliefs[player_id], result, completed_at)
        self._emit(
            self.clock_ms,
            player_id,
            {
                "type": "action_taken",
                "action": action_to_json(action),
                "result": result.to_json(),
            },
        )
        if result.ok and result.kind == EXCHANGE_INFO and result.outcome == ACCEPTED:
            self._complete_exchange(player, result.target_player_id, completed_at)
        self.check_winner()
        return result

    def _handle_move(
        self, player: PlayerState, direction: Direction, completed_at: int
    ) -> ActionResult:
        target = step(player.pos, direction)
        reject = None
        if not on_board(target, self.cfg):
            reject = OFF_BOARD
        elif area_of(target, self.cfg) is self.cfg.goal_area(player.team.opponent()):
            reject = OPPONENT_GOAL_AREA
        elif target in self._occupied:
            reject = OCCUPIED
        if reject is not None:
            return ActionResult(
                ok=False,
                kind=MOVE,
                player_id=player.player_id,
                completed_at_ms=completed_at,
                pos=player.pos,
                reject=reject,
            )
        self._occupied.discard(player.pos)
        self._occupied.add(target)
        player.pos = target
        return ActionResult(
            ok=True,
            kind=MOVE,
            player_id=player.player_id,
            completed_at_ms=completed_at,
            pos=target,
        )

    def _handle_discover(
        self, player: PlayerState, completed_at: int
    ) -> ActionResult:
        own_goals = self.goal_fields[player.team]
        own_area = self.cfg.goal_area(player.team)
        pieces = list(self.pieces_on_board)
        readings = []
        for pos in neighborhood(player.pos, self.cfg):
            if pieces:
                distance = min(manhattan(pos, pp) for pp in pieces)
            else:
                distance = None
            if area_of(pos, self.cfg) is own_area:
                goal = own_goals.get(pos)
                if goal is None:
                    status = GoalStatus.NO_GOAL
                elif goal.completed:
                    status = GoalStatus.COMPLETED_GOAL
                else:
                    status = GoalStatus.GOAL
            else:
                status = GoalStatus.NOT_VISIBLE
            readings.append(DiscoverReading(pos, distance, status))
        return ActionResult(
            ok=True,
            kind=DISCOVER,
            player_id=player.player_id,
            completed_at_ms=completed_at,
            pos=player.pos,
            readings=tuple(readings),
        )

    def _handle_pickup(self, player: PlayerState, completed_at: int) -> ActionResult:
        reject = None
        if player.held_piece is not None:
            reject = HANDS_FULL
        elif player.pos not in self.pieces_on_board:
            reject = NO_PIECE_HERE
        if reject is not None:
            return ActionResult(
                ok=False,
                kind=PICK_UP,
                player_id=player.player_id,
                completed_at_ms=completed_at,
                pos=player.pos,
                reject=reject,
            )
        piece = self.pieces_on_board.pop(player.pos)
        player.held_piece = piece
        player.held_piece_tested = False
        return ActionResult(
            ok=True,
            kind=PICK_UP,
            player_id=player.player_id,
            completed_at_ms=completed_at,
            pos=player.pos,
            piece_id=piece.id,
        )

    def _handle_test(self, player: PlayerState, completed_at: int) -> ActionResult:
        if player.held_piece is None:
            return ActionResult(
                ok=False,
                kind=TEST,
                player_id=player.player_id,
                completed_at_ms=completed_at,
                pos=player.pos,
                reject=NO_PIECE_HELD,
            )
        piece = player.held_piece
        if piece.is_sham:
            # Risk materializes at testing: the sham is destroyed.
            player.held_piece = None
            player.held_piece_tested = False
            outcome = SHAM_DESTROYED
        else:
            player.held_piece_tested = True
            outcome = GENUINE
        return ActionResult(
            ok=True,
            kind=TEST,
            player_id=player.player_id,
            completed_at_ms=completed_at,
            pos=player.pos,
            piece_id=piece.id,
            outcome=outcome,
        )

    def _handle_place(self, player: PlayerState, completed_at: int) -> ActionResult:
        reject = None
        if area_of(player.pos, self.cfg) is not self.cfg.goal_area(player.team):
            reject = NOT_IN_GOAL_AREA
        elif player.held_piece is None:
            reject = NO_PIECE_HELD
        if reject is not None:
            return ActionResult(
                ok=False,
                kind=PLACE,
                player_id=player.player_id,
                completed_at_ms=completed_at,
                pos=player.pos,
                reject=reject,
            )
        piece = player.held_piece
        player.held_piece = None
        player.held_piece_tested = False
        if piece.is_sham:
            # Risk materializes at validation; the field reveals nothing.
            outcome = SHAM_WASTED
        else:
            goal = self.goal_fields[player.team].get(player.pos)
            if goal is not None and not goal.completed:
                goal.completed = True
                outcome = GOAL_COMPLETED
            else:
                outcome = NOT_A_GOAL
        return ActionResult(
            ok=True,
            kind=PLACE,
            player_id=player.player_id,
            completed_at_ms=completed_at,
            pos=player.pos,
            piece_id=piece.id,
            outcome=outcome,
        )

    def _handle_exchange(
        self, player: PlayerState, action: ExchangeInfo, completed_at: int
    ) -> ActionResult:
        target_id = action.target_player_id
        reject = None
        if not 0 <= target_id < len(self.players):
            reject = UNKNOWN_TARGET
        elif target_id == player.player_id:
            reject = SELF_EXCHANGE
        elif self.players[target_id].team is not player.team:
            reject = NOT_TEAMMATE
        if reject is not None:
            return ActionResult(
                ok=False,
                kind=EXCHANGE_INFO,
                player_id=player.player_id,
                completed_at_ms=completed_at,
                pos=player.pos,
                reject=reject,
            )
        target = self.players[target_id]
        # The leader rule forces acceptance in both directions; otherwise the
        # target's policy is evaluated immediately (no blocking wait).
        if player.is_leader or target.is_leader:
            accepted = True
        else:
            policy = self.exchange_policies.get(target_id)
            accepted = True if policy is None else bool(policy(player.player_id))
        return ActionResult(
            ok=True,
            kind=EXCHANGE_INFO,
            player_id=player.player_id,
            completed_at_ms=completed_at,
            pos=player.pos,
            outcome=ACCEPTED if accepted else REJECTED,
            target_player_id=target_id,
        )

    def _complete_exchange(
        self, initiator: PlayerState, target_id: int, completed_at: int
    ) -> None:
        target = self.players[target_id]
        # Both parties pay: the target's next availability is pushed to at
        # least one exchange cost from now; an already-busy target absorbs
        # the charge into its current block.
        target.ready_at_ms = max(
            target.ready_at_ms, self.clock_ms + self.cfg.exchange_cost_ms
        )
        merge(self.beliefs[initiator.player_id], self.beliefs[target_id])
        self._emit(
            self.clock_ms,
            None,
            {
                "type": "exchange_completed",
                "a": initiator.player_id,
                "b": target_id,
            },
        )


def init_game(cfg: GameConfig) -> GameState:
    """Create a fresh game.

    All randomness comes from one stream seeded with cfg.seed, drawn in a
    fixed order: red goal fields, blue goal fields, red player starts, blue
    player starts, initial piece positions, then initial sham flags. Initial
    pieces are logged as spawn events at t=0 following the init event.
    """
    rng = random.Random(cfg.seed)
    state = GameState(cfg, rng)

    goal_positions: dict[TeamColor, list[Position]] = {}
    for team in (TeamColor.RED, TeamColor.BLUE):
        cells = cfg.goal_area_positions(team)
        chosen = rng.sample(cells, cfg.goals_per_team)
        goal_positions[team] = chosen
        state.goal_fields[team] = {pos: GoalField(pos, team) for pos in chosen}

    starts: dict[TeamColor, list[Position]] = {}
    for team in (TeamColor.RED, TeamColor.BLUE):
        cells = cfg.goal_area_positions(team)
        starts[team] = rng.sample(cells, cfg.players_per_team)

    pid = 0
    for team in (TeamColor.RED, TeamColor.BLUE):
        team_ids = []
        for i, pos in enumerate(starts[team]):
            state.players.append(
                PlayerState(
                    player_id=pid,
                    team=team,
                    pos=pos,
                    is_leader=(i == 0),
                )
            )
            state._occupied.add(pos)
            team_ids.append(pid)
            pid += 1
        for member in team_ids:
            state.beliefs[member] = new_belief(member, cfg, team_ids)

    piece_cells = rng.sample(cfg.task_area_positions(), cfg.initial_pieces)
    sham_flags = [rng.random() < cfg.risk_level for _ in range(cfg.initial_pieces)]

    state._emit(
        0,
        None,
        {
            "type": "game_init",
            "cfg": cfg.to_json(),
            "goal_positions": {
                team.value: [p.to_json() for p in goal_positions[team]]
                for team in (TeamColor.RED, TeamColor.BLUE)
            },
            "start_positions": [
                {
                    "player_id": p.player_id,
                    "team": p.team.value,
                    "pos": p.pos.to_json(),
                    "is_leader": p.is_leader,
                }
                for p in state.players
            ],
            "seed": cfg.seed,
        },
    )
    for pos, sham in zip(piece_cells, sham_flags):
        piece = Piece(state._next_piece_id, sham)
        state._next_piece_id += 1
        state.pieces_on_board[pos] = piece
        state._emit(
            0,
            None,
            {
                "type": "piece_spawn",
                "pos": pos.to_json(),
                "piece_id": piece.id,
                "is_sham": piece.is_sham,
            },
        )
    return state


def submit_action(state: GameState, player_id: int, action: GameAction) -> ActionResult:
    return state.submit_action(player_id, action)


def advance(state: GameState) -> list[GameEvent]:
    return state.advance()


def check_winner(state: GameState) -> TeamColor | None:
    return state.check_winner()

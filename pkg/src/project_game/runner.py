"""In-process game driver: wires agent policies to the rules engine.

Runs one full game with homogeneous or mixed strategy assignments. Ready
players are served in ascending player-id order at each instant; when nobody
is ready the clock advances to the next pending event. Fully deterministic
for a given (config, strategy assignment).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .actions import ACCEPTED, EXCHANGE_INFO, Move, OCCUPIED
from .agents import (
    AgentMemory,
    StrategyKind,
    accept_exchange,
    clear_blocked,
    decide,
    new_agent_memory,
    note_exchange,
    on_result,
    remember_blocked,
)
from .engine import GameState, init_game
from .eventlog import write_event_log
from .model import GameConfig, TeamColor
from .seeding import derive_seed


@dataclass
class GameSetup:
    cfg: GameConfig
    red: StrategyKind
    blue: StrategyKind
    me_exchange_on_discovery: bool = False


def run_game(
    setup: GameSetup,
    log_path: str | Path | None = None,
    max_steps: int | None = None,
) -> GameState:
    """Play one game to the end and return the finished state.

    max_steps caps the number of driver iterations as a safety valve for
    pathological configurations; the game-time cap normally ends games first.
    """
    state = init_game(setup.cfg)
    agents: dict[int, tuple[StrategyKind, AgentMemory]] = {}
    for player in state.players:
        kind = setup.red if player.team is TeamColor.RED else setup.blue
        rng = random.Random(derive_seed(setup.cfg.seed, "agent", player.player_id))
        mem = new_agent_memory(
            state.beliefs[player.player_id],
            rng,
            player.team,
            me_exchange_on_discovery=setup.me_exchange_on_discovery,
        )
        agents[player.player_id] = (kind, mem)
        state.exchange_policies[player.player_id] = (
            lambda from_id, k=kind, m=mem: accept_exchange(k, m, from_id) == ACCEPTED
        )

    steps = 0
    while state.is_running():
        acted = False
        for player in state.players:
            if not state.is_running():
                break
            if player.ready_at_ms > state.clock_ms:
                continue
            kind, mem = agents[player.player_id]
            action = decide(kind, mem, player)
            result = state.submit_action(player.player_id, action)
            on_result(kind, mem, result)
            if isinstance(action, Move):
                if not result.ok and result.reject == OCCUPIED:
                    remember_blocked(mem, action.direction, player.pos)
                elif result.ok:
                    clear_blocked(mem)
            if result.kind == EXCHANGE_INFO and result.ok and result.outcome == ACCEPTED:
                # Beliefs were merged in place by the engine; re-sync trigger
                # bookkeeping on both sides.
                note_exchange(mem)
                note_exchange(agents[result.target_player_id][1])
            acted = True
        if state.is_running() and not acted:
            state.advance()
        steps += 1
        if max_steps is not None and steps >= max_steps:
            break

    if log_path is not None:
        write_event_log(log_path, state.event_log)
    return state

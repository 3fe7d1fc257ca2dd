"""Generate web-client test fixtures: per-player message transcripts plus the
authoritative final belief each transcript must reconstruct."""
import json
import random
import sys
from pathlib import Path

from project_game.actions import ACCEPTED, EXCHANGE_INFO, Move, OCCUPIED
from project_game.agents import (
    StrategyKind,
    accept_exchange,
    clear_blocked,
    decide,
    new_agent_memory,
    note_exchange,
    on_result,
    remember_blocked,
)
from project_game.engine import init_game
from project_game.model import GameConfig, TeamColor
from project_game.seeding import derive_seed

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("frontend/tests/fixtures")


def play_with_transcripts(cfg, red, blue):
    """Run one game, recording the action_result / exchange_delivery stream
    each player's session would receive from the server."""
    state = init_game(cfg)
    transcripts = {p.player_id: [] for p in state.players}
    agents = {}
    for p in state.players:
        kind = red if p.team is TeamColor.RED else blue
        rng = random.Random(derive_seed(cfg.seed, "agent", p.player_id))
        mem = new_agent_memory(state.beliefs[p.player_id], rng, p.team)
        agents[p.player_id] = (kind, mem)
        state.exchange_policies[p.player_id] = (
            lambda f, k=kind, m=mem: accept_exchange(k, m, f) == ACCEPTED
        )
    while state.is_running():
        acted = False
        for p in state.players:
            if not state.is_running():
                break
            if p.ready_at_ms > state.clock_ms:
                continue
            kind, mem = agents[p.player_id]
            action = decide(kind, mem, p)
            t = state.clock_ms
            result = state.submit_action(p.player_id, action)
            transcripts[p.player_id].append(
                {
                    "type": "action_result",
                    "game_id": "fixture",
                    "player_id": p.player_id,
                    "t_ms": t,
                    "result": result.to_json(),
                }
            )
            on_result(kind, mem, result)
            if isinstance(action, Move):
                if not result.ok and result.reject == OCCUPIED:
                    remember_blocked(mem, action.direction, p.pos)
                elif result.ok:
                    clear_blocked(mem)
            if result.kind == EXCHANGE_INFO and result.ok and result.outcome == ACCEPTED:
                note_exchange(mem)
                note_exchange(agents[result.target_player_id][1])
                for pid, partner in ((p.player_id, result.target_player_id),
                                     (result.target_player_id, p.player_id)):
                    transcripts[pid].append(
                        {
                            "type": "exchange_delivery",
                            "game_id": "fixture",
                            "player_id": pid,
                            "partner_id": partner,
                            "t_ms": result.completed_at_ms,
                            "belief": state.beliefs[pid].to_json(),
                        }
                    )
            acted = True
        if state.is_running() and not acted:
            state.advance()
    return state, transcripts


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    strategies = [
        (StrategyKind.SHAPER, StrategyKind.TEAMWORKER),
        (StrategyKind.MONITOR_EVALUATOR, StrategyKind.COMPLETER_FINISHER),
    ]
    count = 0
    for g in range(10):
        red, blue = strategies[g % len(strategies)]
        cfg = GameConfig(risk_level=(0.0, 0.2, 0.5, 0.8)[g % 4],
                         seed=derive_seed(2024, "fixture", g))
        state, transcripts = play_with_transcripts(cfg, red, blue)
        pid = g % 6  # rotate which player's view we snapshot
        fixture = {
            "game": g,
            "player_id": pid,
            "risk_level": cfg.risk_level,
            "transcript": transcripts[pid],
            "expected_belief": state.beliefs[pid].to_json(),
        }
        path = OUT / f"belief_replay_{g:02d}.json"
        path.write_text(json.dumps(fixture, indent=1, sort_keys=True))
        count += 1
    print(f"wrote {count} fixtures to {OUT}")


if __name__ == "__main__":
    main()

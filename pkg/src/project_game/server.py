"""Network service exposing games to remote agents and human clients.

Transport: WebSocket (one JSON document per message) at /ws, plus
newline-delimited JSON over raw TCP for headless agents. Both transports
share the same session logic; all engine mutations for one game are
serialized through its asyncio lock.

Information hiding: no message ever carries another player's belief (except
a completed exchange), any piece's sham flag, or undiscovered goal
locations.
"""
from __future__ import annotations

import asyncio
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .actions import ACCEPTED, EXCHANGE_INFO, GameAction, action_from_json
from .engine import GameState, init_game
from .errors import GameError, GameFinishedError, NotReadyError, UnknownPlayerError
from .eventlog import event_to_line
from .metrics import compute_profile, PROFILE_COLUMNS
from .model import GameConfig, TeamColor

PROTOCOL_ERRORS = {
    "parse": "message is not a JSON object",
    "unknown_type": "unrecognized message type",
    "unknown_game": "no such game",
    "game_full": "no free slot on any team",
    "not_joined": "join a game first",
    "already_joined": "session already bound to a player",
    "not_ready": "action cost still being paid",
    "game_finished": "game is over",
    "game_not_started": "waiting for players",
    "bad_action": "malformed action payload",
}


class Transport(Protocol):
    async def send_obj(self, obj: dict) -> None: ...


@dataclass
class Session:
    transport: Transport
    game: "HostedGame | None" = None
    player_id: int | None = None
    mode: str = "agent"
    name: str = ""
    accept_exchanges: bool = True
    alive: bool = True

    async def send(self, obj: dict) -> None:
        if not self.alive:
            return
        try:
            await self.transport.send_obj(obj)
        except Exception:
            self.alive = False


class HostedGame:
    """One game instance plus its sessions, lock, and clock policy."""

    def __init__(self, game_id: str, cfg: GameConfig, realtime: bool,
                 time_scale: float = 1.0, log_dir: str | None = None):
        self.game_id = game_id
        self.cfg = cfg
        self.realtime = realtime
        self.time_scale = time_scale
        self.state: GameState | None = None
        self.sessions: dict[int, Session] = {}
        self.lock = asyncio.Lock()
        self.started_wall: float | None = None
        self.log_dir = log_dir
        self._log_fh = None
        self._log_written = 0
        self._game_over_sent = False

    # -- slots ---------------------------------------------------------------

    def free_slots(self, team: TeamColor) -> list[int]:
        per_team = self.cfg.players_per_team
        ids = range(0, per_team) if team is TeamColor.RED else range(per_team, 2 * per_team)
        return [pid for pid in ids if pid not in self.sessions]

    def assign_slot(self, preferred: str | None) -> tuple[int, TeamColor] | None:
        order = [TeamColor.RED, TeamColor.BLUE]
        if preferred == "blue":
            order.reverse()
        elif preferred == "red":
            pass
        for team in order:
            free = self.free_slots(team)
            if free:
                return free[0], team
        return None

    def full(self) -> bool:
        return len(self.sessions) == 2 * self.cfg.players_per_team

    # -- clock ---------------------------------------------------------------

    def wall_ms(self) -> int:
        if self.started_wall is None:
            return 0
        return int((time.monotonic() - self.started_wall) * 1000 * self.time_scale)

    def advance_clock(self, target_ms: int | None = None) -> None:
        """Move simulated time forward; in realtime mode it tracks the wall
        clock, in fast-time mode it jumps to the acting player's readiness."""
        if self.state is None or not self.state.is_running():
            return
        if self.realtime:
            self.state.advance_to(self.wall_ms())
        elif target_ms is not None:
            self.state.advance_to(target_ms)

    # -- event log persistence -------------------------------------------

    def flush_log(self) -> None:
        if self.state is None or self.log_dir is None:
            return
        if self._log_fh is None:
            Path(self.log_dir).mkdir(parents=True, exist_ok=True)
            path = Path(self.log_dir) / f"{self.game_id}.jsonl"
            self._log_fh = open(path, "w", encoding="utf-8")
        log = self.state.event_log
        while self._log_written < len(log):
            self._log_fh.write(event_to_line(log[self._log_written]) + "\n")
            self._log_written += 1
        self._log_fh.flush()


def error_msg(code: str, detail: str | None = None, **extra) -> dict:
    msg = {"type": "error", "error": code,
           "detail": detail or PROTOCOL_ERRORS.get(code, code)}
    msg.update(extra)
    return msg


def public_config(cfg: GameConfig) -> dict:
    obj = cfg.to_json()
    del obj["seed"]  # the seed would reveal every hidden placement
    return obj


class GameServer:
    """Session handling shared by the WebSocket and TCP transports."""

    def __init__(self):
        self.games: dict[str, HostedGame] = {}

    def add_game(self, game: HostedGame) -> None:
        self.games[game.game_id] = game

    async def handle_message(self, session: Session, raw: str | bytes) -> None:
        try:
            msg = json.loads(raw)
            if not isinstance(msg, dict):
                raise ValueError("not an object")
        except ValueError:
            await session.send(error_msg("parse"))
            return
        mtype = msg.get("type")
        if mtype == "join_game":
            await self.handle_join(session, msg)
        elif mtype == "action_request":
            await self.handle_action(session, msg)
        elif mtype == "exchange_policy":
            session.accept_exchanges = bool(msg.get("accept", True))
        else:
            await session.send(error_msg("unknown_type"))

    # -- handshake ---------------------------------------------------------

    async def handle_join(self, session: Session, msg: dict) -> None:
        if session.game is not None:
            await session.send(error_msg("already_joined"))
            return
        game = self.games.get(msg.get("game_id", ""))
        if game is None:
            await session.send(error_msg("unknown_game"))
            return
        async with game.lock:
            slot = game.assign_slot(msg.get("preferred_team"))
            if slot is None:
                await session.send(error_msg("game_full"))
                return
            player_id, team = slot
            session.game = game
            session.player_id = player_id
            session.mode = msg.get("mode", "agent")
            session.name = str(msg.get("name", f"player-{player_id}"))
            game.sessions[player_id] = session
            await session.send(
                {
                    "type": "join_confirmed",
                    "game_id": game.game_id,
                    "player_id": player_id,
                    "team": team.value,
                    "is_leader": player_id % game.cfg.players_per_team == 0,
                }
            )
            if game.full() and game.state is None:
                await self.start_game(game)

    async def start_game(self, game: HostedGame) -> None:
        game.state = init_game(game.cfg)
        game.started_wall = time.monotonic()
        for pid, session in game.sessions.items():
            game.state.exchange_policies[pid] = self._policy_for(game, pid)
        state = game.state
        gh = game.cfg.goal_area_height
        roster = [
            {
                "player_id": p.player_id,
                "team": p.team.value,
                "is_leader": p.is_leader,
                "name": game.sessions[p.player_id].name
                if p.player_id in game.sessions
                else f"player-{p.player_id}",
            }
            for p in state.players
        ]
        for p in state.players:
            session = game.sessions.get(p.player_id)
            if session is None:
                continue
            rows = game.cfg.goal_rows(p.team)
            await session.send(
                {
                    "type": "game_started",
                    "game_id": game.game_id,
                    "t_ms": 0,
                    "player_id": p.player_id,
                    "cfg": public_config(game.cfg),
                    "pos": p.pos.to_json(),
                    "goal_area": {"y_min": rows.start, "y_max": rows.stop - 1},
                    "players": roster,
                }
            )
        game.flush_log()

    def _policy_for(self, game: HostedGame, pid: int):
        def policy(from_id: int) -> bool:
            session = game.sessions.get(pid)
            return session.accept_exchanges if session else True
        return policy

    # -- actions -------------------------------------------------------------

    async def handle_action(self, session: Session, msg: dict) -> None:
        game = session.game
        if game is None or session.player_id is None:
            await session.send(error_msg("not_joined"))
            return
        if game.state is None:
            await session.send(error_msg("game_not_started"))
            return
        try:
            action = action_from_json(msg.get("action") or {})
        except (GameError, KeyError, TypeError, ValueError):
            await session.send(error_msg("bad_action"))
            return
        pid = session.player_id
        async with game.lock:
            state = game.state
            if not state.is_running():
                await session.send(error_msg("game_finished"))
                return
            player = state.players[pid]
            if game.realtime:
                game.advance_clock()
                if not state.is_running():
                    await self.broadcast_game_over(game)
                    await session.send(error_msg("game_finished"))
                    return
                if player.ready_at_ms > state.clock_ms:
                    remaining = player.ready_at_ms - state.clock_ms
                    await session.send(
                        error_msg("not_ready", remaining_ms=remaining)
                    )
                    return
            else:
                game.advance_clock(player.ready_at_ms)
                if not state.is_running():
                    await self.broadcast_game_over(game)
                    await session.send(error_msg("game_finished"))
                    return
            submitted_at = state.clock_ms
            try:
                result = state.submit_action(pid, action)
            except NotReadyError as exc:
                await session.send(error_msg("not_ready", remaining_ms=exc.remaining_ms))
                return
            except (GameFinishedError, UnknownPlayerError) as exc:
                await session.send(error_msg("game_finished", detail=str(exc)))
                return
            game.flush_log()
        if game.realtime:
            # Withhold the result for the action's wall-clock cost, but keep
            # receiving: a request arriving meanwhile gets not_ready.
            cost_ms = result.completed_at_ms - submitted_at
            asyncio.get_running_loop().create_task(
                self._finish_action(game, session, submitted_at, result, cost_ms)
            )
        else:
            await self._finish_action(game, session, submitted_at, result, 0)

    async def _finish_action(self, game: HostedGame, session: Session,
                             submitted_at: int, result, cost_ms: int) -> None:
        if cost_ms:
            await asyncio.sleep(cost_ms / 1000.0 / game.time_scale)
        await session.send(
            {
                "type": "action_result",
                "game_id": game.game_id,
                "player_id": result.player_id,
                "t_ms": submitted_at,
                "result": result.to_json(),
            }
        )
        if result.ok and result.kind == EXCHANGE_INFO and result.outcome == ACCEPTED:
            await self.deliver_exchange(game, result.player_id,
                                        result.target_player_id,
                                        result.completed_at_ms)
        if game.state is not None and not game.state.is_running():
            await self.broadcast_game_over(game)

    async def deliver_exchange(self, game: HostedGame, a: int, b: int,
                               t_ms: int) -> None:
        """Merged beliefs are already applied server-side; deliver each party
        its updated belief (dropped silently for vanished sessions)."""
        for pid, partner in ((a, b), (b, a)):
            session = game.sessions.get(pid)
            if session is None or not session.alive:
                continue
            await session.send(
                {
                    "type": "exchange_delivery",
                    "game_id": game.game_id,
                    "player_id": pid,
                    "partner_id": partner,
                    "t_ms": t_ms,
                    "belief": game.state.beliefs[pid].to_json(),
                }
            )

    async def broadcast_game_over(self, game: HostedGame) -> None:
        if game._game_over_sent or game.state is None:
            return
        game._game_over_sent = True
        game.flush_log()
        state = game.state
        for pid, session in game.sessions.items():
            profile = compute_profile(state.event_log, pid)
            await session.send(
                {
                    "type": "game_over",
                    "game_id": game.game_id,
                    "player_id": pid,
                    "t_ms": state.clock_ms,
                    "winner": state.winner.value if state.winner else None,
                    "reason": state.finish_reason,
                    "profile": {
                        col: getattr(profile, col) for col in PROFILE_COLUMNS
                    },
                }
            )

    async def watchdog(self, game: HostedGame, interval: float = 0.1) -> None:
        """Realtime background task: fire spawns/timeout while players idle."""
        while True:
            await asyncio.sleep(interval)
            if game.state is None:
                continue
            async with game.lock:
                if game.state.is_running():
                    game.advance_clock()
                    game.flush_log()
            if game.state is not None and not game.state.is_running():
                await self.broadcast_game_over(game)
                return

    def drop_session(self, session: Session) -> None:
        # Disconnected players forfeit their stream; the game continues.
        session.alive = False


# -- transports ---------------------------------------------------------------


@dataclass
class WebSocketTransport:
    ws: object

    async def send_obj(self, obj: dict) -> None:
        await self.ws.send_text(json.dumps(obj, separators=(",", ":")))


@dataclass
class TcpTransport:
    writer: asyncio.StreamWriter

    async def send_obj(self, obj: dict) -> None:
        self.writer.write(json.dumps(obj, separators=(",", ":")).encode() + b"\n")
        await self.writer.drain()


def create_app(server: GameServer, static_dir: str | Path | None = None) -> FastAPI:
    """FastAPI app exposing /ws plus the web client's static assets."""
    app = FastAPI(title="project-game")

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        session = Session(transport=WebSocketTransport(ws))
        try:
            while True:
                raw = await ws.receive_text()
                await server.handle_message(session, raw)
        except WebSocketDisconnect:
            pass
        finally:
            server.drop_session(session)

    @app.get("/healthz")
    async def health():
        return {
            "games": {
                gid: {
                    "players": len(g.sessions),
                    "running": bool(g.state and g.state.is_running()),
                }
                for gid, g in server.games.items()
            }
        }

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="app")
    return app


async def serve_tcp(server: GameServer, host: str, port: int):
    async def on_connect(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        session = Session(transport=TcpTransport(writer))
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                line = line.strip()
                if line:
                    await server.handle_message(session, line)
        except (ConnectionError, asyncio.IncompleteReadError):
            pass
        finally:
            server.drop_session(session)
            writer.close()

    return await asyncio.start_server(on_connect, host, port)


def default_log_dir() -> str | None:
    return os.environ.get("PROJECT_GAME_LOG_DIR")

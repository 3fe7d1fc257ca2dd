"""Command-line entry points: serve, tournament, profile."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .agents import StrategyKind, parse_strategy
from .eventlog import read_event_log
from .metrics import compute_profile, compute_profiles, profiles_to_csv
from .model import GameConfig, load_config
from .tournament import ExperimentPlan, default_matchups, emit_report, run_plan


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="project-game",
        description="Project Game simulator, server, and experiment tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the game server")
    serve.add_argument("--bind", default="127.0.0.1:8000", metavar="ADDR:PORT")
    serve.add_argument("--config", help="GameConfig JSON file", default=None)
    mode = serve.add_mutually_exclusive_group()
    mode.add_argument("--realtime", action="store_true",
                      help="action results are withheld for their wall-clock cost")
    mode.add_argument("--fasttime", action="store_true",
                      help="simulated time jumps to each actor's readiness (default)")
    serve.add_argument("--game-id", default="default")
    serve.add_argument("--relaxed", action="store_true",
                       help="multiply all action costs x20 for human play")
    serve.add_argument("--time-scale", type=float, default=1.0,
                       help="realtime speed multiplier (2.0 = twice as fast)")
    serve.add_argument("--tcp-port", type=int, default=None,
                       help="also accept newline-delimited JSON on this TCP port")
    serve.add_argument("--static", default=None,
                       help="serve this directory (web client build) at /")
    serve.add_argument("--seed", type=int, default=None, help="override config seed")

    tour = sub.add_parser("tournament", help="run strategy-pair experiments")
    tour.add_argument("--pair", metavar="A:B", default=None,
                      help="strategies, e.g. teamworker:shaper (default: the standard suite)")
    tour.add_argument("--risks", default="0,0.2,0.5,0.8")
    tour.add_argument("--test-costs", default="200")
    tour.add_argument("--games", type=int, default=200)
    tour.add_argument("--seed", type=int, default=0)
    tour.add_argument("--out", required=True, help="CSV output path")
    tour.add_argument("--plot", default=None, help="SVG chart output path")
    tour.add_argument("--jobs", type=int, default=1)
    tour.add_argument("--logs", default=None, help="directory for per-game JSONL logs")
    tour.add_argument("--no-swap", action="store_true",
                      help="do not swap sides between game halves")

    prof = sub.add_parser("profile", help="compute behavioral profiles from a log")
    prof.add_argument("--log", required=True, help="game JSONL log")
    prof.add_argument("--player", type=int, default=None)
    prof.add_argument("--out", required=True, help="CSV output path")
    return parser


def cmd_serve(args) -> int:
    import uvicorn

    from .server import GameServer, HostedGame, create_app, default_log_dir, serve_tcp

    cfg = load_config(args.config) if args.config else GameConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.relaxed:
        cfg = replace(
            cfg,
            move_cost_ms=cfg.move_cost_ms * 20,
            discovery_cost_ms=cfg.discovery_cost_ms * 20,
            pickup_cost_ms=cfg.pickup_cost_ms * 20,
            place_cost_ms=cfg.place_cost_ms * 20,
            test_cost_ms=cfg.test_cost_ms * 20,
            exchange_cost_ms=cfg.exchange_cost_ms * 20,
        )
    host, _, port = args.bind.rpartition(":")
    server = GameServer()
    game = HostedGame(
        args.game_id,
        cfg,
        realtime=bool(args.realtime),
        time_scale=args.time_scale,
        log_dir=default_log_dir(),
    )
    server.add_game(game)
    app = create_app(server, static_dir=args.static)

    if args.tcp_port is not None or args.realtime:
        import asyncio

        async def main():
            if args.tcp_port is not None:
                await serve_tcp(server, host or "127.0.0.1", args.tcp_port)
            if args.realtime:
                asyncio.get_running_loop().create_task(server.watchdog(game))
            config = uvicorn.Config(app, host=host or "127.0.0.1", port=int(port),
                                    log_level="warning")
            await uvicorn.Server(config).serve()

        asyncio.run(main())
    else:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def cmd_tournament(args) -> int:
    risks = tuple(float(r) for r in args.risks.split(","))
    costs = tuple(int(c) for c in args.test_costs.split(","))
    if args.pair:
        a_name, _, b_name = args.pair.partition(":")
        pair = (parse_strategy(a_name), parse_strategy(b_name))
        plans = [
            ExperimentPlan(
                pair=pair,
                risks=risks,
                test_costs=costs,
                games_per_cell=args.games,
                master_seed=args.seed,
                swap_sides=not args.no_swap,
            )
        ]
    else:
        plans = [
            replace(p, risks=risks, games_per_cell=args.games,
                    master_seed=args.seed, swap_sides=not args.no_swap)
            for p in default_matchups()
        ]
    if args.logs:
        Path(args.logs).mkdir(parents=True, exist_ok=True)
    reports = []
    for plan in plans:
        reports.extend(run_plan(plan, jobs=args.jobs, log_dir=args.logs))
        a, b = plan.pair
        for report in reports[-len(plan.risks) * len(plan.test_costs):]:
            print(
                f"{a.value} vs {b.value} risk={report.risk} cost={report.test_cost}: "
                f"win_rate_a={report.win_rate_a:.3f} "
                f"ci=({report.ci_low:.3f}, {report.ci_high:.3f}) "
                f"draws={report.draws}"
            )
    emit_report(reports, args.out, args.plot)
    print(f"wrote {args.out}" + (f" and {args.plot}" if args.plot else ""))
    return 0


def cmd_profile(args) -> int:
    events = read_event_log(args.log)
    if args.player is not None:
        profiles = [compute_profile(events, args.player)]
    else:
        profiles = compute_profiles(events)
    profiles_to_csv(profiles, args.out)
    print(f"wrote {args.out} ({len(profiles)} profile(s))")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    if args.command == "tournament":
        return cmd_tournament(args)
    return cmd_profile(args)


if __name__ == "__main__":
    sys.exit(main())

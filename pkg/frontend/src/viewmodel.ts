// Pure state reducer over server messages; rendering reads only this.
import {
  applyExchange,
  BeliefMap,
  ingestResult,
} from "./belief.js";
import type { GameStarted, Position, ServerMessage } from "./protocol.js";

export type Phase = "connecting" | "lobby" | "running" | "finished";

export interface ViewModel {
  phase: Phase;
  gameId: string | null;
  playerId: number | null;
  team: "red" | "blue" | null;
  isLeader: boolean;
  cfg: GameStarted["cfg"] | null;
  boardWidth: number;
  boardHeight: number;
  goalArea: { y_min: number; y_max: number } | null;
  players: GameStarted["players"];
  pos: Position | null;
  held: "none" | "untested" | "tested";
  belief: BeliefMap;
  cooldownUntil: number; // simulated ms when we may act again
  simNow: number; // latest simulated time we have seen
  winner: "red" | "blue" | null;
  finishReason: string | null;
  profile: Record<string, number> | null;
  lastError: { error: string; remaining_ms?: number } | null;
  toasts: string[];
}

export function newViewModel(): ViewModel {
  return {
    phase: "connecting",
    gameId: null,
    playerId: null,
    team: null,
    isLeader: false,
    cfg: null,
    boardWidth: 6,
    boardHeight: 18,
    goalArea: null,
    players: [],
    pos: null,
    held: "none",
    belief: new Map(),
    cooldownUntil: 0,
    simNow: 0,
    winner: null,
    finishReason: null,
    profile: null,
    lastError: null,
    toasts: [],
  };
}

function toast(vm: ViewModel, text: string): void {
  vm.toasts.push(text);
  if (vm.toasts.length > 4) vm.toasts.shift();
}

export function applyMessage(vm: ViewModel, msg: ServerMessage): ViewModel {
  switch (msg.type) {
    case "join_confirmed":
      vm.phase = "lobby";
      vm.gameId = msg.game_id;
      vm.playerId = msg.player_id;
      vm.team = msg.team;
      vm.isLeader = msg.is_leader;
      break;
    case "game_started":
      vm.phase = "running";
      vm.cfg = msg.cfg;
      vm.boardWidth = Number(msg.cfg.board_width ?? 6);
      vm.boardHeight = Number(msg.cfg.board_height ?? 18);
      vm.goalArea = msg.goal_area;
      vm.players = msg.players;
      vm.pos = msg.pos;
      break;
    case "action_result": {
      const result = msg.result;
      vm.simNow = Math.max(vm.simNow, result.completed_at_ms);
      vm.cooldownUntil = result.completed_at_ms;
      if (result.ok) {
        if (result.kind === "move") vm.pos = result.pos;
        else if (result.kind === "pick_up") vm.held = "untested";
        else if (result.kind === "test") {
          if (result.payload?.outcome === "genuine") vm.held = "tested";
          else {
            vm.held = "none";
            toast(vm, "risk materialized: sham destroyed");
          }
        } else if (result.kind === "place") {
          vm.held = "none";
          if (result.payload?.outcome === "goal_completed") toast(vm, "goal validated!");
          else if (result.payload?.outcome === "sham_wasted")
            toast(vm, "risk materialized: sham wasted");
        }
      } else if (result.reject) {
        toast(vm, `rejected: ${result.reject}`);
      }
      ingestResult(vm.belief, result);
      break;
    }
    case "exchange_delivery":
      vm.simNow = Math.max(vm.simNow, msg.t_ms);
      applyExchange(vm.belief, msg.belief);
      toast(vm, `exchanged info with player ${msg.partner_id}`);
      break;
    case "game_over":
      vm.phase = "finished";
      vm.winner = msg.winner;
      vm.finishReason = msg.reason;
      vm.profile = msg.profile;
      break;
    case "error":
      vm.lastError = { error: msg.error, remaining_ms: msg.remaining_ms };
      break;
  }
  return vm;
}

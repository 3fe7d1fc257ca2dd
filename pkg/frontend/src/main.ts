// Page wiring: connect, reduce messages into the view model, render.
import { bindKeyboard } from "./keyboard.js";
import { Connection } from "./net.js";
import type { GameAction } from "./protocol.js";
import { renderBoard, renderProfile, renderStatus, renderToasts } from "./render.js";
import { applyMessage, newViewModel } from "./viewmodel.js";

const vm = newViewModel();
const boardEl = document.getElementById("board")!;
const statusEl = document.getElementById("status")!;
const toastsEl = document.getElementById("toasts")!;
const profileEl = document.getElementById("profile")!;
const bannerEl = document.getElementById("banner")!;

let cooldownWallUntil = 0;
let awaitingResult = false;

const params = new URLSearchParams(location.search);
const wsUrl =
  params.get("server") ??
  `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;

const conn = new Connection({
  url: wsUrl,
  gameId: params.get("game") ?? "default",
  name: params.get("name") ?? "human",
  preferredTeam: (params.get("team") as "red" | "blue" | null) ?? undefined,
  onMessage(msg) {
    if (msg.type === "error") {
      if (msg.error === "not_ready" && msg.remaining_ms) {
        cooldownWallUntil = performance.now() + msg.remaining_ms;
        boardEl.classList.add("shake");
        setTimeout(() => boardEl.classList.remove("shake"), 300);
      } else if (msg.error === "game_full") {
        bannerEl.textContent = "game full";
        bannerEl.hidden = false;
      }
      applyMessage(vm, msg);
    } else {
      if (msg.type === "action_result") {
        awaitingResult = false;
        const cost = msg.result.completed_at_ms - msg.t_ms;
        cooldownWallUntil = Math.max(cooldownWallUntil, performance.now());
        void cost;
      }
      applyMessage(vm, msg);
    }
    draw();
  },
  onClose() {
    if (vm.phase !== "finished") {
      bannerEl.textContent = "disconnected";
      bannerEl.hidden = false;
    }
    draw();
  },
});

function submit(action: GameAction): void {
  if (vm.phase !== "running" || awaitingResult) return;
  if (performance.now() < cooldownWallUntil) return;
  awaitingResult = true;
  conn.submit(action);
}

bindKeyboard(window, vm, submit);

for (const button of document.querySelectorAll<HTMLButtonElement>("[data-action]")) {
  button.addEventListener("click", () => {
    const kind = button.dataset.action!;
    if (kind === "exchange") {
      const mates = vm.players.filter(
        (p) => p.team === vm.team && p.player_id !== vm.playerId
      );
      if (mates.length) {
        submit({
          type: "exchange_info",
          target_player_id: mates[Math.floor(Math.random() * mates.length)].player_id,
        });
      }
    } else if (kind === "pickup_place") {
      submit(vm.held === "none" ? { type: "pick_up" } : { type: "place" });
    } else {
      submit({ type: kind } as GameAction);
    }
  });
}

const autoAccept = document.getElementById("auto-accept") as HTMLInputElement | null;
autoAccept?.addEventListener("change", () => {
  conn.setExchangePolicy(autoAccept.checked);
});

function draw(): void {
  renderBoard(boardEl as HTMLElement, vm);
  renderStatus(statusEl as HTMLElement, vm,
    Math.max(0, Math.round(cooldownWallUntil - performance.now())));
  renderToasts(toastsEl as HTMLElement, vm);
  renderProfile(profileEl as HTMLElement, vm);
}

setInterval(draw, 120);
draw();

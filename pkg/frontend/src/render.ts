// DOM rendering of the player's partial board view.
import { keyOf } from "./belief.js";
import type { ViewModel } from "./viewmodel.js";

export function renderBoard(root: HTMLElement, vm: ViewModel): void {
  root.style.setProperty("--cols", String(vm.boardWidth));
  root.innerHTML = "";
  if (vm.phase === "connecting" || vm.phase === "lobby") {
    return;
  }
  for (let y = 0; y < vm.boardHeight; y++) {
    for (let x = 0; x < vm.boardWidth; x++) {
      const cell = document.createElement("div");
      cell.className = "cell " + bandClass(vm, y);
      const fb = vm.belief.get(keyOf(x, y));
      if (fb) {
        if (fb.goal_status === "goal") cell.classList.add("goal");
        else if (fb.goal_status === "completed_goal") cell.classList.add("goal-done");
        else if (fb.goal_status === "no_goal") cell.classList.add("no-goal");
        if (fb.distance_to_piece !== null) {
          const span = document.createElement("span");
          span.className = "dist";
          if (fb.distance_to_piece === 0) cell.classList.add("piece");
          span.textContent = String(fb.distance_to_piece);
          const age = vm.simNow - fb.last_seen_ms;
          span.style.opacity = age > 900 ? "0.3" : age > 300 ? "0.6" : "1";
          cell.appendChild(span);
        }
      }
      if (vm.pos && vm.pos.x === x && vm.pos.y === y) {
        cell.classList.add("me");
        const marker = document.createElement("span");
        marker.className = "marker";
        marker.textContent = vm.held === "none" ? "●" : vm.held === "tested" ? "✔" : "■";
        cell.appendChild(marker);
      }
      root.appendChild(cell);
    }
  }
}

function rowsOf(vm: ViewModel): number {
  return vm.goalArea ? vm.goalArea.y_max - vm.goalArea.y_min + 1 : 6;
}

function bandClass(vm: ViewModel, y: number): string {
  const gh = rowsOf(vm);
  if (y < gh) return "band-red";
  if (y >= vm.boardHeight - gh) return "band-blue";
  return "band-task";
}

export function renderStatus(el: HTMLElement, vm: ViewModel, wallCooldownMs: number): void {
  const bits: string[] = [];
  if (vm.phase === "connecting") bits.push("connecting…");
  if (vm.phase === "lobby") bits.push(`joined as player ${vm.playerId} (${vm.team}); waiting for players`);
  if (vm.phase === "running") {
    bits.push(`player ${vm.playerId} · ${vm.team}${vm.isLeader ? " · leader" : ""}`);
    bits.push(`holding: ${vm.held}`);
    bits.push(wallCooldownMs > 0 ? `cooldown ${wallCooldownMs}ms` : "ready");
  }
  if (vm.phase === "finished") {
    bits.push(vm.winner ? `${vm.winner} team wins (${vm.finishReason})` : `draw (${vm.finishReason})`);
  }
  el.textContent = bits.join(" · ");
}

export function renderToasts(el: HTMLElement, vm: ViewModel): void {
  el.innerHTML = "";
  for (const text of vm.toasts.slice(-4)) {
    const div = document.createElement("div");
    div.className = "toast";
    div.textContent = text;
    el.appendChild(div);
  }
}

export function renderProfile(el: HTMLElement, vm: ViewModel): void {
  if (!vm.profile) {
    el.hidden = true;
    return;
  }
  el.hidden = false;
  const rows = Object.entries(vm.profile)
    .map(([key, value]) => `<tr><td>${key}</td><td>${fmt(value)}</td></tr>`)
    .join("");
  el.innerHTML = `<h3>your profile</h3><table>${rows}</table>`;
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(3);
}

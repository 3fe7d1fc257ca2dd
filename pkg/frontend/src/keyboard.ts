// Keyboard bindings: arrows move, D discover, P pick up / place (contextual),
// T test, E exchange with the next teammate.
import type { GameAction } from "./protocol.js";
import type { ViewModel } from "./viewmodel.js";

export function actionForKey(key: string, vm: ViewModel): GameAction | null {
  switch (key) {
    case "ArrowUp":
      return { type: "move", direction: "north" };
    case "ArrowDown":
      return { type: "move", direction: "south" };
    case "ArrowRight":
      return { type: "move", direction: "east" };
    case "ArrowLeft":
      return { type: "move", direction: "west" };
    case "d":
    case "D":
      return { type: "discover" };
    case "t":
    case "T":
      return { type: "test" };
    case "p":
    case "P":
      // contextual: place when holding, pick up otherwise
      return vm.held === "none" ? { type: "pick_up" } : { type: "place" };
    case "e":
    case "E": {
      const mates = vm.players.filter(
        (p) => p.team === vm.team && p.player_id !== vm.playerId
      );
      if (!mates.length) return null;
      const target = mates[Math.floor(Math.random() * mates.length)];
      return { type: "exchange_info", target_player_id: target.player_id };
    }
    default:
      return null;
  }
}

export function bindKeyboard(
  target: Pick<Window, "addEventListener">,
  vm: ViewModel,
  submit: (action: GameAction) => void
): void {
  target.addEventListener("keydown", (ev: Event) => {
    const key = (ev as KeyboardEvent).key;
    const action = actionForKey(key, vm);
    if (action) {
      (ev as KeyboardEvent).preventDefault();
      submit(action);
    }
  });
}

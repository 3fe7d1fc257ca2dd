// Socket wrapper: join, submit actions, receive typed messages.
import type { GameAction, ServerMessage } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";

export interface SessionOptions {
  url: string;
  gameId: string;
  name: string;
  preferredTeam?: "red" | "blue";
  onMessage: (msg: ServerMessage) => void;
  onClose: () => void;
}

export class Connection {
  private ws: WebSocket;

  constructor(private opts: SessionOptions) {
    this.ws = new WebSocket(opts.url);
    this.ws.onopen = () => {
      this.send({
        type: "join_game",
        game_id: opts.gameId,
        name: opts.name,
        preferred_team: opts.preferredTeam,
        mode: "human",
      });
    };
    this.ws.onmessage = (ev) => {
      try {
        opts.onMessage(parseServerMessage(String(ev.data)));
      } catch (err) {
        console.error("bad server message", err, ev.data);
      }
    };
    this.ws.onclose = () => opts.onClose();
    this.ws.onerror = () => opts.onClose();
  }

  send(obj: unknown): void {
    if (this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(obj));
    }
  }

  submit(action: GameAction): void {
    this.send({ type: "action_request", action });
  }

  setExchangePolicy(accept: boolean): void {
    this.send({ type: "exchange_policy", accept });
  }

  close(): void {
    this.ws.close();
  }
}

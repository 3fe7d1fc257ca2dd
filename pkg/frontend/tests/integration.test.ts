// Live end-to-end session against the real Python server: join, perform all
// six action kinds, receive game_over with a populated profile.
import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import type { ServerMessage } from "../src/protocol.js";
import { parseServerMessage } from "../src/protocol.js";

const PORT = 8931;
let server: ChildProcess;

class TestSession {
  ws!: WebSocket;
  inbox: ServerMessage[] = [];
  waiters: ((msg: ServerMessage) => void)[] = [];

  async connect(): Promise<void> {
    this.ws = new WebSocket(`ws://127.0.0.1:${PORT}/ws`);
    this.ws.on("message", (data) => {
      const msg = parseServerMessage(data.toString());
      const waiter = this.waiters.shift();
      if (waiter) waiter(msg);
      else this.inbox.push(msg);
    });
    await new Promise<void>((resolve, reject) => {
      this.ws.once("open", resolve);
      this.ws.once("error", reject);
    });
  }

  send(obj: unknown): void {
    this.ws.send(JSON.stringify(obj));
  }

  next(timeoutMs = 15000): Promise<ServerMessage> {
    const queued = this.inbox.shift();
    if (queued) return Promise.resolve(queued);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for message")),
        timeoutMs
      );
      this.waiters.push((msg) => {
        clearTimeout(timer);
        resolve(msg);
      });
    });
  }

  async nextOfType<T extends ServerMessage["type"]>(
    type: T,
    timeoutMs = 15000
  ): Promise<Extract<ServerMessage, { type: T }>> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const msg = await this.next(Math.max(1, deadline - Date.now()));
      if (msg.type === type) return msg as Extract<ServerMessage, { type: T }>;
    }
  }

  close(): void {
    this.ws.close();
  }
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "pg-it-"));
  const cfgPath = join(dir, "cfg.json");
  // short cap so the scripted game always ends quickly via timeout
  writeFileSync(cfgPath, JSON.stringify({ seed: 99, max_game_time_ms: 30000 }));
  server = spawn(
    "python3",
    ["-m", "project_game.cli", "serve", "--bind", `127.0.0.1:${PORT}`,
     "--config", cfgPath, "--fasttime"],
    { cwd: join(__dirname, "..", ".."), stdio: "ignore" }
  );
  // wait for the HTTP endpoint to come up
  for (let i = 0; i < 100; i++) {
    try {
      const res = await fetch(`http://127.0.0.1:${PORT}/healthz`);
      if (res.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("server did not start");
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("scripted human session", () => {
  it("joins, performs all six actions, and receives a profile", async () => {
    const sessions: TestSession[] = [];
    for (let i = 0; i < 6; i++) {
      const s = new TestSession();
      await s.connect();
      s.send({ type: "join_game", game_id: "default", name: `bot${i}`, mode: "human" });
      const confirmed = await s.nextOfType("join_confirmed");
      expect(confirmed.player_id).toBe(i);
      sessions.push(s);
    }
    const started = await sessions[0].nextOfType("game_started");
    expect(started.cfg.board_width).toBe(6);
    expect(started.players.length).toBe(6);
    for (const s of sessions.slice(1)) await s.nextOfType("game_started");

    const hero = sessions[0];
    const seen = new Set<string>();
    const submit = async (action: object) => {
      hero.send({ type: "action_request", action });
      const reply = await hero.nextOfType("action_result");
      seen.add(reply.result.kind);
      return reply.result;
    };

    await submit({ type: "discover" });
    await submit({ type: "move", direction: "south" });
    await submit({ type: "pick_up" }); // may be rejected: still performed
    await submit({ type: "test" });
    await submit({ type: "place" });
    const exchange = await submit({ type: "exchange_info", target_player_id: 1 });
    expect(exchange.payload?.outcome).toBe("accepted");
    await hero.nextOfType("exchange_delivery");
    expect([...seen].sort()).toEqual(
      ["discover", "exchange_info", "move", "pick_up", "place", "test"].sort()
    );

    // burn simulated time with discovers until the cap ends the game
    let over: Extract<ServerMessage, { type: "game_over" }> | null = null;
    for (let i = 0; i < 400 && !over; i++) {
      hero.send({ type: "action_request", action: { type: "discover" } });
      for (;;) {
        const msg = await hero.next();
        if (msg.type === "game_over") {
          over = msg;
          break;
        }
        if (msg.type === "action_result") break;
        if (msg.type === "error") {
          expect(msg.error).toBe("game_finished");
          break;
        }
      }
      if (over) break;
    }
    expect(over).not.toBeNull();
    expect(over!.reason).toBe("timeout");
    expect(over!.profile.player_id).toBe(0);
    expect(over!.profile.actions_total).toBeGreaterThan(5);
    expect(over!.profile.discoveries_per_min).toBeGreaterThan(0);

    for (const s of sessions) s.close();
  }, 60000);
});

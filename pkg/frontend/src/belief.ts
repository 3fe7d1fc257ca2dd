// Client-side fog-of-war belief, kept byte-equal to the server's store by
// applying the same ingestion rules to the same delivered results.
import type { ActionResult, FieldBelief, GoalStatus } from "./protocol.js";

export type BeliefMap = Map<string, FieldBelief>;

export const keyOf = (x: number, y: number) => `${x},${y}`;

function entry(belief: BeliefMap, key: string, t: number): FieldBelief {
  let fb = belief.get(key);
  if (!fb) {
    fb = { last_seen_ms: t, distance_to_piece: null, goal_status: "unknown" };
    belief.set(key, fb);
  }
  return fb;
}

/** Fold one of our own action results into the belief.
 *
 * Discover writes distances everywhere and goal status for visible fields;
 * pick-up attempts (successful or empty-handed misses) clear the field's
 * distance estimate; place outcomes settle goal status except a sham waste,
 * which reveals nothing. Timestamps are the action's completion time.
 */
export function ingestResult(belief: BeliefMap, result: ActionResult): void {
  const t = result.completed_at_ms;
  if (result.kind === "discover" && result.ok) {
    for (const reading of result.payload?.readings ?? []) {
      const fb = entry(belief, keyOf(reading.pos.x, reading.pos.y), t);
      fb.last_seen_ms = t;
      fb.distance_to_piece = reading.distance;
      if (reading.goal_status !== "not_visible") {
        fb.goal_status = reading.goal_status;
      }
    }
  } else if (
    result.kind === "pick_up" &&
    (result.ok || result.reject === "no_piece_here")
  ) {
    const fb = entry(belief, keyOf(result.pos.x, result.pos.y), t);
    fb.last_seen_ms = t;
    fb.distance_to_piece = null;
  } else if (
    result.kind === "place" &&
    result.ok &&
    result.payload?.outcome !== "sham_wasted"
  ) {
    const fb = entry(belief, keyOf(result.pos.x, result.pos.y), t);
    fb.last_seen_ms = t;
    if (result.payload?.outcome === "goal_completed") {
      fb.goal_status = "completed_goal";
    } else if (result.payload?.outcome === "not_a_goal") {
      fb.goal_status = "no_goal";
    }
  }
}

/** An accepted exchange delivers the full merged belief: replace ours. */
export function applyExchange(
  belief: BeliefMap,
  delivered: Record<string, FieldBelief>
): void {
  belief.clear();
  for (const [key, fb] of Object.entries(delivered)) {
    belief.set(key, { ...fb });
  }
}

export function beliefToJson(belief: BeliefMap): Record<string, FieldBelief> {
  const out: Record<string, FieldBelief> = {};
  const keys = [...belief.keys()].sort((a, b) => {
    const [ax, ay] = a.split(",").map(Number);
    const [bx, by] = b.split(",").map(Number);
    return ax - bx || ay - by;
  });
  for (const key of keys) out[key] = { ...belief.get(key)! };
  return out;
}

export function statusAt(belief: BeliefMap, x: number, y: number): GoalStatus {
  return belief.get(keyOf(x, y))?.goal_status ?? "unknown";
}

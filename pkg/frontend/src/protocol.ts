// Wire protocol schemas. Field names here are the server contract.
import { z } from "zod";

export const PositionSchema = z.object({ x: z.number().int(), y: z.number().int() });
export type Position = z.infer<typeof PositionSchema>;

export const GoalStatusSchema = z.enum([
  "unknown",
  "goal",
  "no_goal",
  "completed_goal",
  "not_visible",
]);
export type GoalStatus = z.infer<typeof GoalStatusSchema>;

export const DiscoverReadingSchema = z.object({
  pos: PositionSchema,
  distance: z.number().int().nullable(),
  goal_status: GoalStatusSchema,
});

export const ActionResultSchema = z.object({
  ok: z.boolean(),
  kind: z.enum(["move", "discover", "pick_up", "test", "place", "exchange_info"]),
  player_id: z.number().int(),
  completed_at_ms: z.number().int(),
  pos: PositionSchema,
  payload: z
    .object({
      new_pos: PositionSchema.optional(),
      readings: z.array(DiscoverReadingSchema).optional(),
      piece_id: z.number().int().nullable().optional(),
      outcome: z.string().optional(),
      target_player_id: z.number().int().optional(),
    })
    .nullable(),
  reject: z.string().nullable(),
});
export type ActionResult = z.infer<typeof ActionResultSchema>;

export const FieldBeliefSchema = z.object({
  last_seen_ms: z.number().int(),
  distance_to_piece: z.number().int().nullable(),
  goal_status: GoalStatusSchema,
});
export type FieldBelief = z.infer<typeof FieldBeliefSchema>;

export const JoinConfirmedSchema = z.object({
  type: z.literal("join_confirmed"),
  game_id: z.string(),
  player_id: z.number().int(),
  team: z.enum(["red", "blue"]),
  is_leader: z.boolean(),
});

export const GameStartedSchema = z.object({
  type: z.literal("game_started"),
  game_id: z.string(),
  t_ms: z.number().int(),
  player_id: z.number().int(),
  cfg: z.record(z.string(), z.union([z.number(), z.string(), z.boolean()])),
  pos: PositionSchema,
  goal_area: z.object({ y_min: z.number().int(), y_max: z.number().int() }),
  players: z.array(
    z.object({
      player_id: z.number().int(),
      team: z.enum(["red", "blue"]),
      is_leader: z.boolean(),
      name: z.string(),
    })
  ),
});
export type GameStarted = z.infer<typeof GameStartedSchema>;

export const ActionResultMsgSchema = z.object({
  type: z.literal("action_result"),
  game_id: z.string(),
  player_id: z.number().int(),
  t_ms: z.number().int(),
  result: ActionResultSchema,
});

export const ExchangeDeliverySchema = z.object({
  type: z.literal("exchange_delivery"),
  game_id: z.string(),
  player_id: z.number().int(),
  partner_id: z.number().int(),
  t_ms: z.number().int(),
  belief: z.record(z.string(), FieldBeliefSchema),
});

export const GameOverSchema = z.object({
  type: z.literal("game_over"),
  game_id: z.string(),
  player_id: z.number().int().optional(),
  t_ms: z.number().int(),
  winner: z.enum(["red", "blue"]).nullable(),
  reason: z.string(),
  profile: z.record(z.string(), z.number()),
});

export const ErrorMsgSchema = z.object({
  type: z.literal("error"),
  error: z.string(),
  detail: z.string().optional(),
  remaining_ms: z.number().optional(),
});

export const ServerMessageSchema = z.discriminatedUnion("type", [
  JoinConfirmedSchema,
  GameStartedSchema,
  ActionResultMsgSchema,
  ExchangeDeliverySchema,
  GameOverSchema,
  ErrorMsgSchema,
]);
export type ServerMessage = z.infer<typeof ServerMessageSchema>;

export type GameAction =
  | { type: "move"; direction: "north" | "south" | "east" | "west" }
  | { type: "discover" }
  | { type: "pick_up" }
  | { type: "test" }
  | { type: "place" }
  | { type: "exchange_info"; target_player_id: number };

export function parseServerMessage(raw: string): ServerMessage {
  return ServerMessageSchema.parse(JSON.parse(raw));
}

/**
 * Wire types for the mission service WebSocket protocol (schema 1).
 *
 * Every message in either direction is one JSON object per text frame.
 * The server opens with a hello frame carrying the command vocabulary
 * and the quantization table; the console refuses to operate against a
 * schema or table version it was not built for, because field ranges in
 * the composer are only meaningful against the table actually enforced
 * on the other end.
 */

export const EXPECTED_SCHEMA = 1;
export const EXPECTED_TABLE_VERSION = 1;

export interface RoleSpec {
  scale: number;
  offset: number;
  unit: string;
  min: number;
  max: number;
}

export interface PatternInfo {
  id: number;
  /** six wire slots; null marks a slot this pattern leaves empty */
  params: (string | null)[];
}

export interface HelloFrame {
  type: "hello";
  schema: number;
  client_id: number;
  vehicle: string;
  ber: number;
  running: boolean;
  token_owner: number | null;
  patterns: Record<string, PatternInfo>;
  quantization: { version: number; roles: Record<string, RoleSpec> };
}

export interface TelemetryFrame {
  type: "telemetry";
  t: number;
  x: number;
  y: number;
  z: number;
  yaw: number;
  roll: number;
  u: number;
  w: number;
  phase: Phase;
  plan_id: number;
  wp_index: number;
}

export interface PlanFrame {
  type: "plan";
  plan_id: number;
  pattern: string | null;
  closed: boolean;
  est_duration: number;
  /** [x, y, depth] triples */
  waypoints: [number, number, number][];
}

export interface DispositionFrame {
  type: "disposition";
  t: number;
  disposition: DispositionKind;
  detail: string;
  pattern: string | null;
  plan_id: number | null;
  corrected_positions: number[];
}

export interface StatusFrame {
  type: "status";
  schema: number;
  running: boolean;
  ber: number;
  vehicle: string;
  t: number;
}

export interface TokenFrame {
  type: "token";
  owner: number | null;
}

export interface ResetFrame {
  type: "reset";
  seed: number;
}

export interface ErrorFrame {
  type: "error";
  message: string;
}

export type ServerFrame =
  | HelloFrame
  | TelemetryFrame
  | PlanFrame
  | DispositionFrame
  | StatusFrame
  | TokenFrame
  | ResetFrame
  | ErrorFrame;

export type Phase =
  | "idle"
  | "executing"
  | "re_tasked"
  | "completed"
  | "command_rejected";

export type DispositionKind =
  | "clean"
  | "corrected"
  | "fec_fail"
  | "frame_fail"
  | "malformed";

const FRAME_TYPES = new Set([
  "hello", "telemetry", "plan", "disposition", "status", "token",
  "reset", "error",
]);

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

/**
 * Parse one inbound text frame. Returns null for anything that is not
 * a known, structurally sound frame; the caller treats null as a
 * protocol error to surface, never as a crash.
 */
export function parseServerFrame(text: string): ServerFrame | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (!isObject(raw) || typeof raw.type !== "string") return null;
  if (!FRAME_TYPES.has(raw.type)) return null;

  switch (raw.type) {
    case "hello":
      if (
        typeof raw.schema !== "number" ||
        typeof raw.client_id !== "number" ||
        !isObject(raw.patterns) ||
        !isObject(raw.quantization)
      ) {
        return null;
      }
      break;
    case "telemetry":
      if (typeof raw.t !== "number" || typeof raw.phase !== "string") {
        return null;
      }
      break;
    case "plan":
      if (typeof raw.plan_id !== "number" || !Array.isArray(raw.waypoints)) {
        return null;
      }
      break;
    case "disposition":
      if (typeof raw.disposition !== "string") return null;
      break;
    case "token":
      if (!("owner" in raw)) return null;
      break;
    case "error":
      if (typeof raw.message !== "string") return null;
      break;
  }
  return raw as unknown as ServerFrame;
}

/** Reject sessions this console was not built for. */
export function compatibilityError(hello: HelloFrame): string | null {
  if (hello.schema !== EXPECTED_SCHEMA) {
    return `server speaks schema ${hello.schema}, console expects ${EXPECTED_SCHEMA}`;
  }
  if (hello.quantization.version !== EXPECTED_TABLE_VERSION) {
    return (
      `server quantization table v${hello.quantization.version}, ` +
      `console expects v${EXPECTED_TABLE_VERSION}`
    );
  }
  return null;
}

export type ClientMessage =
  | { type: "send_command"; pattern: string; params: Record<string, number> }
  | { type: "set_ber"; ber: number }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "reset"; seed?: number }
  | { type: "acquire_token" }
  | { type: "release_token" };

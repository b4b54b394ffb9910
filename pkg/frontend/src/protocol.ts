// Wire protocol shared with the shadowsim service: versioned JSON messages,
// one per WebSocket frame, each carrying v / type / session / seq.

export const PROTOCOL_VERSION = 1;

export interface SurfacePointWire {
  p: [number, number, number];
  kind: string;
}

export interface TickRecordWire {
  k: number;
  robot: { r_w: number; beta_w: number };
  setpoint: { r_v: number; beta_v: number };
  error: [number, number];
  u: [number, number];
  light_pose: { tilt: number; pan: number };
  tip: SurfacePointWire;
  footprint: SurfacePointWire[];
  saturated: [boolean, boolean];
  clamped: boolean;
  assumption_violated: boolean;
  // Global positions the service attaches so clients never do coordinate math.
  robot_xy?: [number, number];
  setpoint_xy?: [number, number];
}

export interface MetricsWire {
  max_dalpha: number;
  rms_dalpha: number;
  max_dgamma: number;
  rms_dgamma: number;
  rms_error: number;
  visibility_fraction: number;
  convergence_tick: number | null;
}

export type ServerMessage =
  | { type: "tick"; session: string; seq: number; record: TickRecordWire }
  | { type: "metrics"; session: string; seq: number; metrics: MetricsWire }
  | { type: "error"; session: string; seq: number; code: string; detail: string };

export class ProtocolError extends Error {}

function isNumberPair(v: unknown): v is [number, number] {
  return Array.isArray(v) && v.length === 2 &&
    typeof v[0] === "number" && typeof v[1] === "number";
}

function checkRecord(rec: unknown): TickRecordWire {
  const r = rec as TickRecordWire;
  if (
    typeof r !== "object" || r === null ||
    typeof r.k !== "number" ||
    typeof r.robot?.r_w !== "number" ||
    typeof r.setpoint?.r_v !== "number" ||
    typeof r.light_pose?.tilt !== "number" ||
    !Array.isArray(r.footprint) ||
    !isNumberPair(r.error) || !isNumberPair(r.u)
  ) {
    throw new ProtocolError("malformed tick record");
  }
  return r;
}

export function parseServerMessage(raw: string): ServerMessage {
  let doc: Record<string, unknown>;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new ProtocolError("invalid JSON from service");
  }
  if (typeof doc !== "object" || doc === null) {
    throw new ProtocolError("message must be an object");
  }
  if (doc.v !== PROTOCOL_VERSION) {
    throw new ProtocolError(`unsupported protocol version ${String(doc.v)}`);
  }
  if (typeof doc.seq !== "number" || typeof doc.session !== "string") {
    throw new ProtocolError("message is missing session/seq");
  }
  const base = { session: doc.session as string, seq: doc.seq as number };
  switch (doc.type) {
    case "tick":
      return { type: "tick", ...base, record: checkRecord(doc.record) };
    case "metrics":
      return { type: "metrics", ...base, metrics: doc.metrics as MetricsWire };
    case "error":
      return {
        type: "error", ...base,
        code: String(doc.code), detail: String(doc.detail),
      };
    default:
      throw new ProtocolError(`unknown server message type ${String(doc.type)}`);
  }
}

export interface CommandPayload {
  heading_deg?: number;
  speed?: number;
  waypoint?: { r_w: number; beta_w_deg: number };
}

export function makeClientMessage(
  type: "init" | "command" | "mode",
  seq: number,
  payload: Record<string, unknown>,
): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type, session: "client", seq, ...payload });
}

/** Detects gaps or regressions in the per-session server sequence numbers. */
export class SequenceTracker {
  private next: number | null = null;

  expect(seq: number): void {
    if (this.next !== null && seq !== this.next) {
      throw new ProtocolError(`sequence gap: expected ${this.next}, got ${seq}`);
    }
    this.next = seq + 1;
  }

  reset(): void {
    this.next = null;
  }
}

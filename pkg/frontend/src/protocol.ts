/**
 * Session wire protocol: JSON frames {kind, seq, payload} over WebSocket.
 * The server speaks hello/observation/result/annotation/done/error; the
 * client speaks hello/action/annotation. Sequence numbers strictly increase
 * per sender.
 */

export type ServerKind =
  | "hello"
  | "observation"
  | "result"
  | "annotation"
  | "done"
  | "error";

export interface Frame {
  kind: string;
  seq: number;
  payload: Record<string, unknown>;
}

export interface RoomSummary {
  id: string;
  label: string;
  region: [number, number, number, number];
  entry_point: [number, number];
}

export interface SceneSummary {
  rooms: RoomSummary[];
  doorways: { rooms: [string, string]; segment: [number, number][] }[];
  room_options: string[];
  affordances: Record<string, string>;
}

export interface VisibleEntry {
  id: string;
  class: string;
  states: Record<string, unknown>;
  near: boolean;
}

export interface Observation {
  step: number;
  room_id: string | null;
  room_label: string | null;
  visible: VisibleEntry[];
  holding: string | null;
  highlighted: string | null;
  room_options: string[];
  last_action_result: Record<string, unknown> | null;
  last_grounding: unknown;
}

export interface MapMarker {
  id: string;
  class: string;
  position: [number, number] | null;
  goal_relevant: boolean;
}

export interface ObservationPayload {
  observation: Observation;
  agent: { position: [number, number]; yaw: number; pitch: number };
  markers: MapMarker[];
  group_steps: number[];
  state_hash: string;
}

export interface ActionBody {
  name: string;
  target: string | null;
  amount: number | null;
}

export interface ResultPayload {
  action: ActionBody;
  result: {
    ok: boolean;
    reason: string | null;
    changes: unknown[];
    pose_delta: Record<string, unknown>;
    message: string;
  };
  grounding: "ok" | { kind: string; detail: string };
  state_hash: string;
  satisfied: boolean;
  group_steps: number[];
}

export interface Annotation {
  executable: boolean;
  clear: boolean;
  reachable: boolean;
  notes: string;
}

export function encodeFrame(kind: string, seq: number, payload: unknown): string {
  return JSON.stringify({ kind, seq, payload });
}

export function decodeFrame(raw: string): Frame {
  const data = JSON.parse(raw);
  if (typeof data.kind !== "string" || typeof data.seq !== "number") {
    throw new Error(`malformed frame: ${raw.slice(0, 120)}`);
  }
  return data as Frame;
}

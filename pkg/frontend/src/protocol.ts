// Message types of the session protocol (docs/protocol.md), verbatim.
// One JSON object per websocket text frame / TCP line.

export type Cell = [number, number];
export type PlanPair = [Cell, Cell];

export interface PatternTag {
  family: "straight" | "transposed";
  t: number;
}

export interface StateSnapshot {
  m: number;
  n: number;
  variant: string;
  round: number;
  cells: Cell[];
  hash: string;
  pattern: PatternTag;
}

export interface SessionCreated {
  type: "SESSION_CREATED";
  id: string;
  state: StateSnapshot;
}

export interface MoveReport {
  type: "MOVE_REPORT";
  id: string;
  attack: Cell;
  plan: PlanPair[];
  state: StateSnapshot;
  invariant_flags: Record<string, boolean>;
}

export interface Snapshot {
  type: "SNAPSHOT";
  id: string;
  state: StateSnapshot;
}

export interface HintResult {
  type: "HINT_RESULT";
  id: string;
  cell: Cell;
}

export interface Closed {
  type: "CLOSED";
  id: string;
}

export interface Rejected {
  type: "REJECTED";
  reason: string;
  cell?: Cell;
  id?: string;
  detail?: string;
}

export interface ProtocolError {
  type: "PROTOCOL_ERROR";
  detail: string;
  position?: number;
}

export type ServerMessage =
  | SessionCreated
  | MoveReport
  | Snapshot
  | HintResult
  | Closed
  | Rejected
  | ProtocolError;

export type ClientMessage =
  | { type: "NEW_SESSION"; m: number; n: number; variant: string }
  | { type: "ATTACK"; id: string; cell: Cell }
  | { type: "UNDO"; id: string }
  | { type: "RESUME"; id: string }
  | { type: "HINT"; id: string }
  | { type: "CLOSE"; id: string };

export function encode(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function decode(line: string): ServerMessage {
  const doc = JSON.parse(line) as { type?: string };
  if (typeof doc.type !== "string") {
    throw new Error("server message without a type");
  }
  return doc as ServerMessage;
}

export function cellKey(cell: Cell): string {
  return `${cell[0]},${cell[1]}`;
}

// Board view model: a pure reducer over server messages. It holds exactly
// what the server last said -- guard cells, pattern tag, invariant flags,
// round counter, the last plan (for arrow animation) -- and no game logic
// of its own.

import {
  Cell,
  PlanPair,
  Rejected,
  ServerMessage,
  StateSnapshot,
  cellKey,
} from "./protocol.js";

export interface ToastEvent {
  reason: string;
  cell?: Cell;
}

export class BoardViewModel {
  sessionId: string | null = null;
  m = 0;
  n = 0;
  variant = "";
  round = 0;
  pattern: { family: string; t: number } | null = null;
  flags: Record<string, boolean> = {};
  hash = "";
  lastPlan: PlanPair[] = [];
  lastAttack: Cell | null = null;
  hint: Cell | null = null;
  lastToast: ToastEvent | null = null;
  private guards = new Set<string>();

  apply(msg: ServerMessage): void {
    switch (msg.type) {
      case "SESSION_CREATED":
        this.sessionId = msg.id;
        this.lastPlan = [];
        this.lastAttack = null;
        this.setSnapshot(msg.state);
        break;
      case "MOVE_REPORT":
        this.lastPlan = msg.plan.filter(
          ([a, b]) => a[0] !== b[0] || a[1] !== b[1],
        );
        this.lastAttack = msg.attack;
        this.flags = { ...msg.invariant_flags };
        this.setSnapshot(msg.state);
        break;
      case "SNAPSHOT":
        this.lastPlan = [];
        this.lastAttack = null;
        this.setSnapshot(msg.state);
        break;
      case "HINT_RESULT":
        this.hint = msg.cell;
        break;
      case "REJECTED":
        this.lastToast = { reason: msg.reason, cell: (msg as Rejected).cell };
        break;
      case "CLOSED":
        this.sessionId = null;
        break;
      case "PROTOCOL_ERROR":
        this.lastToast = { reason: `protocol error: ${msg.detail}` };
        break;
    }
  }

  private setSnapshot(state: StateSnapshot): void {
    this.m = state.m;
    this.n = state.n;
    this.variant = state.variant;
    this.round = state.round;
    this.pattern = { ...state.pattern };
    this.hash = state.hash;
    this.hint = null;
    this.guards = new Set(state.cells.map(cellKey));
  }

  hasGuard(row: number, col: number): boolean {
    return this.guards.has(`${row},${col}`);
  }

  guardCount(): number {
    return this.guards.size;
  }

  isCorner(row: number, col: number): boolean {
    return (
      (row === 0 || row === this.m - 1) && (col === 0 || col === this.n - 1)
    );
  }

  /** Cell-for-cell projection used by tests and debugging. */
  toMatrix(): string[] {
    const rows: string[] = [];
    for (let r = 0; r < this.m; r++) {
      let line = "";
      for (let c = 0; c < this.n; c++) {
        line += this.hasGuard(r, c) ? "#" : ".";
      }
      rows.push(line);
    }
    return rows;
  }
}

export function matrixFromSnapshot(state: StateSnapshot): string[] {
  const guards = new Set(state.cells.map(cellKey));
  const rows: string[] = [];
  for (let r = 0; r < state.m; r++) {
    let line = "";
    for (let c = 0; c < state.n; c++) {
      line += guards.has(`${r},${c}`) ? "#" : ".";
    }
    rows.push(line);
  }
  return rows;
}

// Game client: turns UI actions into protocol messages and feeds every
// server message into the view model. Actions issued while a move
// animation is playing are queued, preserving message order.

import { BoardViewModel } from "./board.js";
import { Cell, ClientMessage, ServerMessage } from "./protocol.js";
import { Transport } from "./transport.js";

export interface ClientOptions {
  onUpdate?: (vm: BoardViewModel, msg: ServerMessage) => void;
  animationMs?: number;
}

export class GameClient {
  readonly vm = new BoardViewModel();
  private queue: ClientMessage[] = [];
  private busyUntil = 0;
  private readonly animationMs: number;

  constructor(
    private transport: Transport,
    private options: ClientOptions = {},
  ) {
    this.animationMs = options.animationMs ?? 350;
    transport.onMessage((msg) => this.receive(msg));
  }

  newGame(m: number, n: number, variant: string): void {
    this.enqueue({ type: "NEW_SESSION", m, n, variant });
  }

  attack(cell: Cell): void {
    if (!this.vm.sessionId) return;
    this.enqueue({ type: "ATTACK", id: this.vm.sessionId, cell });
  }

  undo(): void {
    if (!this.vm.sessionId) return;
    this.enqueue({ type: "UNDO", id: this.vm.sessionId });
  }

  hint(): void {
    if (!this.vm.sessionId) return;
    this.enqueue({ type: "HINT", id: this.vm.sessionId });
  }

  closeSession(): void {
    if (!this.vm.sessionId) return;
    this.enqueue({ type: "CLOSE", id: this.vm.sessionId });
  }

  resume(sessionId: string): void {
    this.vm.sessionId = sessionId;
    this.enqueue({ type: "RESUME", id: sessionId });
  }

  private enqueue(msg: ClientMessage): void {
    const now = Date.now();
    if (now < this.busyUntil) {
      this.queue.push(msg);
      return;
    }
    this.transport.send(msg);
  }

  private receive(msg: ServerMessage): void {
    this.vm.apply(msg);
    if (msg.type === "MOVE_REPORT" && this.animationMs > 0) {
      this.busyUntil = Date.now() + this.animationMs;
      setTimeout(() => this.flush(), this.animationMs);
    }
    if (this.options.onUpdate) this.options.onUpdate(this.vm, msg);
  }

  private flush(): void {
    this.busyUntil = 0;
    const pending = this.queue.splice(0);
    for (const msg of pending) this.enqueue(msg);
  }
}

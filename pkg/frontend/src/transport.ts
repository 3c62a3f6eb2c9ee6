// Transports carrying one protocol message per frame. The browser uses the
// websocket bridge; tests use a scripted transport fed with recorded
// exchanges.

import { ClientMessage, ServerMessage, decode, encode } from "./protocol.js";

export interface Transport {
  send(msg: ClientMessage): void;
  onMessage(handler: (msg: ServerMessage) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export class WebSocketTransport implements Transport {
  private ws: WebSocket;
  private messageHandler: ((msg: ServerMessage) => void) | null = null;
  private closeHandler: (() => void) | null = null;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.onmessage = (ev) => {
      if (this.messageHandler) this.messageHandler(decode(String(ev.data)));
    };
    this.ws.onclose = () => {
      if (this.closeHandler) this.closeHandler();
    };
  }

  ready(): Promise<void> {
    if (this.ws.readyState === WebSocket.OPEN) return Promise.resolve();
    return new Promise((resolve, reject) => {
      this.ws.addEventListener("open", () => resolve(), { once: true });
      this.ws.addEventListener("error", () => reject(new Error("connect failed")), {
        once: true,
      });
    });
  }

  send(msg: ClientMessage): void {
    this.ws.send(encode(msg));
  }

  onMessage(handler: (msg: ServerMessage) => void): void {
    this.messageHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.ws.close();
  }
}

export interface ScriptEntry {
  dir: "send" | "recv";
  msg: Record<string, unknown>;
}

/** Replays a recorded exchange: every send must match the script, and the
 * following recv entries are delivered as server messages. */
export class ScriptedTransport implements Transport {
  private cursor = 0;
  private messageHandler: ((msg: ServerMessage) => void) | null = null;
  private closeHandler: (() => void) | null = null;

  constructor(private script: ScriptEntry[]) {}

  send(msg: ClientMessage): void {
    const expected = this.script[this.cursor];
    if (!expected || expected.dir !== "send") {
      throw new Error(`unexpected send at script position ${this.cursor}`);
    }
    const got = JSON.stringify(sortKeys(msg as unknown as Json));
    const want = JSON.stringify(sortKeys(expected.msg as Json));
    if (got !== want) {
      throw new Error(`script mismatch at ${this.cursor}:\n got ${got}\nwant ${want}`);
    }
    this.cursor += 1;
    this.deliverPending();
  }

  /** Push any leading recv entries (e.g. unsolicited messages). */
  deliverPending(): void {
    while (this.cursor < this.script.length && this.script[this.cursor].dir === "recv") {
      const entry = this.script[this.cursor];
      this.cursor += 1;
      if (this.messageHandler) {
        this.messageHandler(entry.msg as unknown as ServerMessage);
      }
    }
  }

  exhausted(): boolean {
    return this.cursor === this.script.length;
  }

  onMessage(handler: (msg: ServerMessage) => void): void {
    this.messageHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    if (this.closeHandler) this.closeHandler();
  }
}

type Json = null | boolean | number | string | Json[] | { [k: string]: Json };

function sortKeys(value: Json): Json {
  if (Array.isArray(value)) return value.map(sortKeys);
  if (value !== null && typeof value === "object") {
    const out: { [k: string]: Json } = {};
    for (const key of Object.keys(value).sort()) {
      out[key] = sortKeys((value as { [k: string]: Json })[key]);
    }
    return out;
  }
  return value;
}

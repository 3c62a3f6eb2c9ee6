import { describe, expect, it } from "vitest";

import { cellKey, decode, encode } from "../src/protocol.js";
import { GameClient } from "../src/client.js";
import { ScriptedTransport } from "../src/transport.js";

describe("protocol codec", () => {
  it("encodes client messages as single-line JSON", () => {
    const line = encode({ type: "ATTACK", id: "abc", cell: [3, 4] });
    expect(line.includes("\n")).toBe(false);
    expect(JSON.parse(line)).toEqual({ type: "ATTACK", id: "abc", cell: [3, 4] });
  });

  it("decodes server messages and rejects untyped ones", () => {
    const msg = decode('{"type":"HINT_RESULT","id":"x","cell":[1,2]}');
    expect(msg.type).toBe("HINT_RESULT");
    expect(() => decode('{"cell":[1,2]}')).toThrow();
  });

  it("cellKey is stable", () => {
    expect(cellKey([4, 11])).toBe("4,11");
  });
});

describe("scripted transport", () => {
  it("rejects sends that deviate from the recording", () => {
    const transport = new ScriptedTransport([
      { dir: "send", msg: { type: "HINT", id: "a" } },
      { dir: "recv", msg: { type: "HINT_RESULT", id: "a", cell: [0, 1] } },
    ]);
    const client = new GameClient(transport, { animationMs: 0 });
    client.vm.sessionId = "b";
    expect(() => client.hint()).toThrow(/script mismatch/);
  });

  it("queues actions while a move animation is playing", async () => {
    const transport = new ScriptedTransport([
      { dir: "send", msg: { type: "HINT", id: "a" } },
      { dir: "recv", msg: { type: "HINT_RESULT", id: "a", cell: [0, 1] } },
      { dir: "send", msg: { type: "HINT", id: "a" } },
      { dir: "recv", msg: { type: "HINT_RESULT", id: "a", cell: [0, 2] } },
    ]);
    const client = new GameClient(transport, { animationMs: 30 });
    client.vm.sessionId = "a";
    // simulate an in-flight animation, then issue an action: it must wait
    (client as unknown as { busyUntil: number }).busyUntil = Date.now() + 30;
    (client as unknown as { queue: unknown[] }).queue = [];
    client.hint();
    expect(transport.exhausted()).toBe(false);
    await new Promise((resolve) => setTimeout(resolve, 60));
    (client as unknown as { flush: () => void }).flush();
    client.hint();
    expect(client.vm.hint).toEqual([0, 2]);
  });
});

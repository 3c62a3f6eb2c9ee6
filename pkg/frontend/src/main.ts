// Browser bootstrap: websocket connection, side panel, reconnect banner.
// The only state surviving a reload is the session id (localStorage).

import { BoardViewModel } from "./board.js";
import { GameClient } from "./client.js";
import { BoardRenderer, showToast } from "./render.js";
import { ServerMessage } from "./protocol.js";
import { WebSocketTransport } from "./transport.js";

const SESSION_KEY = "eterdom-session-id";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const wsUrl = `ws://${window.location.host}/ws`;
  const transport = new WebSocketTransport(wsUrl);
  const banner = el<HTMLElement>("banner");
  transport.onClose(() => {
    banner.textContent = "connection lost - reload to reconnect (session resumes)";
    banner.classList.add("visible");
  });
  await transport.ready();

  const renderer = new BoardRenderer(el("board"), {
    onCellClick: (cell) => {
      if (client.vm.hasGuard(cell[0], cell[1])) {
        showToast(el("toasts"), "that cell already holds a guard");
        return;
      }
      client.attack(cell);
    },
  });

  const client = new GameClient(transport, {
    animationMs: 350,
    onUpdate: (vm, msg) => update(vm, msg),
  });

  function update(vm: BoardViewModel, msg: ServerMessage): void {
    if (msg.type === "REJECTED") {
      showToast(el("toasts"), `rejected: ${msg.reason}`);
      return;
    }
    if (msg.type === "PROTOCOL_ERROR") {
      showToast(el("toasts"), `protocol error: ${msg.detail}`);
      return;
    }
    if (vm.sessionId) window.localStorage.setItem(SESSION_KEY, vm.sessionId);
    renderer.render(vm);
    el("round").textContent = String(vm.round);
    el("guards").textContent = String(vm.guardCount());
    el("pattern").textContent = vm.pattern
      ? `${vm.pattern.family} / t=${vm.pattern.t}`
      : "-";
    const panel = el("flags");
    panel.replaceChildren();
    for (const [name, ok] of Object.entries(vm.flags).sort()) {
      const row = document.createElement("div");
      row.className = ok ? "flag ok" : "flag bad";
      row.textContent = `${ok ? "+" : "!"} ${name}`;
      panel.appendChild(row);
    }
  }

  el("new-game").addEventListener("click", () => {
    const m = Number((el<HTMLInputElement>("dim-m")).value);
    const n = Number((el<HTMLInputElement>("dim-n")).value);
    const variant = (el<HTMLSelectElement>("variant")).value;
    client.newGame(m, n, variant);
  });
  el("undo").addEventListener("click", () => client.undo());
  el("hint").addEventListener("click", () => client.hint());

  const saved = window.localStorage.getItem(SESSION_KEY);
  if (saved) {
    banner.textContent = `resuming session ${saved.slice(0, 8)}...`;
    banner.classList.add("visible");
    window.setTimeout(() => banner.classList.remove("visible"), 1500);
    client.resume(saved);
  } else {
    client.newGame(7, 7, "improved");
  }
}

boot().catch((err) => {
  const banner = document.getElementById("banner");
  if (banner) {
    banner.textContent = `cannot reach the engine: ${err}`;
    banner.classList.add("visible");
  }
});

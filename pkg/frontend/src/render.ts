// DOM renderer: projects the view model onto the board element. Guards are
// absolutely positioned tokens, so a CSS transform transition animates each
// move; answering plans additionally draw SVG arrows that fade out.

import { BoardViewModel } from "./board.js";
import { Cell, cellKey } from "./protocol.js";

const CELL_PX = 44;
const ANIMATION_MS = 350;

export interface RendererCallbacks {
  onCellClick: (cell: Cell) => void;
}

export class BoardRenderer {
  private tokens = new Map<string, HTMLElement>();
  private gridEl: HTMLElement;
  private arrowsEl: SVGSVGElement;
  private scale = 1;
  private panX = 0;
  private panY = 0;

  constructor(
    private root: HTMLElement,
    private callbacks: RendererCallbacks,
  ) {
    this.gridEl = document.createElement("div");
    this.gridEl.className = "board-grid";
    this.arrowsEl = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.arrowsEl.classList.add("board-arrows");
    this.root.appendChild(this.gridEl);
    this.root.appendChild(this.arrowsEl);
    this.installPanZoom();
  }

  render(vm: BoardViewModel): void {
    const w = vm.n * CELL_PX;
    const h = vm.m * CELL_PX;
    this.gridEl.style.width = `${w}px`;
    this.gridEl.style.height = `${h}px`;
    this.arrowsEl.setAttribute("viewBox", `0 0 ${w} ${h}`);
    this.arrowsEl.style.width = `${w}px`;
    this.arrowsEl.style.height = `${h}px`;
    this.syncCells(vm);
    this.syncTokens(vm);
    this.drawArrows(vm);
  }

  private syncCells(vm: BoardViewModel): void {
    const want = vm.m * vm.n;
    const existing = this.gridEl.querySelectorAll(".cell").length;
    if (existing !== want) {
      this.gridEl.querySelectorAll(".cell").forEach((el) => el.remove());
      for (let r = 0; r < vm.m; r++) {
        for (let c = 0; c < vm.n; c++) {
          const cell = document.createElement("div");
          cell.className = "cell";
          cell.style.left = `${c * CELL_PX}px`;
          cell.style.top = `${r * CELL_PX}px`;
          cell.dataset.cell = `${r},${c}`;
          cell.addEventListener("click", () => this.callbacks.onCellClick([r, c]));
          this.gridEl.appendChild(cell);
        }
      }
    }
    this.gridEl.querySelectorAll<HTMLElement>(".cell").forEach((el) => {
      const [r, c] = (el.dataset.cell as string).split(",").map(Number);
      el.classList.toggle("guarded", vm.hasGuard(r, c));
      el.classList.toggle(
        "hinted",
        vm.hint !== null && vm.hint[0] === r && vm.hint[1] === c,
      );
      el.classList.toggle(
        "attacked",
        vm.lastAttack !== null && vm.lastAttack[0] === r && vm.lastAttack[1] === c,
      );
    });
  }

  private syncTokens(vm: BoardViewModel): void {
    // match move targets to existing tokens so CSS transitions animate them
    const moveByTarget = new Map<string, string>();
    for (const [from, to] of vm.lastPlan) {
      moveByTarget.set(cellKey(to), cellKey(from));
    }
    const next = new Map<string, HTMLElement>();
    for (let r = 0; r < vm.m; r++) {
      for (let c = 0; c < vm.n; c++) {
        if (!vm.hasGuard(r, c)) continue;
        const key = `${r},${c}`;
        const source = moveByTarget.get(key);
        let token =
          this.tokens.get(key) ??
          (source !== undefined ? this.tokens.get(source) : undefined);
        if (token) {
          this.tokens.delete(key);
          if (source !== undefined) this.tokens.delete(source);
        } else {
          token = document.createElement("div");
          token.className = "token";
          this.gridEl.appendChild(token);
        }
        token.classList.toggle("corner", vm.isCorner(r, c));
        token.style.transform = `translate(${c * CELL_PX}px, ${r * CELL_PX}px)`;
        next.set(key, token);
      }
    }
    for (const stale of this.tokens.values()) stale.remove();
    this.tokens = next;
  }

  private drawArrows(vm: BoardViewModel): void {
    this.arrowsEl.replaceChildren();
    for (const [from, to] of vm.lastPlan) {
      const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", `${from[1] * CELL_PX + CELL_PX / 2}`);
      line.setAttribute("y1", `${from[0] * CELL_PX + CELL_PX / 2}`);
      line.setAttribute("x2", `${to[1] * CELL_PX + CELL_PX / 2}`);
      line.setAttribute("y2", `${to[0] * CELL_PX + CELL_PX / 2}`);
      line.classList.add("arrow");
      this.arrowsEl.appendChild(line);
    }
    if (vm.lastPlan.length) {
      window.setTimeout(() => this.arrowsEl.replaceChildren(), ANIMATION_MS + 150);
    }
  }

  private installPanZoom(): void {
    this.root.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const factor = ev.deltaY < 0 ? 1.1 : 1 / 1.1;
      this.scale = Math.min(2.5, Math.max(0.4, this.scale * factor));
      this.applyTransform();
    });
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.root.addEventListener("mousedown", (ev) => {
      if ((ev.target as HTMLElement).classList.contains("cell")) return;
      dragging = true;
      lastX = ev.clientX;
      lastY = ev.clientY;
    });
    window.addEventListener("mousemove", (ev) => {
      if (!dragging) return;
      this.panX += ev.clientX - lastX;
      this.panY += ev.clientY - lastY;
      lastX = ev.clientX;
      lastY = ev.clientY;
      this.applyTransform();
    });
    window.addEventListener("mouseup", () => {
      dragging = false;
    });
  }

  private applyTransform(): void {
    const t = `translate(${this.panX}px, ${this.panY}px) scale(${this.scale})`;
    this.gridEl.style.transform = t;
    this.arrowsEl.style.transform = t;
  }
}

export function showToast(container: HTMLElement, text: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = text;
  container.appendChild(toast);
  window.setTimeout(() => toast.remove(), 2500);
}

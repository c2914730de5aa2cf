// Browser shell: canvas painting, selection, toolbar, and drags. All
// scene mutations round-trip through the engine bridge; this file owns
// pixels and DOM events only.

import { defaultCamera, orbit, pan, unproject, zoom, type Camera } from "./camera.js";
import { CommandLog } from "./commandLog.js";
import { applySceneDiff, parseScene, serializeScene } from "./diff.js";
import { EngineClient, EngineError } from "./engineClient.js";
import { hitTestCell, hitTestGrabber, renderScene, type Primitive } from "./renderScene.js";
import type { AnalysisPhase, SceneDocument, ViewerCommand } from "./types.js";

const PANEL_FILL: Record<string, string> = {
  code: "#dbe9ff",
  markdown: "#fdf3d8",
  output_visualization: "#e2f5e5",
};

const BRIDGE_URL = (window as unknown as { CELLSPACE_BRIDGE?: string }).CELLSPACE_BRIDGE
  ?? "http://127.0.0.1:8377";

class ViewerApp {
  private scene: SceneDocument | null = null;
  private camera: Camera = defaultCamera();
  private selection = new Set<string>();
  private phase: AnalysisPhase = "exploratory";
  private primitives: Primitive[] = [];
  private readonly client = new EngineClient(BRIDGE_URL);
  private readonly log = new CommandLog();
  private drag: { kind: "structure" | "cell"; id: string; depth: number } | null = null;
  private cameraDrag: { mode: "orbit" | "pan"; x: number; y: number } | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly status: HTMLElement
  ) {
    this.bindPointer();
    new ResizeObserver(() => this.paint()).observe(canvas);
  }

  // ---- engine round trips -------------------------------------------------

  async loadSceneText(text: string): Promise<void> {
    const doc = parseScene(text);
    await this.client.loadScene(text);
    this.scene = doc;
    this.selection.clear();
    this.log.clear();
    this.note(`loaded ${doc.cells.length} cells, ${doc.edges.length} edges`);
    this.paint();
  }

  async send(commands: Omit<ViewerCommand, "t">[]): Promise<void> {
    if (!this.scene || !commands.length) return;
    const stamped = commands.map((c) => this.log.stamp(c));
    try {
      const diff = await this.client.sendCommands(stamped);
      this.log.append(stamped);
      this.scene = applySceneDiff(this.scene, diff);
      this.note(`${stamped[stamped.length - 1].command}: ok`);
    } catch (error) {
      if (error instanceof EngineError) {
        this.note(`engine: ${error.message}`, true);
        return; // scene unchanged
      }
      throw error;
    }
    this.paint();
  }

  // ---- toolbar actions ----------------------------------------------------

  selectAll(): void {
    if (!this.scene) return;
    this.selection = new Set(this.scene.cells.map((c) => c.id));
    this.paint();
  }

  clearSelection(): void {
    this.selection.clear();
    this.paint();
  }

  selectedIds(): string[] {
    if (!this.scene) return [];
    return this.scene.cells.map((c) => c.id).filter((id) => this.selection.has(id));
  }

  compose(command: Omit<ViewerCommand, "t">): void {
    const selection = this.selectedIds();
    if (!selection.length) {
      this.note("select some cells first", true);
      return;
    }
    void this.send([{ ...command, selection }]);
  }

  cycleClusterNear(): void {
    if (!this.scene || !this.scene.structures.length) {
      this.note("no structure to cluster", true);
      return;
    }
    // Swipe analogue: cluster the structure owning the selection, else the first.
    const selected = this.selectedIds();
    const target =
      this.scene.structures.find((s) => selected.every((id) => s.members.includes(id)) && selected.length) ??
      this.scene.structures[0];
    void this.send([{ command: "cycle_cluster_mode", structure: target.id }]);
  }

  downloadLog(): void {
    download("commands.jsonl", this.log.toJsonl());
  }

  downloadScene(): void {
    if (this.scene) download("scene.json", serializeScene(this.scene));
  }

  setPhase(phase: AnalysisPhase): void {
    this.phase = phase;
    this.paint();
  }

  // ---- pointer handling ---------------------------------------------------

  private bindPointer(): void {
    this.canvas.addEventListener("pointerdown", (event) => this.onDown(event));
    this.canvas.addEventListener("pointermove", (event) => this.onMove(event));
    this.canvas.addEventListener("pointerup", (event) => void this.onUp(event));
    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      this.camera = zoom(this.camera, event.deltaY > 0 ? 1.1 : 0.9);
      this.paint();
    });
    this.canvas.addEventListener("contextmenu", (event) => event.preventDefault());
  }

  private onDown(event: PointerEvent): void {
    this.canvas.setPointerCapture(event.pointerId);
    const { x, y } = this.local(event);
    if (event.button === 2 || event.ctrlKey) {
      this.cameraDrag = { mode: "orbit", x, y };
      return;
    }
    if (event.button === 1 || event.shiftKey) {
      this.cameraDrag = { mode: "pan", x, y };
      return;
    }
    const grabber = hitTestGrabber(this.primitives, x, y);
    if (grabber) {
      const primitive = this.primitives.find((p) => p.kind === "grabber" && p.id === grabber);
      this.drag = { kind: "structure", id: grabber, depth: primitive ? primitive.depth : 5 };
      void this.send([{ command: "grab_structure", structure: grabber,
                        pose: this.worldAt(x, y, this.drag.depth) }]);
      return;
    }
    const cell = hitTestCell(this.primitives, x, y);
    if (cell && event.altKey) {
      const primitive = this.primitives.find((p) => p.kind === "panel" && p.id === cell);
      this.drag = { kind: "cell", id: cell, depth: primitive ? primitive.depth : 5 };
      void this.send([{ command: "grab_cell", cell }]);
    }
  }

  private onMove(event: PointerEvent): void {
    const { x, y } = this.local(event);
    if (this.cameraDrag) {
      const dx = x - this.cameraDrag.x;
      const dy = y - this.cameraDrag.y;
      this.camera =
        this.cameraDrag.mode === "orbit"
          ? orbit(this.camera, dx * 0.005, dy * 0.005)
          : pan(this.camera, dx, dy);
      this.cameraDrag = { ...this.cameraDrag, x, y };
      this.paint();
    }
  }

  private async onUp(event: PointerEvent): Promise<void> {
    const { x, y } = this.local(event);
    if (this.cameraDrag) {
      this.cameraDrag = null;
      return;
    }
    if (this.drag) {
      const pose = this.worldAt(x, y, this.drag.depth);
      const command =
        this.drag.kind === "structure"
          ? { command: "release_structure", structure: this.drag.id, pose }
          : { command: "release_cell", cell: this.drag.id, pose };
      this.drag = null;
      await this.send([command]);
      return;
    }
    // Plain click toggles cell selection.
    const cell = hitTestCell(this.primitives, x, y);
    if (cell) {
      if (this.selection.has(cell)) this.selection.delete(cell);
      else this.selection.add(cell);
      this.paint();
    }
  }

  private local(event: PointerEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  }

  private worldAt(x: number, y: number, depth: number): [number, number, number] {
    return unproject(this.camera, x, y, depth, this.canvas.width, this.canvas.height);
  }

  // ---- painting -----------------------------------------------------------

  paint(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#11131a";
    ctx.fillRect(0, 0, width, height);
    if (!this.scene) {
      ctx.fillStyle = "#8892a6";
      ctx.font = "16px system-ui";
      ctx.fillText("load a scene.json to begin", 24, 36);
      return;
    }
    this.primitives = renderScene(this.scene, this.camera, width, height, this.selection, this.phase);
    for (const primitive of this.primitives) {
      if (primitive.kind === "panel") {
        ctx.beginPath();
        primitive.points.forEach(([px, py], i) => (i ? ctx.lineTo(px, py) : ctx.moveTo(px, py)));
        ctx.closePath();
        ctx.fillStyle = primitive.folded ? "#3e4656" : PANEL_FILL[primitive.cellKind] ?? "#e8e8e8";
        ctx.fill();
        ctx.lineWidth = primitive.selected ? 3 : 1;
        ctx.strokeStyle = primitive.selected ? "#ff9f1c" : primitive.highlight ? "#e84d8a" : "#2a2f3c";
        ctx.stroke();
      } else if (primitive.kind === "polyline") {
        ctx.beginPath();
        primitive.points.forEach(([px, py], i) => (i ? ctx.lineTo(px, py) : ctx.moveTo(px, py)));
        ctx.lineWidth = 1.5;
        ctx.setLineDash(primitive.isSkip ? [6, 4] : []);
        ctx.strokeStyle = primitive.isSkip ? "#7ad9c8" : "#5c8dff";
        ctx.stroke();
        ctx.setLineDash([]);
        const [ex, ey] = primitive.points[primitive.points.length - 1];
        ctx.fillStyle = ctx.strokeStyle;
        ctx.beginPath();
        ctx.arc(ex, ey, 2.5, 0, Math.PI * 2);
        ctx.fill();
      } else {
        ctx.beginPath();
        ctx.arc(primitive.x, primitive.y, 6, 0, Math.PI * 2);
        ctx.fillStyle = "#ffd166";
        ctx.fill();
      }
    }
  }

  private note(message: string, isError = false): void {
    this.status.textContent = message;
    this.status.style.color = isError ? "#ff6b6b" : "#9ad1a5";
  }
}

function download(name: string, text: string): void {
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(new Blob([text], { type: "application/json" }));
  anchor.download = name;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

function setUp(): void {
  const canvas = document.getElementById("stage") as HTMLCanvasElement;
  const status = document.getElementById("status") as HTMLElement;
  const app = new ViewerApp(canvas, status);

  const resize = () => {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    app.paint();
  };
  window.addEventListener("resize", resize);
  resize();

  (document.getElementById("file") as HTMLInputElement).addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) await app.loadSceneText(await file.text());
  });

  const rows = document.getElementById("rows") as HTMLInputElement;
  const direction = document.getElementById("direction") as HTMLSelectElement;
  const bind = (id: string, action: () => void) =>
    document.getElementById(id)!.addEventListener("click", action);

  bind("select-all", () => app.selectAll());
  bind("clear", () => app.clearSelection());
  bind("linear", () => app.compose({ command: "create_linear_linear" }));
  bind("grid", () => app.compose({ command: "create_grid", orientation: "horizontal",
                                   rows: parseInt(rows.value, 10) || 2 }));
  bind("colgrid", () => app.compose({ command: "create_grid", orientation: "vertical",
                                      rows: parseInt(rows.value, 10) || 2 }));
  bind("tree", () => {
    const selection = app.selectedIds();
    if (selection.length < 2) return;
    app.compose({ command: "create_parallel_tree", roots: [selection[1]] });
  });
  bind("loop", () => app.compose({ command: "create_loop_circle" }));
  bind("fold", () => app.compose({ command: "create_skip_fold" }));
  bind("pile", () => app.compose({ command: "create_skip_pile" }));
  bind("layer", () => app.compose({ command: "apply_skip_layer", direction: direction.value }));
  bind("cluster", () => app.cycleClusterNear());
  bind("toggle", () => app.compose({ command: "toggle_indicators" }));
  bind("save", () => app.downloadScene());
  bind("log", () => app.downloadLog());

  (document.getElementById("phase") as HTMLSelectElement).addEventListener("change", (event) => {
    app.setPhase((event.target as HTMLSelectElement).value as AnalysisPhase);
  });
}

setUp();

import { describe, expect, it } from "vitest";

import { applySceneDiff, parseScene, serializeScene } from "../src/diff.js";
import type { SceneDiff, SceneDocument } from "../src/types.js";

const BASE: SceneDocument = {
  version: "1",
  config: { cell_width: 0.4 },
  cells: [
    {
      id: "c0", kind: "code", pose: { position: [0, 0, -2.5], yaw: 0 },
      size: [0.4, 0.3], folded: false, highlight: false, task_tag: null,
    },
    {
      id: "c1", kind: "code", pose: { position: [0.45, 0, -2.5], yaw: 0 },
      size: [0.4, 0.3], folded: false, highlight: false, task_tag: "Setup",
    },
  ],
  edges: [
    { from: "c0", to: "c1", visible: true, is_skip: false, polyline: [[0.2, 0, -2.5], [0.25, 0, -2.5]] },
  ],
  structures: [],
};

const EMPTY_DIFF: SceneDiff = {
  changed_cells: [],
  removed_cells: [],
  changed_edges: [],
  removed_edges: [],
  changed_structures: [],
  removed_structures: [],
  config: null,
};

describe("applySceneDiff", () => {
  it("replaces changed cells and keeps the rest", () => {
    const moved = structuredClone(BASE.cells[0]);
    moved.pose = { position: [1, 0, -2.5], yaw: 0.1 };
    const next = applySceneDiff(BASE, { ...EMPTY_DIFF, changed_cells: [moved] });
    expect(next.cells.find((c) => c.id === "c0")?.pose.position[0]).toBe(1);
    expect(next.cells.find((c) => c.id === "c1")).toEqual(BASE.cells[1]);
    // the input document is untouched
    expect(BASE.cells[0].pose.position[0]).toBe(0);
  });

  it("removes edges and inserts new structures in sorted order", () => {
    const diff: SceneDiff = {
      ...EMPTY_DIFF,
      removed_edges: [["c0", "c1"]],
      changed_structures: [
        {
          id: "s0", kind: "skip_pile", members: ["c0", "c1"],
          anchor: { position: [0, 0, -2.5], yaw: 0 },
          params: {
            rows: null, cols: null, orientation: "horizontal", branch_roots: [],
            circle_radius: null, layer_depth: null, gap: null, visible_head: "c0",
            keep: [], layer_direction: null,
          },
          phase: "exploratory",
        },
      ],
    };
    const next = applySceneDiff(BASE, diff);
    expect(next.edges).toHaveLength(0);
    expect(next.structures.map((s) => s.id)).toEqual(["s0"]);
  });

  it("an empty diff reproduces the same canonical bytes", () => {
    const next = applySceneDiff(BASE, EMPTY_DIFF);
    expect(serializeScene(next)).toBe(serializeScene(BASE));
  });

  it("config replacement applies when present", () => {
    const next = applySceneDiff(BASE, { ...EMPTY_DIFF, config: { cell_width: 0.5 } });
    expect(next.config.cell_width).toBe(0.5);
  });
});

describe("parseScene", () => {
  it("round trips through canonical text", () => {
    const text = serializeScene(BASE);
    expect(serializeScene(parseScene(text))).toBe(text);
  });

  it("rejects documents without cells", () => {
    expect(() => parseScene('{"version":"1"}')).toThrow();
  });
});

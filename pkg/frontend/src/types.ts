// Scene document and command wire types, mirroring the engine's JSON
// formats exactly. The viewer never computes layout: every mutation goes
// through the bridge and comes back as a SceneDiff.

export type Vec3 = [number, number, number];

export interface PoseDoc {
  position: Vec3;
  yaw: number;
}

export interface CellDoc {
  id: string;
  kind: string; // "code" | "markdown" | "output_visualization"
  pose: PoseDoc;
  size: [number, number];
  folded: boolean;
  highlight: boolean;
  task_tag: string | null;
}

export interface EdgeDoc {
  from: string;
  to: string;
  visible: boolean;
  is_skip: boolean;
  polyline: Vec3[];
}

export interface StructureParamsDoc {
  rows: number | null;
  cols: number | null;
  orientation: string;
  branch_roots: string[];
  circle_radius: number | null;
  layer_depth: number | null;
  gap: number | null;
  visible_head: string | null;
  keep: string[];
  layer_direction: string | null;
}

export interface StructureDoc {
  id: string;
  kind: string;
  members: string[];
  anchor: PoseDoc;
  params: StructureParamsDoc;
  phase: string;
}

export interface SceneDocument {
  version: string;
  config: Record<string, number>;
  cells: CellDoc[];
  edges: EdgeDoc[];
  structures: StructureDoc[];
}

// One engine command, in the exact shape the command log uses.
export interface ViewerCommand {
  command: string;
  t: number;
  [payload: string]: unknown;
}

export interface SceneDiff {
  changed_cells: CellDoc[];
  removed_cells: string[];
  changed_edges: EdgeDoc[];
  removed_edges: [string, string][];
  changed_structures: StructureDoc[];
  removed_structures: string[];
  config: Record<string, number> | null;
}

export type AnalysisPhase = "exploratory" | "storytelling";

export function isSceneDocument(value: unknown): value is SceneDocument {
  if (typeof value !== "object" || value === null) return false;
  const doc = value as Record<string, unknown>;
  return (
    Array.isArray(doc.cells) &&
    Array.isArray(doc.edges) &&
    Array.isArray(doc.structures) &&
    typeof doc.config === "object" &&
    doc.config !== null
  );
}

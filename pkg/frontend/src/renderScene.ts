// Scene document -> flat list of 2D paint primitives, depth-sorted for a
// painter's canvas pass. Pure: no DOM, unit-testable. Panels are w x h
// rectangles at their pose (yaw about +y); folded cells render as bars of
// the configured height; pile heads occlude their tails through the
// depth sort.

import { project, type Camera } from "./camera.js";
import type { AnalysisPhase, CellDoc, SceneDocument, Vec3 } from "./types.js";

export interface PanelPrimitive {
  kind: "panel";
  id: string;
  points: [number, number][]; // projected corners, clockwise
  depth: number;
  cellKind: string;
  folded: boolean;
  highlight: boolean;
  selected: boolean;
}

export interface PolylinePrimitive {
  kind: "polyline";
  from: string;
  to: string;
  points: [number, number][];
  depth: number;
  isSkip: boolean;
}

export interface GrabberPrimitive {
  kind: "grabber";
  id: string; // structure id
  x: number;
  y: number;
  depth: number;
}

export type Primitive = PanelPrimitive | PolylinePrimitive | GrabberPrimitive;

function rotateY(yaw: number, v: Vec3): Vec3 {
  const c = Math.cos(yaw);
  const s = Math.sin(yaw);
  return [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]];
}

export function cellCorners(cell: CellDoc, barHeight: number): Vec3[] {
  const halfW = cell.size[0] / 2;
  const halfH = (cell.folded ? barHeight : cell.size[1]) / 2;
  const locals: Vec3[] = [
    [-halfW, halfH, 0],
    [halfW, halfH, 0],
    [halfW, -halfH, 0],
    [-halfW, -halfH, 0],
  ];
  return locals.map((local) => {
    const rotated = rotateY(cell.pose.yaw, local);
    return [
      cell.pose.position[0] + rotated[0],
      cell.pose.position[1] + rotated[1],
      cell.pose.position[2] + rotated[2],
    ];
  });
}

export function renderScene(
  scene: SceneDocument,
  camera: Camera,
  width: number,
  height: number,
  selection: ReadonlySet<string>,
  phase: AnalysisPhase = "exploratory"
): Primitive[] {
  const primitives: Primitive[] = [];
  const barHeight = scene.config.fold_bar_height ?? 0.05;

  for (const cell of scene.cells) {
    const corners = cellCorners(cell, barHeight);
    const projected = corners.map((c) => project(camera, c, width, height));
    if (projected.some((p) => !p.visible)) continue;
    primitives.push({
      kind: "panel",
      id: cell.id,
      points: projected.map((p) => [p.x, p.y]),
      depth: projected.reduce((acc, p) => acc + p.depth, 0) / projected.length,
      cellKind: cell.kind,
      folded: cell.folded,
      highlight: cell.highlight,
      selected: selection.has(cell.id),
    });
  }

  // Storytelling mode de-emphasizes execution order: indicators stay off
  // the stage entirely; the engine-side visibility flags are untouched.
  if (phase !== "storytelling") {
    for (const edge of scene.edges) {
      if (!edge.visible || edge.polyline.length < 2) continue;
      const projected = edge.polyline.map((p) => project(camera, p, width, height));
      if (projected.some((p) => !p.visible)) continue;
      primitives.push({
        kind: "polyline",
        from: edge.from,
        to: edge.to,
        points: projected.map((p) => [p.x, p.y]),
        depth: Math.min(...projected.map((p) => p.depth)),
        isSkip: edge.is_skip,
      });
    }
  }

  const cellById = new Map(scene.cells.map((c) => [c.id, c]));
  for (const structure of scene.structures) {
    const members = structure.members
      .map((id) => cellById.get(id))
      .filter((c): c is CellDoc => c !== undefined);
    if (!members.length) continue;
    const centroid: Vec3 = [0, 0, 0];
    for (const member of members) {
      centroid[0] += member.pose.position[0] / members.length;
      centroid[1] += member.pose.position[1] / members.length;
      centroid[2] += member.pose.position[2] / members.length;
    }
    const p = project(camera, centroid, width, height);
    if (p.visible) {
      primitives.push({ kind: "grabber", id: structure.id, x: p.x, y: p.y, depth: p.depth });
    }
  }

  // Painter order: far to near, so nearer pile heads cover their tails.
  primitives.sort((a, b) => b.depth - a.depth);
  return primitives;
}

export function hitTestCell(primitives: Primitive[], x: number, y: number): string | null {
  // Nearest (last-painted) panel whose projected quad contains the point.
  for (let i = primitives.length - 1; i >= 0; i--) {
    const primitive = primitives[i];
    if (primitive.kind !== "panel") continue;
    if (pointInPolygon(x, y, primitive.points)) return primitive.id;
  }
  return null;
}

export function hitTestGrabber(primitives: Primitive[], x: number, y: number, radius = 14): string | null {
  let best: { id: string; d: number } | null = null;
  for (const primitive of primitives) {
    if (primitive.kind !== "grabber") continue;
    const d = Math.hypot(primitive.x - x, primitive.y - y);
    if (d <= radius && (best === null || d < best.d)) best = { id: primitive.id, d };
  }
  return best ? best.id : null;
}

function pointInPolygon(x: number, y: number, points: [number, number][]): boolean {
  let inside = false;
  for (let i = 0, j = points.length - 1; i < points.length; j = i++) {
    const [xi, yi] = points[i];
    const [xj, yj] = points[j];
    if (yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

"""Core data model: cells, execution edges, structures, and the workspace.

A Workspace is a pure value: every operation that changes it works on a
clone and returns the clone, so workspaces can be shared across threads
safely. Cell and structure ids are deterministic sequence numbers ("c0",
"c1", ... / "s0", "s1", ...).
"""

from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass, field
from enum import Enum

from .geometry import PanelBox, Pose, Vec3, point_panel_distance, panels_clear


class CellKind(Enum):
    CODE = "code"
    MARKDOWN = "markdown"
    OUTPUT_VISUALIZATION = "output_visualization"


class ExecutionOrderKind(Enum):
    LINEAR = "linear"
    MULTIPLE_LINEAR = "multiple_linear"
    PARALLEL = "parallel"
    LOOP = "loop"
    SKIP = "skip"
    NO_ORDER = "no_order"


class LayoutKind(Enum):
    LINEAR = "linear"
    GRID = "grid"
    TREE = "tree"
    CIRCLE = "circle"
    LAYER = "layer"
    FOLD = "fold"
    PILE = "pile"


class AnalysisPhase(Enum):
    EXPLORATORY = "exploratory"
    STORYTELLING = "storytelling"


class StructureKind(Enum):
    LINEAR_LINEAR = "linear_linear"
    MULTI_ROW_GRID = "multi_row_grid"
    MULTI_COLUMN_GRID = "multi_column_grid"
    PARALLEL_TREE = "parallel_tree"
    LOOP_CIRCLE = "loop_circle"
    CLUSTER_BY_FORMAT = "cluster_by_format"
    CLUSTER_BY_TASK = "cluster_by_task"
    SKIP_LAYER = "skip_layer"
    SKIP_FOLD = "skip_fold"
    SKIP_PILE = "skip_pile"


#: Execution order / base layout each structure kind realizes.
STRUCTURE_TRAITS: dict[StructureKind, tuple[ExecutionOrderKind, LayoutKind]] = {
    StructureKind.LINEAR_LINEAR: (ExecutionOrderKind.LINEAR, LayoutKind.LINEAR),
    StructureKind.MULTI_ROW_GRID: (ExecutionOrderKind.MULTIPLE_LINEAR, LayoutKind.GRID),
    StructureKind.MULTI_COLUMN_GRID: (ExecutionOrderKind.MULTIPLE_LINEAR, LayoutKind.GRID),
    StructureKind.PARALLEL_TREE: (ExecutionOrderKind.PARALLEL, LayoutKind.TREE),
    StructureKind.LOOP_CIRCLE: (ExecutionOrderKind.LOOP, LayoutKind.CIRCLE),
    StructureKind.CLUSTER_BY_FORMAT: (ExecutionOrderKind.NO_ORDER, LayoutKind.GRID),
    StructureKind.CLUSTER_BY_TASK: (ExecutionOrderKind.NO_ORDER, LayoutKind.GRID),
    StructureKind.SKIP_LAYER: (ExecutionOrderKind.SKIP, LayoutKind.LAYER),
    StructureKind.SKIP_FOLD: (ExecutionOrderKind.SKIP, LayoutKind.FOLD),
    StructureKind.SKIP_PILE: (ExecutionOrderKind.SKIP, LayoutKind.PILE),
}


class Orientation(Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class LayerDirection(Enum):
    CLOSER = "closer"
    AWAY = "away"


@dataclass
class LayoutConfig:
    """All numeric layout defaults. Serialized with every scene export so
    results stay reproducible across machines."""

    cell_width: float = 0.4
    cell_height: float = 0.3
    gap: float = 0.05
    min_clearance: float = 0.01
    initial_radius: float = 2.5
    initial_arc_span: float = math.pi
    min_circle_radius: float = 0.5
    layer_depth: float = 0.75
    pile_offset_y: float = -0.02
    pile_offset_z: float = 0.01
    fold_bar_height: float = 0.05
    cluster_gap: float = 0.3

    def to_dict(self) -> dict:
        return {
            "cell_width": self.cell_width,
            "cell_height": self.cell_height,
            "gap": self.gap,
            "min_clearance": self.min_clearance,
            "initial_radius": self.initial_radius,
            "initial_arc_span": self.initial_arc_span,
            "min_circle_radius": self.min_circle_radius,
            "layer_depth": self.layer_depth,
            "pile_offset_y": self.pile_offset_y,
            "pile_offset_z": self.pile_offset_z,
            "fold_bar_height": self.fold_bar_height,
            "cluster_gap": self.cluster_gap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LayoutConfig":
        cfg = cls()
        for key, value in d.items():
            if hasattr(cfg, key):
                setattr(cfg, key, float(value))
        return cfg


@dataclass
class CellOutput:
    """One output artifact of a code cell: plain text or an image reference."""

    kind: str  # "text" | "image"
    value: str


@dataclass
class Cell:
    """One notebook cell rendered as a floating panel."""

    id: str
    kind: CellKind
    content: str = ""
    outputs: list[CellOutput] = field(default_factory=list)
    width: float = 0.4
    height: float = 0.3
    highlight: bool = False
    task_tag: str | None = None
    folded: bool = False
    pose: Pose = Pose()

    def has_image_output(self) -> bool:
        return any(o.kind == "image" for o in self.outputs)


def effective_format(cell: Cell) -> CellKind:
    """Format used for cluster-by-format: a code cell carrying an image
    output counts as an output visualization."""
    if cell.kind is CellKind.CODE and cell.has_image_output():
        return CellKind.OUTPUT_VISUALIZATION
    return cell.kind


@dataclass
class ExecutionEdge:
    """Directed execution-order link between two cells."""

    from_id: str
    to_id: str
    visible: bool = True
    is_skip: bool = False
    polyline: tuple[Vec3, ...] = ()

    @property
    def key(self) -> tuple[str, str]:
        return (self.from_id, self.to_id)


@dataclass
class StructureParams:
    """Per-kind layout parameters; unused fields stay None/empty."""

    rows: int | None = None
    cols: int | None = None
    orientation: Orientation = Orientation.HORIZONTAL
    branch_roots: tuple[str, ...] = ()
    circle_radius: float | None = None
    layer_depth: float | None = None
    gap: float | None = None
    visible_head: str | None = None
    keep: tuple[str, ...] = ()
    layer_direction: LayerDirection | None = None


@dataclass
class Structure:
    """A composed group of cells laid out under one structure kind.

    Member order is the human-perceived execution/reading order."""

    id: str
    kind: StructureKind
    members: tuple[str, ...]
    anchor: Pose
    params: StructureParams
    phase: AnalysisPhase


@dataclass
class Workspace:
    """The full scene: cells, execution edges, structures, configuration.

    Cells not referenced by any structure are "free". The operation log
    and warning list are bookkeeping, not part of scene equality."""

    cells: dict[str, Cell] = field(default_factory=dict)
    edges: dict[tuple[str, str], ExecutionEdge] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    config: LayoutConfig = field(default_factory=LayoutConfig)
    user_position: Vec3 = (0.0, 0.0, 0.0)
    warnings: list[str] = field(default_factory=list, compare=False)
    log: list = field(default_factory=list, compare=False)

    def clone(self) -> "Workspace":
        return copy.deepcopy(self)

    def cell_order(self) -> list[str]:
        return list(self.cells)

    def structure_of(self, cell_id: str) -> Structure | None:
        for structure in self.structures.values():
            if cell_id in structure.members:
                return structure
        return None

    def free_cells(self) -> list[str]:
        used = {m for s in self.structures.values() for m in s.members}
        return [cid for cid in self.cells if cid not in used]

    def next_cell_id(self) -> str:
        return f"c{_next_seq(self.cells, 'c')}"

    def next_structure_id(self) -> str:
        return f"s{_next_seq(self.structures, 's')}"

    def add_edge(self, edge: ExecutionEdge) -> None:
        self.edges[edge.key] = edge

    def panel(self, cell_id: str) -> PanelBox:
        return panel_box(self.cells[cell_id], self.config)

    def warn(self, message: str) -> None:
        self.warnings.append(message)


def _next_seq(existing: dict, prefix: str) -> int:
    pattern = re.compile(rf"^{prefix}(\d+)$")
    highest = -1
    for key in existing:
        m = pattern.match(key)
        if m:
            highest = max(highest, int(m.group(1)))
    return highest + 1


def panel_box(cell: Cell, config: LayoutConfig) -> PanelBox:
    """Collision/render rectangle of a cell; folded cells render as bars."""
    height = config.fold_bar_height if cell.folded else cell.height
    return PanelBox(
        center=cell.pose.position,
        yaw=cell.pose.yaw,
        half_w=cell.width / 2.0,
        half_h=height / 2.0,
    )


@dataclass
class Violation:
    code: str
    message: str
    ids: tuple[str, ...] = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def add(self, code: str, message: str, *ids: str) -> None:
        self.violations.append(Violation(code, message, tuple(ids)))


_OVERLAP_EXEMPT = {StructureKind.SKIP_PILE, StructureKind.SKIP_FOLD}


def validate_workspace(w: Workspace) -> ValidationReport:
    """Check every model invariant; never raises. An empty report means the
    workspace is consistent."""
    report = ValidationReport()

    for cell in w.cells.values():
        if cell.width <= 0 or cell.height <= 0:
            report.add("cell-size", f"cell {cell.id} has non-positive size", cell.id)
        if cell.task_tag is not None and not cell.task_tag.strip():
            report.add("cell-task-tag", f"cell {cell.id} has an empty task tag", cell.id)
        if not all(math.isfinite(v) for v in cell.pose.position):
            report.add("cell-pose", f"cell {cell.id} has a non-finite pose", cell.id)

    for edge in w.edges.values():
        if edge.from_id == edge.to_id:
            report.add("edge-self", f"edge {edge.from_id}->{edge.to_id} is a self loop", edge.from_id)
        for endpoint in (edge.from_id, edge.to_id):
            if endpoint not in w.cells:
                report.add(
                    "edge-dangling",
                    f"edge {edge.from_id}->{edge.to_id} references missing cell {endpoint}",
                    edge.from_id,
                    edge.to_id,
                )
        if edge.polyline:
            if len(edge.polyline) < 2:
                report.add(
                    "edge-polyline-short",
                    f"edge {edge.from_id}->{edge.to_id} polyline has fewer than 2 points",
                    edge.from_id,
                    edge.to_id,
                )
            else:
                _check_attachment(w, report, edge)

    seen_members: dict[str, str] = {}
    for structure in w.structures.values():
        if not structure.members:
            report.add("structure-empty", f"structure {structure.id} has no members", structure.id)
        if len(set(structure.members)) != len(structure.members):
            report.add("structure-dup-member", f"structure {structure.id} repeats a member", structure.id)
        for member in structure.members:
            if member not in w.cells:
                report.add(
                    "structure-missing-member",
                    f"structure {structure.id} references missing cell {member}",
                    structure.id,
                    member,
                )
            elif member in seen_members:
                report.add(
                    "structure-shared-member",
                    f"cell {member} belongs to structures {seen_members[member]} and {structure.id}",
                    member,
                )
            else:
                seen_members[member] = structure.id
        _check_params(w, report, structure)

    _check_overlap(w, report)
    return report


def _check_attachment(w: Workspace, report: ValidationReport, edge: ExecutionEdge) -> None:
    if edge.from_id not in w.cells or edge.to_id not in w.cells:
        return
    tol = 1e-6
    src = w.panel(edge.from_id)
    tgt = w.panel(edge.to_id)
    if point_panel_distance(edge.polyline[0], src) > tol:
        report.add(
            "edge-detached",
            f"edge {edge.from_id}->{edge.to_id} polyline does not start on its source cell",
            edge.from_id,
            edge.to_id,
        )
    if point_panel_distance(edge.polyline[-1], tgt) > tol:
        report.add(
            "edge-detached",
            f"edge {edge.from_id}->{edge.to_id} polyline does not end on its target cell",
            edge.from_id,
            edge.to_id,
        )


def _check_params(w: Workspace, report: ValidationReport, s: Structure) -> None:
    n = len(s.members)
    if s.kind is StructureKind.MULTI_ROW_GRID:
        if s.params.rows is None or not (2 <= s.params.rows <= max(n, 2)):
            report.add("params-rows", f"structure {s.id} rows out of range", s.id)
    if s.kind is StructureKind.MULTI_COLUMN_GRID:
        if s.params.cols is None or not (2 <= s.params.cols <= max(n, 2)):
            report.add("params-cols", f"structure {s.id} cols out of range", s.id)
    if s.kind is StructureKind.PARALLEL_TREE:
        roots = s.params.branch_roots
        if not roots:
            report.add("params-roots", f"structure {s.id} has no branch roots", s.id)
        else:
            if s.members and s.members[0] in roots:
                report.add("params-roots", f"structure {s.id} lists the parent as a root", s.id)
            if any(r not in s.members for r in roots):
                report.add("params-roots", f"structure {s.id} has a root outside its members", s.id)
            indices = [s.members.index(r) for r in roots if r in s.members]
            if indices != sorted(indices):
                report.add("params-roots", f"structure {s.id} roots out of member order", s.id)
    if s.kind is StructureKind.LOOP_CIRCLE:
        if s.params.circle_radius is not None and s.params.circle_radius < w.config.min_circle_radius - 1e-9:
            report.add("params-radius", f"structure {s.id} circle radius below minimum", s.id)
    if s.kind is StructureKind.SKIP_PILE:
        if s.params.visible_head not in s.members:
            report.add("params-head", f"structure {s.id} pile head is not a member", s.id)
    if s.kind is StructureKind.SKIP_FOLD:
        if any(k not in s.members for k in s.params.keep):
            report.add("params-keep", f"structure {s.id} keeps a cell outside its members", s.id)


def _check_overlap(w: Workspace, report: ValidationReport) -> None:
    owner: dict[str, Structure] = {}
    for structure in w.structures.values():
        for member in structure.members:
            owner[member] = structure
    ids = w.cell_order()
    panels = {cid: w.panel(cid) for cid in ids if cid in w.cells}
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            sa, sb = owner.get(a), owner.get(b)
            if sa is not None and sa is sb and sa.kind in _OVERLAP_EXEMPT:
                continue
            if not panels_clear(panels[a], panels[b], w.config.min_clearance):
                report.add("cell-overlap", f"cells {a} and {b} overlap", a, b)

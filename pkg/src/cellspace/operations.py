"""Operations on an existing workspace: composition, movement, editing.

Every operation validates, works on a clone, returns the clone, and
appends exactly one log entry. The original workspace is never mutated,
so a failed operation leaves the caller's scene untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .commands import CommandKind, TriggerCommand
from .geometry import Pose, Vec3, circular_mean_yaw, vadd, vdist, vsub
from .layout import (
    CLUSTER_KINDS,
    REBUILD_KINDS,
    LayoutParameterError,
    apply_skip_chain,
    layout_skip_layer,
    realize_structure,
    route_edge_subset,
    route_edges,
)
from .model import (
    AnalysisPhase,
    ExecutionEdge,
    LayerDirection,
    Orientation,
    Structure,
    StructureKind,
    StructureParams,
    Workspace,
)

#: Hands must come this close (m) to a structure centroid to grab it.
PROXIMITY_GRABBER = 0.30


class OperationError(ValueError):
    """A workspace operation was rejected; the workspace is unchanged."""


@dataclass
class OperationLogEntry:
    """Append-only record of one applied operation."""

    t: int
    command: TriggerCommand
    affected: tuple[str, ...]
    primitive_cost: int


def _log(w: Workspace, t: int | None, command: TriggerCommand, affected: tuple[str, ...], cost: int) -> None:
    tick = t if t is not None else (w.log[-1].t + 1 if w.log else 0)
    command.t = tick
    w.log.append(OperationLogEntry(tick, command, affected, cost))


def default_fold_keep(w: Workspace, selection: list[str]) -> tuple[str, ...]:
    """Keep rule when no explicit keep list is given: highlighted members,
    or just the first member when nothing is highlighted."""
    highlighted = tuple(cid for cid in selection if w.cells[cid].highlight)
    return highlighted if highlighted else (selection[0],)


def apply_structure(w: Workspace, selection: list[str], kind: StructureKind,
                    params: StructureParams | None = None, t: int | None = None) -> Workspace:
    """Compose the selected cells into a new structure of the given kind.

    Members leave any prior structure (which is re-laid-out, or dissolved
    below 2 members). The new structure is anchored so its member centroid
    stays at the selection's current centroid."""
    if not selection:
        raise OperationError("selection is empty")
    if len(set(selection)) != len(selection):
        raise OperationError("selection repeats a cell")
    missing = [cid for cid in selection if cid not in w.cells]
    if missing:
        raise OperationError(f"selection references missing cells: {missing}")

    w2 = w.clone()
    sel_set = set(selection)

    params = params or StructureParams()
    if kind is StructureKind.MULTI_ROW_GRID:
        params.orientation = Orientation.HORIZONTAL
    if kind is StructureKind.MULTI_COLUMN_GRID:
        params.orientation = Orientation.VERTICAL
    if kind is StructureKind.SKIP_PILE and params.visible_head is None:
        params.visible_head = selection[0]
    if kind is StructureKind.SKIP_LAYER and params.layer_direction is None:
        params.layer_direction = LayerDirection.CLOSER

    phase = AnalysisPhase.STORYTELLING if kind in CLUSTER_KINDS else AnalysisPhase.EXPLORATORY
    existing = next((s for s in w2.structures.values() if s.members == tuple(selection)), None)
    if existing is not None:
        # Re-composing the same member run keeps the structure in place.
        structure = existing
        structure.kind = kind
        structure.params = params
        structure.phase = phase
        centroid = None
    else:
        yaw = circular_mean_yaw([w2.cells[cid].pose.yaw for cid in selection])
        centroid = _mean_position(w2, selection)
        _extract_members(w2, sel_set)
        structure = Structure(
            id=w2.next_structure_id(),
            kind=kind,
            members=tuple(selection),
            anchor=Pose(centroid, yaw),
            params=params,
            phase=phase,
        )
        w2.structures[structure.id] = structure

    if kind is StructureKind.SKIP_LAYER:
        depth = params.layer_depth if params.layer_depth is not None else w2.config.layer_depth
        moved = layout_skip_layer(w2, selection, params.layer_direction, _depth_config(w2, depth))
        moved.structures[structure.id] = structure
        w2 = moved
        realize_structure(w2, structure)
    else:
        realize_structure(w2, structure, target_centroid=centroid)

    w2 = route_edges(w2)
    command = _apply_command_record(kind, selection, params)
    _log(w2, t, command, tuple(selection), len(selection) + 1)
    return w2


def _depth_config(w: Workspace, depth: float):
    if abs(depth - w.config.layer_depth) < 1e-12:
        return w.config
    import copy

    cfg = copy.deepcopy(w.config)
    cfg.layer_depth = depth
    return cfg


def _apply_command_record(kind: StructureKind, selection: list[str], params: StructureParams) -> TriggerCommand:
    mapping = {
        StructureKind.LINEAR_LINEAR: CommandKind.CREATE_LINEAR_LINEAR,
        StructureKind.MULTI_ROW_GRID: CommandKind.CREATE_GRID,
        StructureKind.MULTI_COLUMN_GRID: CommandKind.CREATE_GRID,
        StructureKind.PARALLEL_TREE: CommandKind.CREATE_PARALLEL_TREE,
        StructureKind.LOOP_CIRCLE: CommandKind.CREATE_LOOP_CIRCLE,
        StructureKind.CLUSTER_BY_FORMAT: CommandKind.CYCLE_CLUSTER_MODE,
        StructureKind.CLUSTER_BY_TASK: CommandKind.CYCLE_CLUSTER_MODE,
        StructureKind.SKIP_LAYER: CommandKind.APPLY_SKIP_LAYER,
        StructureKind.SKIP_FOLD: CommandKind.CREATE_SKIP_FOLD,
        StructureKind.SKIP_PILE: CommandKind.CREATE_SKIP_PILE,
    }
    cmd = TriggerCommand(kind=mapping[kind], selection=tuple(selection))
    if kind is StructureKind.MULTI_ROW_GRID:
        cmd.orientation = Orientation.HORIZONTAL
        cmd.rows = params.rows
    elif kind is StructureKind.MULTI_COLUMN_GRID:
        cmd.orientation = Orientation.VERTICAL
        cmd.rows = params.cols
    elif kind is StructureKind.PARALLEL_TREE:
        cmd.roots = params.branch_roots
    elif kind is StructureKind.SKIP_LAYER:
        cmd.direction = params.layer_direction
    elif kind is StructureKind.SKIP_FOLD:
        cmd.keep = params.keep
    elif kind is StructureKind.SKIP_PILE:
        cmd.head = params.visible_head
    return cmd


def _mean_position(w: Workspace, ids: list[str]) -> Vec3:
    positions = [w.cells[cid].pose.position for cid in ids]
    n = len(positions)
    return (
        sum(p[0] for p in positions) / n,
        sum(p[1] for p in positions) / n,
        sum(p[2] for p in positions) / n,
    )


def _extract_members(w: Workspace, taken: set[str]) -> None:
    """Remove the taken cells from every structure; donors re-lay or
    dissolve."""
    for sid in list(w.structures):
        s = w.structures[sid]
        remaining = [m for m in s.members if m not in taken]
        if len(remaining) == len(s.members):
            continue
        if len(remaining) < 2:
            _dissolve(w, sid)
        else:
            s.members = tuple(remaining)
            _shrink_params(s, remaining)
            realize_structure(w, s, target_centroid=_mean_position(w, remaining))
    for cid in taken:
        w.cells[cid].folded = False


def _dissolve(w: Workspace, sid: str) -> None:
    s = w.structures.pop(sid)
    for cid in s.members:
        if cid in w.cells:
            w.cells[cid].folded = False


def _shrink_params(s: Structure, remaining: list[str]) -> None:
    n = len(remaining)
    if s.kind is StructureKind.MULTI_ROW_GRID and s.params.rows is not None:
        s.params.rows = max(2, min(s.params.rows, n))
    if s.kind is StructureKind.MULTI_COLUMN_GRID and s.params.cols is not None:
        s.params.cols = max(2, min(s.params.cols, n))
    if s.kind is StructureKind.PARALLEL_TREE:
        roots = tuple(r for r in s.params.branch_roots if r in remaining and r != remaining[0])
        s.params.branch_roots = roots if roots else (remaining[1],)
    if s.kind is StructureKind.SKIP_FOLD:
        s.params.keep = tuple(k for k in s.params.keep if k in remaining)
    if s.kind is StructureKind.SKIP_PILE and s.params.visible_head not in remaining:
        s.params.visible_head = remaining[0]


def move_structure(w: Workspace, structure_id: str, grab: Vec3, release: Vec3,
                   t: int | None = None, proximity: float = PROXIMITY_GRABBER) -> Workspace:
    """Translate a whole structure rigidly by (release - grab).

    Intra-structure polylines are translated, not recomputed, so relative
    geometry is bit-identical. A grab outside the grabber's proximity is a
    no-op."""
    if structure_id not in w.structures:
        raise OperationError(f"no structure {structure_id}")
    w2 = w.clone()
    s = w2.structures[structure_id]
    centroid = _mean_position(w2, list(s.members))
    if vdist(grab, centroid) > proximity:
        w2.warn(f"grab at {grab} is outside the grabber proximity of {structure_id}")
        return w2
    delta = vsub(release, grab)
    member_set = set(s.members)
    for cid in s.members:
        cell = w2.cells[cid]
        cell.pose = cell.pose.translated(delta)
    s.anchor = s.anchor.translated(delta)
    crossing = []
    for key, edge in w2.edges.items():
        src_in, tgt_in = key[0] in member_set, key[1] in member_set
        if src_in and tgt_in:
            edge.polyline = tuple(vadd(p, delta) for p in edge.polyline)
        elif src_in or tgt_in:
            crossing.append(key)
    w2 = route_edge_subset(w2, crossing)
    command = TriggerCommand(kind=CommandKind.RELEASE_STRUCTURE, structure=structure_id, pose=release)
    _log(w2, t, command, tuple(s.members), 3)
    return w2


def structure_bounds(w: Workspace, s: Structure, inflate: float) -> tuple[Vec3, Vec3]:
    """World axis-aligned bounding box over member panel corners, inflated."""
    points: list[Vec3] = []
    for cid in s.members:
        panel = w.panel(cid)
        u, v, _ = panel.axes()
        for su in (-1.0, 1.0):
            for sv in (-1.0, 1.0):
                points.append(
                    vadd(
                        panel.center,
                        vadd(
                            (su * panel.half_w * u[0], su * panel.half_w * u[1], su * panel.half_w * u[2]),
                            (sv * panel.half_h * v[0], sv * panel.half_h * v[1], sv * panel.half_h * v[2]),
                        ),
                    )
                )
    lo = tuple(min(p[i] for p in points) - inflate for i in range(3))
    hi = tuple(max(p[i] for p in points) + inflate for i in range(3))
    return lo, hi  # type: ignore[return-value]


def _inside_bounds(p: Vec3, bounds: tuple[Vec3, Vec3]) -> bool:
    lo, hi = bounds
    return all(lo[i] <= p[i] <= hi[i] for i in range(3))  # closed boundary


def detach_or_insert_cell(w: Workspace, cell_id: str, release: Vec3, t: int | None = None) -> Workspace:
    """Release a grabbed cell: outside its structure's inflated bounds it
    detaches (predecessor and successor get a bypass edge); inside a
    structure's bounds it is inserted at the member index nearest the
    release point; in free space it simply moves."""
    if cell_id not in w.cells:
        raise OperationError(f"no cell {cell_id}")
    w2 = w.clone()
    home = w2.structure_of(cell_id)
    affected: tuple[str, ...] = (cell_id,)

    if home is not None:
        bounds = structure_bounds(w2, home, w2.config.cell_width)
        if _inside_bounds(release, bounds):
            members = [m for m in home.members if m != cell_id]
            index = _nearest_boundary_index(w2, members, release)
            home.members = tuple(members[:index] + [cell_id] + members[index:])
            realize_structure(w2, home, target_centroid=_mean_position(w2, list(home.members)))
        else:
            _detach(w2, home, cell_id, release)
    else:
        target = _containing_structure(w2, release)
        if target is not None:
            index = _nearest_boundary_index(w2, list(target.members), release)
            _splice_edges(w2, list(target.members), index, cell_id)
            target.members = tuple(list(target.members[:index]) + [cell_id] + list(target.members[index:]))
            realize_structure(w2, target, target_centroid=_mean_position(w2, list(target.members)))
            affected = (cell_id, target.id)
        else:
            cell = w2.cells[cell_id]
            cell.pose = Pose(release, cell.pose.yaw)

    w2 = route_edges(w2)
    command = TriggerCommand(kind=CommandKind.RELEASE_CELL, cell=cell_id, pose=release)
    _log(w2, t, command, affected, 3)
    return w2


def _detach(w: Workspace, home: Structure, cell_id: str, release: Vec3) -> None:
    members = list(home.members)
    at = members.index(cell_id)
    pred = members[at - 1] if at > 0 else None
    succ = members[at + 1] if at + 1 < len(members) else None
    members.remove(cell_id)

    for key in [k for k in w.edges if cell_id in k and (k[0] in home.members and k[1] in home.members)]:
        del w.edges[key]
    if pred is not None and succ is not None and (pred, succ) not in w.edges:
        w.add_edge(ExecutionEdge(from_id=pred, to_id=succ))

    cell = w.cells[cell_id]
    cell.folded = False
    cell.pose = Pose(release, cell.pose.yaw)

    if len(members) < 2:
        _dissolve(w, home.id)
    else:
        home.members = tuple(members)
        _shrink_params(home, members)
        realize_structure(w, home, target_centroid=_mean_position(w, members))


def _containing_structure(w: Workspace, p: Vec3) -> Structure | None:
    candidates = []
    for s in w.structures.values():
        if _inside_bounds(p, structure_bounds(w, s, w.config.cell_width)):
            candidates.append(s)
    if not candidates:
        return None
    return min(candidates, key=lambda s: (vdist(p, _mean_position(w, list(s.members))), s.id))


def _nearest_boundary_index(w: Workspace, members: list[str], p: Vec3) -> int:
    """Insertion index whose boundary (gap between consecutive members,
    extrapolated past the ends) lies nearest the release point."""
    positions = [w.cells[m].pose.position for m in members]
    n = len(positions)
    if n == 1:
        return 0 if vdist(p, positions[0]) >= 0 else 0
    boundaries: list[Vec3] = []
    first_step = vsub(positions[1], positions[0])
    boundaries.append(vsub(positions[0], (first_step[0] / 2, first_step[1] / 2, first_step[2] / 2)))
    for i in range(1, n):
        a, b = positions[i - 1], positions[i]
        boundaries.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2))
    last_step = vsub(positions[-1], positions[-2])
    boundaries.append(vadd(positions[-1], (last_step[0] / 2, last_step[1] / 2, last_step[2] / 2)))
    distances = [vdist(p, b) for b in boundaries]
    return distances.index(min(distances))


def _splice_edges(w: Workspace, members: list[str], index: int, cell_id: str) -> None:
    pred = members[index - 1] if index > 0 else None
    succ = members[index] if index < len(members) else None
    if pred is not None and succ is not None and (pred, succ) in w.edges:
        del w.edges[(pred, succ)]
    if pred is not None and (pred, cell_id) not in w.edges and pred != cell_id:
        w.add_edge(ExecutionEdge(from_id=pred, to_id=cell_id))
    if succ is not None and (cell_id, succ) not in w.edges and succ != cell_id:
        w.add_edge(ExecutionEdge(from_id=cell_id, to_id=succ))


def rewire_edge(w: Workspace, edge_key: tuple[str, str], end: str, new_cell: str,
                t: int | None = None) -> Workspace:
    """Replace one endpoint of an execution edge and re-route it."""
    if edge_key not in w.edges:
        raise OperationError(f"no edge {edge_key[0]}->{edge_key[1]}")
    if new_cell not in w.cells:
        raise OperationError(f"no cell {new_cell}")
    if end not in ("from", "to"):
        raise OperationError('end must be "from" or "to"')
    new_key = (new_cell, edge_key[1]) if end == "from" else (edge_key[0], new_cell)
    if new_key[0] == new_key[1]:
        raise OperationError("rewiring would create a self edge")
    if new_key != edge_key and new_key in w.edges:
        raise OperationError(f"edge {new_key[0]}->{new_key[1]} already exists")
    w2 = w.clone()
    edge = w2.edges.pop(edge_key)
    edge.from_id, edge.to_id = new_key
    w2.edges[new_key] = edge
    w2 = route_edge_subset(w2, [new_key])
    command = TriggerCommand(kind=CommandKind.RELEASE_EDGE_ENDPOINT, edge=edge_key, end=end, cell=new_cell)
    _log(w2, t, command, (new_key[0], new_key[1]), 2)
    return w2


def toggle_indicators(w: Workspace, selection: list[str], t: int | None = None) -> Workspace:
    """Flip visibility of every edge whose both endpoints are selected."""
    if not selection:
        raise OperationError("selection is empty")
    w2 = w.clone()
    sel_set = set(selection)
    flipped = []
    for key, edge in w2.edges.items():
        if key[0] in sel_set and key[1] in sel_set:
            edge.visible = not edge.visible
            flipped.append(key)
    w2 = route_edge_subset(w2, flipped)
    command = TriggerCommand(kind=CommandKind.TOGGLE_INDICATORS, selection=tuple(selection))
    _log(w2, t, command, tuple(selection), len(selection) + 1)
    return w2


def merge_structures(w: Workspace, src_id: str, dst_id: str, release: Vec3 | None = None,
                     t: int | None = None) -> Workspace:
    """Dissolve src into dst: src members join dst's member list at the
    boundary nearest the release point (appended when none is given), and
    dst re-lays-out under its own kind."""
    if src_id == dst_id:
        raise OperationError("cannot merge a structure into itself")
    for sid in (src_id, dst_id):
        if sid not in w.structures:
            raise OperationError(f"no structure {sid}")
    w2 = w.clone()
    src = w2.structures.pop(src_id)
    dst = w2.structures[dst_id]
    for cid in src.members:
        w2.cells[cid].folded = False
    index = len(dst.members) if release is None else _nearest_boundary_index(w2, list(dst.members), release)
    dst.members = tuple(list(dst.members[:index]) + list(src.members) + list(dst.members[index:]))
    _shrink_params(dst, list(dst.members))
    _grow_params(dst)
    realize_structure(w2, dst, target_centroid=_mean_position(w2, list(dst.members)))
    w2 = route_edges(w2)
    command = TriggerCommand(kind=CommandKind.MERGE_STRUCTURES, src=src_id, dst=dst_id, pose=release)
    _log(w2, t, command, tuple(dst.members), 2)
    return w2


def _grow_params(s: Structure) -> None:
    n = len(s.members)
    if s.kind is StructureKind.MULTI_ROW_GRID:
        s.params.rows = max(2, min(s.params.rows or 2, n))
    if s.kind is StructureKind.MULTI_COLUMN_GRID:
        s.params.cols = max(2, min(s.params.cols or 2, n))


def adjust_dimensions(w: Workspace, structure_id: str, delta: int, t: int | None = None) -> Workspace:
    """Change a grid's row (or column) count by delta, clamped to
    [2, member count]."""
    if structure_id not in w.structures:
        raise OperationError(f"no structure {structure_id}")
    s0 = w.structures[structure_id]
    if s0.kind not in (StructureKind.MULTI_ROW_GRID, StructureKind.MULTI_COLUMN_GRID):
        raise OperationError("dimensions can only be adjusted on grid structures")
    w2 = w.clone()
    s = w2.structures[structure_id]
    n = len(s.members)
    if s.kind is StructureKind.MULTI_ROW_GRID:
        s.params.rows = max(2, min((s.params.rows or 2) + delta, n))
    else:
        s.params.cols = max(2, min((s.params.cols or 2) + delta, n))
    realize_structure(w2, s)
    w2 = route_edges(w2)
    command = TriggerCommand(kind=CommandKind.ADJUST_DIMENSIONS, structure=structure_id, delta=delta)
    _log(w2, t, command, tuple(s.members), 2)
    return w2


def adjust_orientation(w: Workspace, structure_id: str, t: int | None = None) -> Workspace:
    """Toggle a grid between row/column form, or flip a tree's fan axis."""
    if structure_id not in w.structures:
        raise OperationError(f"no structure {structure_id}")
    s0 = w.structures[structure_id]
    allowed = (StructureKind.MULTI_ROW_GRID, StructureKind.MULTI_COLUMN_GRID, StructureKind.PARALLEL_TREE)
    if s0.kind not in allowed:
        raise OperationError("orientation can only be adjusted on grids and trees")
    w2 = w.clone()
    s = w2.structures[structure_id]
    if s.kind is StructureKind.MULTI_ROW_GRID:
        s.kind = StructureKind.MULTI_COLUMN_GRID
        s.params.cols, s.params.rows = s.params.rows, None
        s.params.orientation = Orientation.VERTICAL
    elif s.kind is StructureKind.MULTI_COLUMN_GRID:
        s.kind = StructureKind.MULTI_ROW_GRID
        s.params.rows, s.params.cols = s.params.cols, None
        s.params.orientation = Orientation.HORIZONTAL
    else:
        s.params.orientation = (
            Orientation.VERTICAL if s.params.orientation is Orientation.HORIZONTAL else Orientation.HORIZONTAL
        )
    realize_structure(w2, s)
    w2 = route_edges(w2)
    command = TriggerCommand(kind=CommandKind.ADJUST_ORIENTATION, structure=structure_id)
    _log(w2, t, command, tuple(s.members), 2)
    return w2


def cycle_cluster_mode(w: Workspace, structure_id: str, t: int | None = None) -> Workspace:
    """Swipe over a structure: non-cluster kinds become cluster-by-format,
    format becomes task (when any member carries a tag), task returns to
    format. Implemented as a fresh composition over the same members."""
    if structure_id not in w.structures:
        raise OperationError(f"no structure {structure_id}")
    s = w.structures[structure_id]
    members = list(s.members)
    tagged = any(w.cells[cid].task_tag for cid in members)
    if s.kind is StructureKind.CLUSTER_BY_FORMAT and tagged:
        next_kind = StructureKind.CLUSTER_BY_TASK
    else:
        next_kind = StructureKind.CLUSTER_BY_FORMAT
    return apply_structure(w, members, next_kind, t=t)


def release_grabbed_cell(w: Workspace, cell_id: str, release: Vec3, t: int | None = None) -> Workspace:
    """Alias for detach_or_insert_cell: grabbing and releasing a cell is
    the one interaction that covers detach, insert, and free movement."""
    return detach_or_insert_cell(w, cell_id, release, t=t)


# ---------------------------------------------------------------------------
# Command replay


@dataclass
class ReplayContext:
    """Selection and grab state threaded through a command sequence."""

    selection: list[str] = field(default_factory=list)
    roots: list[str] = field(default_factory=list)
    grabbed_structure: tuple[str, Vec3] | None = None
    grabbed_cell: str | None = None
    grabbed_edge: tuple[tuple[str, str], str] | None = None


def apply_command(w: Workspace, cmd: TriggerCommand, ctx: ReplayContext) -> Workspace:
    """Apply one command to the workspace, updating the replay context.

    Unknown selections fall back to the context's running selection, which
    mirrors how the gesture interpreter tracks the proxy window."""
    kind = cmd.kind
    if kind is CommandKind.SELECT_CELL:
        if cmd.cell not in w.cells:
            raise OperationError(f"no cell {cmd.cell}")
        if cmd.cell not in ctx.selection:
            ctx.selection.append(cmd.cell)
        return w
    if kind is CommandKind.DESELECT_ALL:
        ctx.selection.clear()
        ctx.roots.clear()
        return w
    if kind is CommandKind.MARK_BRANCH_ROOT:
        if cmd.cell not in ctx.selection:
            raise OperationError(f"branch root {cmd.cell} is not selected")
        if cmd.cell not in ctx.roots:
            ctx.roots.append(cmd.cell)
        return w
    if kind is CommandKind.CANCEL:
        return w

    selection = list(cmd.selection) if cmd.selection else list(ctx.selection)

    if kind is CommandKind.CREATE_LINEAR_LINEAR:
        w = apply_structure(w, selection, StructureKind.LINEAR_LINEAR, t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.CREATE_GRID:
        if cmd.orientation is Orientation.VERTICAL:
            params = StructureParams(cols=cmd.rows, orientation=Orientation.VERTICAL)
            w = apply_structure(w, selection, StructureKind.MULTI_COLUMN_GRID, params, t=cmd.t)
        else:
            params = StructureParams(rows=cmd.rows)
            w = apply_structure(w, selection, StructureKind.MULTI_ROW_GRID, params, t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.CREATE_PARALLEL_TREE:
        roots = tuple(cmd.roots) if cmd.roots else tuple(ctx.roots)
        w = apply_structure(w, selection, StructureKind.PARALLEL_TREE,
                            StructureParams(branch_roots=roots), t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.CREATE_LOOP_CIRCLE:
        w = apply_structure(w, selection, StructureKind.LOOP_CIRCLE, t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.CREATE_SKIP_FOLD:
        keep = tuple(cmd.keep) if cmd.keep else default_fold_keep(w, selection)
        w = apply_structure(w, selection, StructureKind.SKIP_FOLD,
                            StructureParams(keep=keep), t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.CREATE_SKIP_PILE:
        head = cmd.head if cmd.head else selection[0] if selection else None
        w = apply_structure(w, selection, StructureKind.SKIP_PILE,
                            StructureParams(visible_head=head), t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.APPLY_SKIP_LAYER:
        w = apply_structure(w, selection, StructureKind.SKIP_LAYER,
                            StructureParams(layer_direction=cmd.direction or LayerDirection.CLOSER), t=cmd.t)
        ctx.selection.clear(); ctx.roots.clear()
        return w
    if kind is CommandKind.CYCLE_CLUSTER_MODE:
        return cycle_cluster_mode(w, cmd.structure, t=cmd.t)
    if kind is CommandKind.GRAB_STRUCTURE:
        ctx.grabbed_structure = (cmd.structure, cmd.pose or (0.0, 0.0, 0.0))
        return w
    if kind is CommandKind.RELEASE_STRUCTURE:
        if ctx.grabbed_structure is None:
            raise OperationError("release without a grabbed structure")
        sid, grab_pose = ctx.grabbed_structure
        ctx.grabbed_structure = None
        release = cmd.pose or grab_pose
        # Releasing into another structure merges; anywhere else moves.
        dst = _structure_under(w, release, exclude=sid)
        if dst is not None:
            return merge_structures(w, sid, dst.id, release, t=cmd.t)
        return move_structure(w, sid, grab_pose, release, t=cmd.t)
    if kind is CommandKind.GRAB_CELL:
        ctx.grabbed_cell = cmd.cell
        return w
    if kind is CommandKind.RELEASE_CELL:
        cell_id = cmd.cell or ctx.grabbed_cell
        ctx.grabbed_cell = None
        if cell_id is None:
            raise OperationError("release without a grabbed cell")
        return detach_or_insert_cell(w, cell_id, cmd.pose or (0.0, 0.0, 0.0), t=cmd.t)
    if kind is CommandKind.GRAB_EDGE_ENDPOINT:
        ctx.grabbed_edge = (cmd.edge, cmd.end or "to")
        return w
    if kind is CommandKind.RELEASE_EDGE_ENDPOINT:
        if cmd.edge is not None and cmd.end is not None:
            edge, end = cmd.edge, cmd.end
        elif ctx.grabbed_edge is not None:
            edge, end = ctx.grabbed_edge
        else:
            raise OperationError("release without a grabbed edge endpoint")
        ctx.grabbed_edge = None
        return rewire_edge(w, edge, end, cmd.cell, t=cmd.t)
    if kind is CommandKind.TOGGLE_INDICATORS:
        return toggle_indicators(w, selection, t=cmd.t)
    if kind is CommandKind.MERGE_STRUCTURES:
        return merge_structures(w, cmd.src, cmd.dst, cmd.pose, t=cmd.t)
    if kind is CommandKind.ADJUST_DIMENSIONS:
        return adjust_dimensions(w, cmd.structure, cmd.delta or 0, t=cmd.t)
    if kind is CommandKind.ADJUST_ORIENTATION:
        return adjust_orientation(w, cmd.structure, t=cmd.t)
    raise OperationError(f"cannot replay command {kind.value}")


def _structure_under(w: Workspace, p: Vec3, exclude: str) -> Structure | None:
    candidates = []
    for s in w.structures.values():
        if s.id == exclude:
            continue
        if _inside_bounds(p, structure_bounds(w, s, w.config.cell_width)):
            candidates.append(s)
    if not candidates:
        return None
    return min(candidates, key=lambda s: (vdist(p, _mean_position(w, list(s.members))), s.id))


def replay_commands(w: Workspace, commands: list[TriggerCommand]) -> Workspace:
    """Apply a whole command log in order."""
    ctx = ReplayContext()
    for cmd in commands:
        w = apply_command(w, cmd, ctx)
    return w

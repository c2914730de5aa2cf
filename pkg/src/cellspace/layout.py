"""Deterministic layout engine for the ten composition structures.

Every function here is a pure function of its inputs and the layout
configuration: identical inputs produce bit-identical poses and routed
polylines. Layouts are computed in a local frame (x right, y up, z toward
the viewer of the structure) and placed with the structure anchor pose.

Structure catalog:
  execution focused - linear/linear, multi-row grid, multi-column grid,
                      parallel tree, loop circle
  narrative focused - cluster by format, cluster by task (execution
                      indicators hidden)
  hybrid            - skip layer (depth), skip fold (bars), skip pile
                      (stack behind a visible head)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import Pose, Vec3, segment_hits_box, vadd, vdist, vscale, vsub, wrap_angle
from .model import (
    Cell,
    CellKind,
    ExecutionEdge,
    LayerDirection,
    LayoutConfig,
    Orientation,
    Structure,
    StructureKind,
    StructureParams,
    Workspace,
    effective_format,
    panel_box,
)


class LayoutParameterError(ValueError):
    """A structure layout was asked for with invalid parameters."""


#: Kinds whose intra-member execution edges are rebuilt canonically.
REBUILD_KINDS = {
    StructureKind.LINEAR_LINEAR,
    StructureKind.MULTI_ROW_GRID,
    StructureKind.MULTI_COLUMN_GRID,
    StructureKind.PARALLEL_TREE,
    StructureKind.LOOP_CIRCLE,
}

CLUSTER_KINDS = {StructureKind.CLUSTER_BY_FORMAT, StructureKind.CLUSTER_BY_TASK}


@dataclass
class LayoutPlan:
    """Result of a local layout: poses in the structure frame plus the edge
    treatment the kind demands."""

    local_poses: dict[str, Pose] | None
    canonical_edges: list[tuple[str, str]] | None = None
    folded: set[str] = field(default_factory=set)
    hide_intra: bool = False
    pile_head: str | None = None
    circle_radius: float | None = None


# ---------------------------------------------------------------------------
# Initial placement


def initial_circular_layout(w: Workspace) -> Workspace:
    """Place all cells on a cylinder arc around the user, equal angular
    steps left to right, every cell facing the origin.

    The radius grows beyond the configured minimum when the cells would
    not fit the arc at the configured spacing.
    """
    if not w.cells:
        raise LayoutParameterError("cannot lay out an empty workspace")
    w = w.clone()
    cfg = w.config
    n = len(w.cells)
    span = cfg.initial_arc_span
    radius = max(cfg.initial_radius, n * (cfg.cell_width + cfg.gap) / span)
    for i, cell in enumerate(w.cells.values()):
        theta = 0.0 if n == 1 else -span / 2.0 + i * span / (n - 1)
        position = (radius * math.sin(theta), 0.0, -radius * math.cos(theta))
        cell.pose = Pose(position, -theta)
        cell.folded = False
    return route_edges(w)


# ---------------------------------------------------------------------------
# Local layouts (poses in the structure frame)


def layout_linear_linear(members: list[str], anchor: Pose, cfg: LayoutConfig,
                         params: StructureParams | None = None) -> tuple[dict[str, Pose], list[tuple[str, str]]]:
    """Single row, execution order equal to reading order."""
    if not members:
        raise LayoutParameterError("linear layout needs at least one member")
    plan = _linear_plan(members, cfg, params or StructureParams())
    return _placed(plan.local_poses, anchor), plan.canonical_edges


def layout_grid(members: list[str], count: int, kind: StructureKind, anchor: Pose,
                cfg: LayoutConfig, params: StructureParams | None = None) -> tuple[dict[str, Pose], list[tuple[str, str]]]:
    """Row-major grid with `count` rows (multi-row) or column-major grid
    with `count` columns (multi-column). Wrap edges connect the end of one
    lane to the start of the next."""
    p = params or StructureParams()
    if kind is StructureKind.MULTI_ROW_GRID:
        p.rows = count
    else:
        p.cols = count
    plan = _grid_plan(members, kind, cfg, p)
    return _placed(plan.local_poses, anchor), plan.canonical_edges


def layout_parallel_tree(members: list[str], branch_roots: list[str], anchor: Pose,
                         cfg: LayoutConfig, params: StructureParams | None = None) -> tuple[dict[str, Pose], list[tuple[str, str]]]:
    """First member is the parent; each selected root starts a contiguous
    branch running to the next root."""
    p = params or StructureParams()
    p.branch_roots = tuple(branch_roots)
    plan = _tree_plan(members, cfg, p)
    return _placed(plan.local_poses, anchor), plan.canonical_edges


def layout_loop_circle(members: list[str], anchor: Pose, cfg: LayoutConfig,
                       params: StructureParams | None = None) -> tuple[dict[str, Pose], list[tuple[str, str]]]:
    """Members on a circle, first at the top, clockwise, with a closing
    edge back to the first member."""
    plan = _circle_plan(members, cfg, params or StructureParams())
    return _placed(plan.local_poses, anchor), plan.canonical_edges


def layout_cluster(cells: list[Cell], mode: StructureKind, anchor: Pose,
                   cfg: LayoutConfig) -> tuple[dict[str, Pose], list[tuple[str, list[str]]]]:
    """Cluster members by content format or task tag; returns poses plus
    the partition in first-appearance order."""
    plan, partition = _cluster_plan(cells, mode, cfg, StructureParams())
    return _placed(plan.local_poses, anchor), partition


def layout_skip_fold(members: list[str], keep: list[str], anchor: Pose, cfg: LayoutConfig,
                     params: StructureParams | None = None) -> tuple[dict[str, Pose], set[str]]:
    """Collapse runs of non-kept members into bars stacked below their
    preceding kept cell; returns poses plus the folded id set."""
    p = params or StructureParams()
    p.keep = tuple(keep)
    plan = _fold_plan(members, cfg, p)
    return _placed(plan.local_poses, anchor), plan.folded


def layout_skip_pile(members: list[str], head: str, anchor: Pose, cfg: LayoutConfig,
                     params: StructureParams | None = None) -> dict[str, Pose]:
    """Stack members behind a fully visible head cell."""
    p = params or StructureParams()
    p.visible_head = head
    plan = _pile_plan(members, cfg, p)
    return _placed(plan.local_poses, anchor)


def layout_skip_layer(w: Workspace, selected: list[str], direction: LayerDirection,
                      cfg: LayoutConfig | None = None) -> Workspace:
    """Translate each selected cell along its line to the user (closer or
    away) by the layer depth, and add a visible skip-edge chain over the
    selection in workspace order. Unselected cells stay put."""
    if not selected:
        raise LayoutParameterError("skip layer needs a non-empty selection")
    missing = [cid for cid in selected if cid not in w.cells]
    if missing:
        raise LayoutParameterError(f"skip layer selection references missing cells: {missing}")
    w = w.clone()
    cfg = cfg or w.config
    depth = cfg.layer_depth
    for cid in selected:
        cell = w.cells[cid]
        to_user = vsub(w.user_position, cell.pose.position)
        distance = math.sqrt(sum(v * v for v in to_user))
        if distance < 1e-9:
            w.warn(f"cell {cid} coincides with the user position; not moved")
            continue
        unit = vscale(to_user, 1.0 / distance)
        step = depth if direction is LayerDirection.CLOSER else -depth
        cell.pose = Pose(vadd(cell.pose.position, vscale(unit, step)), cell.pose.yaw)
    apply_skip_chain(w, selected)
    return route_edges(w)


def apply_skip_chain(w: Workspace, selected: list[str]) -> None:
    """Chain the selected cells with visible skip edges in workspace cell
    order. An existing edge on a chained pair is flagged rather than
    duplicated."""
    ordered = [cid for cid in w.cells if cid in set(selected)]
    for a, b in zip(ordered, ordered[1:]):
        edge = w.edges.get((a, b))
        if edge is None:
            w.add_edge(ExecutionEdge(from_id=a, to_id=b, visible=True, is_skip=True))
        else:
            edge.visible = True
            edge.is_skip = True


# ---------------------------------------------------------------------------
# Plans


def _step(cfg: LayoutConfig, params: StructureParams) -> tuple[float, float]:
    g = cfg.gap if params.gap is None else params.gap
    return cfg.cell_width + g, cfg.cell_height + g


def _linear_plan(members: list[str], cfg: LayoutConfig, params: StructureParams) -> LayoutPlan:
    if not members:
        raise LayoutParameterError("linear layout needs at least one member")
    dx, _ = _step(cfg, params)
    poses = {cid: Pose((i * dx, 0.0, 0.0)) for i, cid in enumerate(members)}
    edges = list(zip(members, members[1:]))
    return LayoutPlan(poses, edges)


def _grid_fill(n: int, kind: StructureKind, count: int) -> list[tuple[int, int]]:
    """(row, col) of each member index; row-major for multi-row grids,
    column-major for multi-column grids."""
    if kind is StructureKind.MULTI_ROW_GRID:
        cols = math.ceil(n / count)
        return [(i // cols, i % cols) for i in range(n)]
    rows = math.ceil(n / count)
    return [(i % rows, i // rows) for i in range(n)]


def _grid_plan(members: list[str], kind: StructureKind, cfg: LayoutConfig, params: StructureParams) -> LayoutPlan:
    n = len(members)
    count = params.rows if kind is StructureKind.MULTI_ROW_GRID else params.cols
    label = "rows" if kind is StructureKind.MULTI_ROW_GRID else "cols"
    if count is None or not 2 <= count <= n:
        raise LayoutParameterError(f"{label} must be between 2 and the member count ({n}); got {count}")
    dx, dy = _step(cfg, params)
    cells_rc = _grid_fill(n, kind, count)
    poses = {cid: Pose((c * dx, -r * dy, 0.0)) for cid, (r, c) in zip(members, cells_rc)}
    edges = []
    for i in range(n - 1):
        edges.append((members[i], members[i + 1]))
    return LayoutPlan(poses, edges)


def grid_wrap_pairs(members: tuple[str, ...] | list[str], kind: StructureKind, count: int) -> set[tuple[str, str]]:
    """Edges that jump from the end of one lane to the start of the next."""
    n = len(members)
    cells_rc = _grid_fill(n, kind, count)
    lane = 0 if kind is StructureKind.MULTI_ROW_GRID else 1
    wraps = set()
    for i in range(n - 1):
        if cells_rc[i + 1][lane] == cells_rc[i][lane] + 1:
            wraps.add((members[i], members[i + 1]))
    return wraps


def _tree_plan(members: list[str], cfg: LayoutConfig, params: StructureParams) -> LayoutPlan:
    if len(members) < 2:
        raise LayoutParameterError("a tree needs a parent and at least one branch member")
    roots = list(params.branch_roots)
    if not roots:
        raise LayoutParameterError("tree layout needs at least one branch root")
    if members[0] in roots:
        raise LayoutParameterError("the first member is the parent and cannot be a branch root")
    index = {cid: i for i, cid in enumerate(members)}
    if any(r not in index for r in roots):
        raise LayoutParameterError("branch roots must be members")
    positions = [index[r] for r in roots]
    if positions != sorted(positions):
        raise LayoutParameterError("branch roots must be listed in member order")
    if positions[0] != 1:
        # Members between the parent and the first root form an implicit
        # leading branch, so every member lands somewhere.
        positions = [1] + positions

    dx, dy = _step(cfg, params)
    branch_count = len(positions)
    bounds = positions + [len(members)]
    poses = {members[0]: Pose((0.0, 0.0, 0.0))}
    edges: list[tuple[str, str]] = []
    vertical = params.orientation is Orientation.VERTICAL
    for k in range(branch_count):
        branch = members[bounds[k] : bounds[k + 1]]
        if vertical:
            off = (k - (branch_count - 1) / 2.0) * dx
        else:
            off = ((branch_count - 1) / 2.0 - k) * dy
        for j, cid in enumerate(branch):
            if vertical:
                poses[cid] = Pose((off, -(j + 1) * dy, 0.0))
            else:
                poses[cid] = Pose(((j + 1) * dx, off, 0.0))
        edges.append((members[0], branch[0]))
        edges.extend(zip(branch, branch[1:]))
    return LayoutPlan(poses, edges)


def circle_radius_for(n: int, cfg: LayoutConfig, gap: float | None = None) -> float:
    """Loop-circle radius: the circumference fits n cells at their spacing,
    never below the configured minimum, and grown further when uniform
    spacing would still fail the axis-aligned overlap test for some
    adjacent pair (which happens on the diagonal stretches of large
    rings)."""
    step = cfg.cell_width + (cfg.gap if gap is None else gap)
    radius = max(cfg.min_circle_radius, n * step / math.tau)
    if n < 3:
        return radius
    need_w = cfg.cell_width + cfg.min_clearance + 1e-9
    need_h = cfg.cell_height + cfg.min_clearance + 1e-9
    worst_chord = 0.0
    for i in range(n):
        a0 = math.pi / 2.0 - math.tau * i / n
        a1 = math.pi / 2.0 - math.tau * (i + 1) / n
        ux = math.cos(a1) - math.cos(a0)
        uy = math.sin(a1) - math.sin(a0)
        norm = math.hypot(ux, uy)
        ux, uy = abs(ux) / norm, abs(uy) / norm
        by_width = need_w / ux if ux > 1e-12 else math.inf
        by_height = need_h / uy if uy > 1e-12 else math.inf
        worst_chord = max(worst_chord, min(by_width, by_height))
    return max(radius, worst_chord / (2.0 * math.sin(math.pi / n)))


def _circle_plan(members: list[str], cfg: LayoutConfig, params: StructureParams) -> LayoutPlan:
    n = len(members)
    if n < 2:
        raise LayoutParameterError("a loop needs at least 2 members")
    radius = circle_radius_for(n, cfg, params.gap)
    poses = {}
    for i, cid in enumerate(members):
        theta = math.pi / 2.0 - math.tau * i / n
        poses[cid] = Pose((radius * math.cos(theta), radius * math.sin(theta), 0.0))
    edges = [(members[i], members[(i + 1) % n]) for i in range(n)]
    return LayoutPlan(poses, edges, circle_radius=radius)


def cluster_label(cell: Cell, mode: StructureKind) -> str:
    if mode is StructureKind.CLUSTER_BY_FORMAT:
        return effective_format(cell).value
    return cell.task_tag if cell.task_tag else "untagged"


def cluster_partition(cells: list[Cell], mode: StructureKind) -> list[tuple[str, list[str]]]:
    """Exact partition of members in first-appearance order."""
    groups: dict[str, list[str]] = {}
    order: list[str] = []
    for cell in cells:
        label = cluster_label(cell, mode)
        if label not in groups:
            groups[label] = []
            order.append(label)
        groups[label].append(cell.id)
    return [(label, groups[label]) for label in order]


def _cluster_plan(cells: list[Cell], mode: StructureKind, cfg: LayoutConfig,
                  params: StructureParams) -> tuple[LayoutPlan, list[tuple[str, list[str]]]]:
    if not cells:
        raise LayoutParameterError("cluster layout needs at least one member")
    if mode is StructureKind.CLUSTER_BY_TASK and not any(c.task_tag for c in cells):
        raise LayoutParameterError("cluster by task needs at least one tagged member")
    dx, dy = _step(cfg, params)
    g = cfg.gap if params.gap is None else params.gap
    partition = cluster_partition(cells, mode)
    poses = {}
    x_offset = 0.0
    for _, group in partition:
        size = len(group)
        rows = math.ceil(math.sqrt(size))
        cols = math.ceil(size / rows)
        for i, cid in enumerate(group):
            r, c = i // cols, i % cols
            poses[cid] = Pose((x_offset + c * dx, -r * dy, 0.0))
        width = cols * cfg.cell_width + (cols - 1) * g
        x_offset += width + cfg.cluster_gap
    return LayoutPlan(poses, canonical_edges=None, hide_intra=True), partition


def _fold_plan(members: list[str], cfg: LayoutConfig, params: StructureParams) -> LayoutPlan:
    keep = [cid for cid in members if cid in set(params.keep)]
    if any(k not in members for k in params.keep):
        raise LayoutParameterError("fold keep list contains a non-member")
    dx, _ = _step(cfg, params)
    bar = cfg.fold_bar_height
    poses: dict[str, Pose] = {}
    folded: set[str] = set()
    keep_set = set(keep)
    kept_seen = 0
    stack_depth: dict[int, int] = {}
    for cid in members:
        if cid in keep_set:
            poses[cid] = Pose(((kept_seen) * dx, 0.0, 0.0))
            kept_seen += 1
        else:
            slot = max(kept_seen - 1, 0)  # prefix runs stack below the anchor
            depth = stack_depth.get(slot, 0)
            y = -(cfg.cell_height / 2.0) - bar / 2.0 - depth * bar
            poses[cid] = Pose((slot * dx, y, 0.0))
            stack_depth[slot] = depth + 1
            folded.add(cid)
    return LayoutPlan(poses, canonical_edges=None, folded=folded)


def _pile_plan(members: list[str], cfg: LayoutConfig, params: StructureParams) -> LayoutPlan:
    head = params.visible_head
    if head not in members:
        raise LayoutParameterError("pile head must be a member")
    poses = {head: Pose((0.0, 0.0, 0.0))}
    j = 0
    for cid in members:
        if cid == head:
            continue
        j += 1
        poses[cid] = Pose((0.0, j * cfg.pile_offset_y, j * cfg.pile_offset_z))
    return LayoutPlan(poses, canonical_edges=None, hide_intra=True, pile_head=head)


def plan_structure(w: Workspace, structure: Structure) -> LayoutPlan:
    """Local layout plan for an existing structure record."""
    members = list(structure.members)
    cfg = w.config
    params = structure.params
    kind = structure.kind
    if kind is StructureKind.LINEAR_LINEAR:
        return _linear_plan(members, cfg, params)
    if kind in (StructureKind.MULTI_ROW_GRID, StructureKind.MULTI_COLUMN_GRID):
        return _grid_plan(members, kind, cfg, params)
    if kind is StructureKind.PARALLEL_TREE:
        return _tree_plan(members, cfg, params)
    if kind is StructureKind.LOOP_CIRCLE:
        return _circle_plan(members, cfg, params)
    if kind in CLUSTER_KINDS:
        cells = [w.cells[cid] for cid in members]
        plan, _ = _cluster_plan(cells, kind, cfg, params)
        return plan
    if kind is StructureKind.SKIP_FOLD:
        return _fold_plan(members, cfg, params)
    if kind is StructureKind.SKIP_PILE:
        return _pile_plan(members, cfg, params)
    if kind is StructureKind.SKIP_LAYER:
        return LayoutPlan(local_poses=None)
    raise LayoutParameterError(f"unknown structure kind {kind}")


def _placed(local_poses: dict[str, Pose] | None, anchor: Pose) -> dict[str, Pose]:
    assert local_poses is not None
    return {cid: anchor.compose(p) for cid, p in local_poses.items()}


def realize_structure(w: Workspace, structure: Structure, target_centroid: Vec3 | None = None) -> None:
    """Lay a structure out in place and apply its kind's edge treatment.

    The anchor pose marks the member centroid: local layouts are centered
    on their own centroid before being rotated onto the anchor, so
    re-laying-out an existing structure (orientation toggles, dimension
    changes, member edits) keeps it anchored bit-stably in place. Pass
    `target_centroid` only when (re)anchoring a fresh composition."""
    plan = plan_structure(w, structure)
    members = list(structure.members)

    if plan.local_poses is not None:
        if target_centroid is not None:
            structure.anchor = Pose(target_centroid, structure.anchor.yaw)
        anchor = structure.anchor
        locals_ = [plan.local_poses[m].position for m in members]
        n = len(locals_)
        lc = (
            sum(p[0] for p in locals_) / n,
            sum(p[1] for p in locals_) / n,
            sum(p[2] for p in locals_) / n,
        )
        for cid in members:
            local = plan.local_poses[cid]
            offset = anchor.rotate(vsub(local.position, lc))
            w.cells[cid].pose = Pose(vadd(anchor.position, offset), wrap_angle(anchor.yaw + local.yaw))
    else:
        structure.anchor = Pose(_centroid(w, members), structure.anchor.yaw)

    for cid in members:
        w.cells[cid].folded = cid in plan.folded

    member_set = set(members)
    if plan.canonical_edges is not None:
        for key in [k for k in w.edges if k[0] in member_set and k[1] in member_set]:
            del w.edges[key]
        for a, b in plan.canonical_edges:
            w.add_edge(ExecutionEdge(from_id=a, to_id=b, visible=True))
    if plan.hide_intra:
        for key, edge in w.edges.items():
            if key[0] in member_set and key[1] in member_set:
                edge.visible = False
    if plan.pile_head is not None:
        _reattach_to_head(w, member_set, plan.pile_head)
    if plan.circle_radius is not None:
        structure.params.circle_radius = plan.circle_radius
    if structure.kind is StructureKind.SKIP_LAYER:
        apply_skip_chain(w, members)


def _centroid(w: Workspace, members: list[str]) -> Vec3:
    xs = [w.cells[m].pose.position for m in members]
    n = len(xs)
    return (sum(p[0] for p in xs) / n, sum(p[1] for p in xs) / n, sum(p[2] for p in xs) / n)


def _reattach_to_head(w: Workspace, member_set: set[str], head: str) -> None:
    """External edges into or out of a pile attach to its head; duplicate
    results are dropped deterministically."""
    rebuilt: dict[tuple[str, str], ExecutionEdge] = {}
    for edge in w.edges.values():
        src_in = edge.from_id in member_set
        tgt_in = edge.to_id in member_set
        if src_in != tgt_in:
            if src_in and edge.from_id != head:
                edge.from_id = head
            if tgt_in and edge.to_id != head:
                edge.to_id = head
        if edge.key in rebuilt:
            continue
        rebuilt[edge.key] = edge
    w.edges = rebuilt


# ---------------------------------------------------------------------------
# Edge routing


def route_edges(w: Workspace) -> Workspace:
    """Give every visible edge a polyline that avoids cell interiors.

    Straight two-point segments are used when the run from the source
    attachment to the target attachment stays clear of every other cell
    (with the configured clearance); otherwise a four-point detour swings
    below (or, for vertical runs, around the side of) the obstructions.
    Hidden edges carry no polyline.
    """
    w = w.clone()
    _route_into(w, sorted(w.edges))
    return w


def route_edge_subset(w: Workspace, keys: list[tuple[str, str]]) -> Workspace:
    """Re-route only the named edges, leaving every other polyline's bits
    untouched (rigid structure moves rely on this)."""
    w = w.clone()
    _route_into(w, sorted(k for k in keys if k in w.edges))
    return w


def _route_into(w: Workspace, keys: list[tuple[str, str]]) -> None:
    cfg = w.config
    panels = {cid: panel_box(cell, cfg) for cid, cell in w.cells.items()}
    overrides = _wrap_side_overrides(w)

    for key in keys:
        edge = w.edges[key]
        if not edge.visible or edge.from_id not in panels or edge.to_id not in panels:
            edge.polyline = ()
            continue
        src = panels[edge.from_id]
        tgt = panels[edge.to_id]
        sides = overrides.get(key) or _attachment_sides(src, tgt)
        a = src.edge_midpoint(sides[0])
        b = tgt.edge_midpoint(sides[1])
        if vdist(a, b) < 1e-9:
            # Touching panels (fold stacks): hug the shared left edge.
            sides = ("left", "left")
            a = src.edge_midpoint("left")
            b = tgt.edge_midpoint("left")
        if vdist(a, b) < 1e-9:
            edge.polyline = ()
            w.warn(f"edge {key[0]}->{key[1]} is unroutable: endpoints coincide")
            continue
        obstacle_ids = [cid for cid in panels if cid not in key]

        attempts = [(a, b, sides)]
        alternative = _alternative_attachments(src, tgt, sides)
        if alternative is not None:
            attempts.append(alternative)
        fallback: tuple[Vec3, ...] | None = None
        routed = False
        for aa, bb, ss in attempts:
            blocked = [cid for cid in obstacle_ids
                       if segment_hits_box(aa, bb, panels[cid], cfg.min_clearance)]
            if not blocked:
                edge.polyline = (aa, bb)
                routed = True
                break
            # Wide exit clears corners of neighboring rows; the narrow one
            # fits tight runs where the wide exit would clip the next cell.
            styles = (("corridor", 1.0), ("corridor", 0.5), ("staircase", 1.0))
            for style, exit_scale in styles:
                candidate, clean = _detour(
                    w, aa, bb, ss, src, panels, obstacle_ids, blocked, style, exit_scale
                )
                if clean:
                    edge.polyline = candidate
                    routed = True
                    break
                if fallback is None:
                    fallback = candidate
            if routed:
                break
        if not routed:
            w.warn(f"edge {key[0]}->{key[1]}: detour still collides after expansion")
            edge.polyline = fallback if fallback is not None else (a, b)


def _attachment_sides(src, tgt) -> tuple[str, str]:
    """Pick facing perimeter midpoints by the dominant axis of the offset,
    normalized by panel size."""
    d = src.to_local(tgt.center)
    nx = abs(d[0]) / max(2.0 * src.half_w, 1e-9)
    ny = abs(d[1]) / max(2.0 * src.half_h, 1e-9)
    if nx < 1e-9 and ny < 1e-9:
        return "right", "left"
    if nx >= ny:
        a_side = "right" if d[0] >= 0 else "left"
    else:
        a_side = "top" if d[1] >= 0 else "bottom"
    back = tgt.to_local(src.center)
    if nx >= ny:
        b_side = "right" if back[0] >= 0 else "left"
    else:
        b_side = "top" if back[1] >= 0 else "bottom"
    return a_side, b_side


def _wrap_side_overrides(w: Workspace) -> dict[tuple[str, str], tuple[str, str]]:
    """Grid wrap edges leave via the reading-direction side regardless of
    geometry: row wraps exit right and enter left; column wraps exit the
    bottom and enter the top."""
    overrides: dict[tuple[str, str], tuple[str, str]] = {}
    for structure in w.structures.values():
        if structure.kind is StructureKind.MULTI_ROW_GRID and structure.params.rows:
            for pair in grid_wrap_pairs(structure.members, structure.kind, structure.params.rows):
                overrides[pair] = ("right", "left")
        elif structure.kind is StructureKind.MULTI_COLUMN_GRID and structure.params.cols:
            for pair in grid_wrap_pairs(structure.members, structure.kind, structure.params.cols):
                overrides[pair] = ("bottom", "top")
    return overrides


def _alternative_attachments(src, tgt, sides: tuple[str, str]):
    """Attachment points on the perpendicular family, for when the natural
    sides cannot be routed cleanly (e.g. exits blocked by a touching
    stack)."""
    d = src.to_local(tgt.center)
    if sides[0] in ("right", "left"):
        a_side = "top" if d[1] >= 0 else "bottom"
        b_side = "bottom" if d[1] >= 0 else "top"
    else:
        a_side = "right" if d[0] >= 0 else "left"
        b_side = "left" if d[0] >= 0 else "right"
    a = src.edge_midpoint(a_side)
    b = tgt.edge_midpoint(b_side)
    if vdist(a, b) < 1e-9:
        return None
    return a, b, (a_side, b_side)


def _panel_bounds_in_frame(panel, frame: Pose) -> tuple[float, float, float, float]:
    """(min x, max x, min y, max y) of a panel's corners in the frame."""
    u, v, _ = panel.axes()
    xs, ys = [], []
    for su in (-1.0, 1.0):
        for sv in (-1.0, 1.0):
            corner = vadd(panel.center, vadd(vscale(u, su * panel.half_w), vscale(v, sv * panel.half_h)))
            local = frame.untransform(corner)
            xs.append(local[0])
            ys.append(local[1])
    return min(xs), max(xs), min(ys), max(ys)


def _detour(w: Workspace, a: Vec3, b: Vec3, sides: tuple[str, str], src_panel,
            panels, obstacle_ids: list[str], blocked: list[str],
            style: str, exit_scale: float = 1.0) -> tuple[tuple[Vec3, ...], bool]:
    """Four-point detour around the obstruction envelope.

    "corridor" swings past the envelope on the axis perpendicular to the
    attachments (below a row of cells, beside a column); "staircase" exits
    along the attachment level and crosses the envelope on the far side.
    Returns the candidate plus whether it verified collision-free."""
    cfg = w.config
    g = cfg.gap
    step = cfg.gap * exit_scale  # exit/enter leg spread
    frame = Pose(src_panel.center, src_panel.yaw)
    A = frame.untransform(a)
    B = frame.untransform(b)
    horizontal = sides[0] in ("right", "left")
    obstructions = set(blocked)

    candidate: tuple[Vec3, ...] = (a, b)
    for _ in range(8):
        env = [_panel_bounds_in_frame(panels[cid], frame) for cid in sorted(obstructions)]
        min_x = min(e[0] for e in env)
        max_x = max(e[1] for e in env)
        min_y = min(e[2] for e in env)
        max_y = max(e[3] for e in env)

        if style == "corridor" and horizontal:
            level = min_y - g / 2.0 if B[1] <= A[1] else max_y + g / 2.0
            exit_dx = step if sides[0] == "right" else -step
            if sides[1] == "left":
                enter_dx = -step
            elif sides[1] == "right":
                enter_dx = step
            else:
                enter_dx = -step if B[0] >= A[0] else step
            p1 = (A[0] + exit_dx, level, A[2])
            p2 = (B[0] + enter_dx, level, B[2])
        elif style == "corridor":
            wall = max_x + g / 2.0 if B[0] >= A[0] else min_x - g / 2.0
            exit_dy = -step if sides[0] == "bottom" else step
            enter_dy = step if sides[1] == "top" else -step
            p1 = (wall, A[1] + exit_dy, A[2])
            p2 = (wall, B[1] + enter_dy, B[2])
        elif horizontal:
            # Staircase: out along the exit level, over the wall, in level.
            if sides[0] == "right":
                wall = max(max_x + g / 2.0, A[0] + g, B[0] + g)
            else:
                wall = min(min_x - g / 2.0, A[0] - g, B[0] - g)
            p1 = (wall, A[1], A[2])
            p2 = (wall, B[1], B[2])
        else:
            if sides[0] == "bottom":
                level = min(min_y - g / 2.0, A[1] - g, B[1] - g)
            else:
                level = max(max_y + g / 2.0, A[1] + g, B[1] + g)
            p1 = (A[0], level, A[2])
            p2 = (B[0], level, B[2])
        candidate = (a, frame.transform(p1), frame.transform(p2), b)

        hits: set[str] = set()
        for seg_a, seg_b in zip(candidate, candidate[1:]):
            for cid in obstacle_ids:
                if segment_hits_box(seg_a, seg_b, panels[cid], cfg.min_clearance):
                    hits.add(cid)
        if not hits:
            return candidate, True
        if hits <= obstructions:
            return candidate, False
        obstructions |= hits
    return candidate, False

from __future__ import annotations

import math

import pytest

import cellspace as cs
from cellspace.geometry import Pose, vdist
from cellspace.layout import route_edges
from cellspace.model import (
    Cell,
    CellKind,
    ExecutionEdge,
    LayoutConfig,
    StructureKind,
    StructureParams,
    Workspace,
    panel_box,
)

from conftest import code_ids, interior_hit_count


def _row_workspace(n, step=0.45):
    w = Workspace()
    for i in range(n):
        w.cells[f"c{i}"] = Cell(id=f"c{i}", kind=CellKind.CODE, pose=Pose((i * step, 0.0, 0.0)))
    return w


def test_adjacent_cells_get_straight_two_point_polyline():
    w = _row_workspace(2)
    w.add_edge(ExecutionEdge("c0", "c1"))
    w = route_edges(w)
    polyline = w.edges[("c0", "c1")].polyline
    assert len(polyline) == 2
    assert polyline[0] == pytest.approx((0.2, 0.0, 0.0))
    assert polyline[1] == pytest.approx((0.25, 0.0, 0.0))


def test_skipping_edge_detours_below_the_obstruction():
    w = _row_workspace(3)
    w.add_edge(ExecutionEdge("c0", "c2"))
    w = route_edges(w)
    polyline = w.edges[("c0", "c2")].polyline
    assert len(polyline) == 4
    row_bottom = -0.15
    for point in polyline[1:-1]:
        assert point[1] < row_bottom
    assert interior_hit_count(w) == 0


def test_grid_wrap_edge_shape(scene):
    members = code_ids(scene)[:6]
    w = cs.apply_structure(scene, members, StructureKind.MULTI_ROW_GRID, StructureParams(rows=2))
    wrap = w.edges[(members[2], members[3])]
    assert len(wrap.polyline) >= 3
    src_cell = w.cells[members[2]]
    frame = Pose(src_cell.pose.position, src_cell.pose.yaw)
    locals_ = [frame.untransform(p) for p in wrap.polyline]
    # Leaves the source's right edge...
    assert locals_[0] == pytest.approx((0.2, 0.0, 0.0), abs=1e-9)
    # ...every intermediate point passes below the source row...
    for point in locals_[1:-1]:
        assert point[1] < -0.15
    # ...and enters the next row's first cell through its left edge.
    tgt_cell = w.cells[members[3]]
    tgt_frame = Pose(tgt_cell.pose.position, tgt_cell.pose.yaw)
    assert tgt_frame.untransform(wrap.polyline[-1]) == pytest.approx((-0.2, 0.0, 0.0), abs=1e-9)


def test_hidden_edges_have_no_polyline(scene):
    members = code_ids(scene)[:5]
    w = cs.toggle_indicators(scene, members)
    for key, edge in w.edges.items():
        if key[0] in members and key[1] in members:
            assert not edge.visible
            assert edge.polyline == ()


def test_unroutable_coincident_endpoints_warn():
    # Degenerate sliver cells at the same pose: every attachment coincides.
    w = Workspace()
    for cid in ("c0", "c1"):
        w.cells[cid] = Cell(id=cid, kind=CellKind.CODE, width=1e-12, height=1e-12)
    w.add_edge(ExecutionEdge("c0", "c1"))
    w = route_edges(w)
    assert w.edges[("c0", "c1")].polyline == ()
    assert any("unroutable" in msg for msg in w.warnings)


def test_touching_stack_uses_edge_hugging_fallback():
    w = Workspace()
    w.cells["c0"] = Cell(id="c0", kind=CellKind.CODE, pose=Pose((0.0, 0.0, 0.0)))
    w.cells["c1"] = Cell(id="c1", kind=CellKind.CODE, pose=Pose((0.0, -0.3, 0.0)))  # touching below
    w.add_edge(ExecutionEdge("c0", "c1"))
    w = route_edges(w)
    polyline = w.edges[("c0", "c1")].polyline
    assert len(polyline) >= 2
    assert not w.warnings
    assert interior_hit_count(w) == 0


def test_polylines_attach_to_cell_boundaries(scene):
    w = cs.apply_structure(scene, code_ids(scene), StructureKind.MULTI_ROW_GRID, StructureParams(rows=5))
    report = cs.validate_workspace(w)
    assert "edge-detached" not in report.codes()


def test_routing_is_deterministic(scene):
    a = route_edges(scene)
    b = route_edges(scene)
    assert cs.serialize_workspace(a) == cs.serialize_workspace(b)


def _scene_corpus(scene):
    code = code_ids(scene)
    allc = scene.cell_order()
    yield "initial", scene
    yield "grid", cs.apply_structure(scene, allc, StructureKind.MULTI_ROW_GRID, StructureParams(rows=5))
    yield "colgrid", cs.apply_structure(scene, allc, StructureKind.MULTI_COLUMN_GRID, StructureParams(cols=5))
    yield "tree", cs.apply_structure(
        scene, code, StructureKind.PARALLEL_TREE,
        StructureParams(branch_roots=(code[1], code[20], code[35])),
    )
    yield "loop", cs.apply_structure(scene, allc, StructureKind.LOOP_CIRCLE)
    yield "fold", cs.apply_structure(
        scene, code[:12], StructureKind.SKIP_FOLD, StructureParams(keep=(code[0], code[11]))
    )
    yield "pile", cs.apply_structure(scene, code[:8], StructureKind.SKIP_PILE)
    yield "layer", cs.apply_structure(scene, code[4::10], StructureKind.SKIP_LAYER)
    w3 = cs.apply_structure(scene, code[:3], StructureKind.LINEAR_LINEAR)
    yield "rewire", cs.rewire_edge(w3, (code[0], code[1]), "to", code[2])


def test_no_polyline_crosses_any_cell_interior(scene):
    for name, w in _scene_corpus(scene):
        assert interior_hit_count(w) == 0, f"interior hit in scene {name}"


def test_rerouted_rewired_edge_avoids_bypassed_cell(scene):
    code = code_ids(scene)
    w3 = cs.apply_structure(scene, code[:3], StructureKind.LINEAR_LINEAR)
    w = cs.rewire_edge(w3, (code[0], code[1]), "to", code[2])
    assert (code[0], code[2]) in w.edges
    assert (code[0], code[1]) not in w.edges
    polyline = w.edges[(code[0], code[2])].polyline
    middle = panel_box(w.cells[code[1]], w.config)
    from cellspace.geometry import segment_panel_distance

    for a, b in zip(polyline, polyline[1:]):
        assert segment_panel_distance(a, b, middle) >= w.config.min_clearance - 1e-9

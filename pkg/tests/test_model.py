from __future__ import annotations

import cellspace as cs
from cellspace.geometry import Pose
from cellspace.model import (
    AnalysisPhase,
    Cell,
    CellKind,
    ExecutionEdge,
    ExecutionOrderKind,
    LayoutKind,
    Structure,
    StructureKind,
    StructureParams,
    Workspace,
    validate_workspace,
)


def test_enumerations_are_exactly_the_catalog():
    assert {k.value for k in ExecutionOrderKind} == {
        "linear", "multiple_linear", "parallel", "loop", "skip", "no_order",
    }
    assert {k.value for k in LayoutKind} == {
        "linear", "grid", "tree", "circle", "layer", "fold", "pile",
    }
    assert {p.value for p in AnalysisPhase} == {"exploratory", "storytelling"}
    assert len(StructureKind) == 10


def test_fresh_import_validates_clean(notebook_bytes):
    w = cs.import_notebook(notebook_bytes)
    assert validate_workspace(w).ok()


def test_dangling_edge_reported(scene):
    cid = scene.cell_order()[0]
    scene.edges[(cid, "ghost")] = ExecutionEdge(from_id=cid, to_id="ghost")
    report = validate_workspace(scene)
    assert "edge-dangling" in report.codes()


def test_identical_pose_overlap_reported(scene):
    a, b = scene.cell_order()[:2]
    scene.cells[b].pose = scene.cells[a].pose
    report = validate_workspace(scene)
    assert "cell-overlap" in report.codes()
    offender = next(v for v in report.violations if v.code == "cell-overlap")
    assert set(offender.ids) == {a, b}


def test_pile_overlap_is_exempt(scene):
    code = [c.id for c in scene.cells.values() if c.kind is CellKind.CODE]
    w = cs.apply_structure(scene, code[:5], StructureKind.SKIP_PILE)
    assert validate_workspace(w).ok()


def test_self_edge_reported(scene):
    cid = scene.cell_order()[0]
    scene.edges[(cid, cid)] = ExecutionEdge(from_id=cid, to_id=cid)
    assert "edge-self" in validate_workspace(scene).codes()


def test_empty_task_tag_reported(scene):
    scene.cells[scene.cell_order()[0]].task_tag = "  "
    assert "cell-task-tag" in validate_workspace(scene).codes()


def test_shared_member_reported(scene):
    ids = scene.cell_order()
    scene.structures["s0"] = Structure(
        id="s0", kind=StructureKind.LINEAR_LINEAR, members=(ids[0], ids[1]),
        anchor=Pose(), params=StructureParams(), phase=AnalysisPhase.EXPLORATORY,
    )
    scene.structures["s1"] = Structure(
        id="s1", kind=StructureKind.LINEAR_LINEAR, members=(ids[1], ids[2]),
        anchor=Pose(), params=StructureParams(), phase=AnalysisPhase.EXPLORATORY,
    )
    assert "structure-shared-member" in validate_workspace(scene).codes()


def test_grid_rows_out_of_range_reported(scene):
    ids = scene.cell_order()[:3]
    scene.structures["s0"] = Structure(
        id="s0", kind=StructureKind.MULTI_ROW_GRID, members=tuple(ids),
        anchor=Pose(), params=StructureParams(rows=9), phase=AnalysisPhase.EXPLORATORY,
    )
    assert "params-rows" in validate_workspace(scene).codes()


def test_detached_polyline_reported(scene):
    key = next(iter(scene.edges))
    scene.edges[key].polyline = ((9.0, 9.0, 9.0), (10.0, 10.0, 10.0))
    assert "edge-detached" in validate_workspace(scene).codes()


def test_workspace_ids_are_sequence_numbers():
    w = Workspace()
    assert w.next_cell_id() == "c0"
    w.cells["c0"] = Cell(id="c0", kind=CellKind.CODE)
    w.cells["c7"] = Cell(id="c7", kind=CellKind.CODE)
    assert w.next_cell_id() == "c8"
    assert w.next_structure_id() == "s0"

"""Bit-exact scene serialization.

Scene documents are canonical JSON: object keys sorted, floats printed at
9 significant digits, arrays in deterministic id order. Equal workspaces
therefore serialize to byte-identical documents, and serialize-parse-
serialize is byte-stable, which is what replay determinism tests compare.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile

from .geometry import Pose
from .model import (
    AnalysisPhase,
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
)

SCENE_VERSION = "1"


class SceneFormatError(ValueError):
    """The scene document is malformed."""


# ---------------------------------------------------------------------------
# Canonical JSON


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise SceneFormatError("non-finite number in scene")
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def canonical_dumps(obj) -> str:
    """Serialize with sorted keys and fixed float formatting."""
    out: list[str] = []
    _dump(obj, out)
    return "".join(out)


def _dump(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _dump(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key), ensure_ascii=True))
            out.append(":")
            _dump(obj[key], out)
        out.append("}")
    else:
        raise SceneFormatError(f"cannot serialize {type(obj).__name__}")


def _id_sort_key(identifier: str) -> tuple:
    m = re.fullmatch(r"([a-z]+)(\d+)", identifier)
    if m:
        return (0, m.group(1), int(m.group(2)))
    return (1, identifier, 0)


# ---------------------------------------------------------------------------
# Workspace <-> document


def workspace_to_document(w: Workspace) -> dict:
    cells = []
    for cid in sorted(w.cells, key=_id_sort_key):
        cell = w.cells[cid]
        cells.append(
            {
                "id": cell.id,
                "kind": effective_format(cell).value,
                "pose": _pose_doc(cell.pose),
                "size": [cell.width, cell.height],
                "folded": cell.folded,
                "highlight": cell.highlight,
                "task_tag": cell.task_tag,
            }
        )
    edges = []
    for key in sorted(w.edges, key=lambda k: (_id_sort_key(k[0]), _id_sort_key(k[1]))):
        edge = w.edges[key]
        edges.append(
            {
                "from": edge.from_id,
                "to": edge.to_id,
                "visible": edge.visible,
                "is_skip": edge.is_skip,
                "polyline": [list(p) for p in edge.polyline],
            }
        )
    structures = []
    for sid in sorted(w.structures, key=_id_sort_key):
        s = w.structures[sid]
        structures.append(
            {
                "id": s.id,
                "kind": s.kind.value,
                "members": list(s.members),
                "anchor": _pose_doc(s.anchor),
                "params": _params_doc(s.params),
                "phase": s.phase.value,
            }
        )
    return {
        "version": SCENE_VERSION,
        "config": w.config.to_dict(),
        "cells": cells,
        "edges": edges,
        "structures": structures,
    }


def _pose_doc(pose: Pose) -> dict:
    return {"position": list(pose.position), "yaw": pose.yaw}


def _params_doc(p: StructureParams) -> dict:
    return {
        "rows": p.rows,
        "cols": p.cols,
        "orientation": p.orientation.value,
        "branch_roots": list(p.branch_roots),
        "circle_radius": p.circle_radius,
        "layer_depth": p.layer_depth,
        "gap": p.gap,
        "visible_head": p.visible_head,
        "keep": list(p.keep),
        "layer_direction": p.layer_direction.value if p.layer_direction else None,
    }


def serialize_workspace(w: Workspace) -> str:
    return canonical_dumps(workspace_to_document(w)) + "\n"


def parse_workspace(text: str) -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"malformed scene JSON: {exc.msg} at offset {exc.pos}") from exc
    if not isinstance(doc, dict) or "cells" not in doc:
        raise SceneFormatError("scene document has no cells")

    w = Workspace(config=LayoutConfig.from_dict(doc.get("config", {})))
    for record in doc["cells"]:
        cell = Cell(
            id=record["id"],
            kind=CellKind(record["kind"]),
            width=float(record["size"][0]),
            height=float(record["size"][1]),
            folded=bool(record.get("folded", False)),
            highlight=bool(record.get("highlight", False)),
            task_tag=record.get("task_tag"),
            pose=_pose_from(record["pose"]),
        )
        if cell.id in w.cells:
            raise SceneFormatError(f"duplicate cell id {cell.id}")
        w.cells[cell.id] = cell
    for record in doc.get("edges", []):
        edge = ExecutionEdge(
            from_id=record["from"],
            to_id=record["to"],
            visible=bool(record.get("visible", True)),
            is_skip=bool(record.get("is_skip", False)),
            polyline=tuple(tuple(float(v) for v in p) for p in record.get("polyline", [])),
        )
        if edge.key in w.edges:
            raise SceneFormatError(f"duplicate edge {edge.from_id}->{edge.to_id}")
        w.edges[edge.key] = edge
    for record in doc.get("structures", []):
        s = Structure(
            id=record["id"],
            kind=StructureKind(record["kind"]),
            members=tuple(record["members"]),
            anchor=_pose_from(record["anchor"]),
            params=_params_from(record.get("params", {})),
            phase=AnalysisPhase(record.get("phase", "exploratory")),
        )
        if s.id in w.structures:
            raise SceneFormatError(f"duplicate structure id {s.id}")
        w.structures[s.id] = s
    return w


def _pose_from(record: dict) -> Pose:
    position = tuple(float(v) for v in record["position"])
    return Pose(position, float(record.get("yaw", 0.0)))


def _params_from(record: dict) -> StructureParams:
    return StructureParams(
        rows=record.get("rows"),
        cols=record.get("cols"),
        orientation=Orientation(record.get("orientation", "horizontal")),
        branch_roots=tuple(record.get("branch_roots", ())),
        circle_radius=record.get("circle_radius"),
        layer_depth=record.get("layer_depth"),
        gap=record.get("gap"),
        visible_head=record.get("visible_head"),
        keep=tuple(record.get("keep", ())),
        layer_direction=LayerDirection(record["layer_direction"]) if record.get("layer_direction") else None,
    )


# ---------------------------------------------------------------------------
# Files


def atomic_write(path: str, text: str) -> None:
    """Write-temp-then-rename so readers never see partial scenes."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cellspace-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_scene(path: str) -> Workspace:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_workspace(handle.read())


def save_scene(path: str, w: Workspace) -> None:
    atomic_write(path, serialize_workspace(w))

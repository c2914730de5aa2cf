"""Jupyter notebook (nbformat 4) ingestion into an initial linear workspace.

Cells arrive in document order and are placed in a single row in front of
the user. Execution edges link consecutive code cells; markdown cells do
not participate in execution order. Each cell inherits the text of the
nearest markdown heading at or before it as its task tag.
"""

from __future__ import annotations

import json

from .geometry import Pose
from .model import Cell, CellKind, CellOutput, ExecutionEdge, LayoutConfig, Workspace


class NotebookError(ValueError):
    """Base class for notebook ingestion failures."""


class NotebookParseError(NotebookError):
    """The document is not valid JSON; byte_offset locates the failure."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class NotebookSchemaError(NotebookError):
    """The JSON is valid but not shaped like an nbformat-4 notebook."""


def import_notebook(document: bytes, config: LayoutConfig | None = None) -> Workspace:
    """Parse nbformat-4 JSON bytes into a Workspace.

    The result is deterministic: cell ids are sequence numbers in document
    order, and cells sit in a linear row at the initial viewing distance.
    Unknown cell types are kept as markdown with a warning recorded on the
    workspace.
    """
    config = config or LayoutConfig()
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise NotebookParseError("document is not valid UTF-8", exc.start) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise NotebookParseError(f"malformed JSON: {exc.msg}", offset) from exc

    if not isinstance(data, dict) or "cells" not in data:
        raise NotebookSchemaError('notebook has no top-level "cells" array')
    raw_cells = data["cells"]
    if not isinstance(raw_cells, list):
        raise NotebookSchemaError('"cells" is not an array')

    w = Workspace(config=config)
    current_tag: str | None = None
    for index, raw in enumerate(raw_cells):
        if not isinstance(raw, dict):
            raise NotebookSchemaError(f"cell {index} is not an object")
        cell_type = raw.get("cell_type")
        source = _join_source(raw.get("source", ""))
        if cell_type == "code":
            kind = CellKind.CODE
        elif cell_type == "markdown":
            kind = CellKind.MARKDOWN
        else:
            kind = CellKind.MARKDOWN
            w.warn(f"cell {index}: unknown cell_type {cell_type!r} kept as markdown")
        if kind is CellKind.MARKDOWN:
            heading = _first_heading(source)
            if heading is not None:
                current_tag = heading
        cell = Cell(
            id=f"c{index}",
            kind=kind,
            content=source,
            outputs=_parse_outputs(raw.get("outputs", [])) if kind is CellKind.CODE else [],
            width=config.cell_width,
            height=config.cell_height,
            task_tag=current_tag,
        )
        w.cells[cell.id] = cell

    _place_linear_row(w)
    code_ids = [c.id for c in w.cells.values() if c.kind is CellKind.CODE]
    for a, b in zip(code_ids, code_ids[1:]):
        w.add_edge(ExecutionEdge(from_id=a, to_id=b))
    return w


def _join_source(source) -> str:
    if isinstance(source, list):
        return "".join(str(part) for part in source)
    return str(source)


def _first_heading(source: str) -> str | None:
    for line in source.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            text = stripped.lstrip("#").strip()
            if text:
                return text
    return None


def _parse_outputs(raw_outputs) -> list[CellOutput]:
    outputs: list[CellOutput] = []
    if not isinstance(raw_outputs, list):
        return outputs
    for out in raw_outputs:
        if not isinstance(out, dict):
            continue
        output_type = out.get("output_type")
        if output_type == "stream":
            outputs.append(CellOutput("text", _join_source(out.get("text", ""))))
        elif output_type in ("execute_result", "display_data"):
            data = out.get("data", {})
            image_keys = sorted(k for k in data if k.startswith("image/"))
            if image_keys:
                outputs.append(CellOutput("image", image_keys[0]))
            elif "text/plain" in data:
                outputs.append(CellOutput("text", _join_source(data["text/plain"])))
        elif output_type == "error":
            outputs.append(CellOutput("text", str(out.get("ename", "error"))))
    return outputs


def _place_linear_row(w: Workspace) -> None:
    cfg = w.config
    step = cfg.cell_width + cfg.gap
    for i, cell in enumerate(w.cells.values()):
        cell.pose = Pose((i * step, 0.0, -cfg.initial_radius), 0.0)

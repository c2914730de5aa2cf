from __future__ import annotations

import json

import pytest

import cellspace as cs
from cellspace.model import CellKind
from cellspace.notebook import NotebookParseError, NotebookSchemaError, import_notebook

from conftest import code_ids


def _notebook(cells) -> bytes:
    return json.dumps({"nbformat": 4, "nbformat_minor": 5, "metadata": {}, "cells": cells}).encode()


def _code(source, outputs=None):
    return {"cell_type": "code", "source": source, "outputs": outputs or [], "metadata": {}}


def _markdown(source):
    return {"cell_type": "markdown", "source": source, "metadata": {}}


def test_fixture_import_counts(notebook_bytes):
    w = import_notebook(notebook_bytes)
    code = code_ids(w)
    assert len(code) == 50
    assert len(w.edges) == 49
    assert all(e.visible for e in w.edges.values())
    assert not w.structures


def test_empty_notebook():
    w = import_notebook(_notebook([]))
    assert len(w.cells) == 0
    assert len(w.edges) == 0


def test_three_cell_notebook_hand_constructed_model():
    w = import_notebook(_notebook([_markdown("# Prep"), _code("a = 1"), _code("b = 2")]))
    cells = list(w.cells.values())
    assert [c.id for c in cells] == ["c0", "c1", "c2"]
    assert [c.kind for c in cells] == [CellKind.MARKDOWN, CellKind.CODE, CellKind.CODE]
    assert list(w.edges) == [("c1", "c2")]
    assert cells[1].task_tag == "Prep"
    assert cells[2].task_tag == "Prep"


def test_task_tag_tracks_nearest_preceding_heading():
    w = import_notebook(
        _notebook([_code("before"), _markdown("## One"), _code("x"), _markdown("## Two"), _code("y")])
    )
    tags = [c.task_tag for c in w.cells.values()]
    assert tags == [None, "One", "One", "Two", "Two"]


def test_markdown_without_heading_keeps_running_tag():
    w = import_notebook(_notebook([_markdown("# A"), _markdown("plain text"), _code("x")]))
    assert [c.task_tag for c in w.cells.values()] == ["A", "A", "A"]


def test_edge_count_matches_code_cell_count(notebook_bytes):
    w = import_notebook(notebook_bytes)
    assert len(w.edges) == len(code_ids(w)) - 1
    w2 = import_notebook(_notebook([_markdown("# only prose")]))
    assert len(w2.edges) == 0


def test_malformed_json_names_byte_offset():
    bad = b'{"cells": [}'
    with pytest.raises(NotebookParseError) as err:
        import_notebook(bad)
    assert err.value.byte_offset == 11
    assert "byte offset 11" in str(err.value)


def test_missing_cells_is_schema_error():
    with pytest.raises(NotebookSchemaError):
        import_notebook(b'{"nbformat": 4}')


def test_unknown_cell_type_kept_as_markdown_with_warning():
    w = import_notebook(_notebook([{"cell_type": "raw", "source": "raw stuff", "metadata": {}}]))
    assert list(w.cells.values())[0].kind is CellKind.MARKDOWN
    assert len(w.warnings) == 1
    assert "raw" in w.warnings[0]


def test_image_outputs_captured():
    w = import_notebook(
        _notebook([_code("plot()", outputs=[{"output_type": "display_data", "data": {"image/png": "zz"}}])])
    )
    cell = list(w.cells.values())[0]
    assert cell.kind is CellKind.CODE
    assert cell.has_image_output()
    assert cs.model.effective_format(cell) is CellKind.OUTPUT_VISUALIZATION


def test_import_is_deterministic(notebook_bytes):
    a = import_notebook(notebook_bytes)
    b = import_notebook(notebook_bytes)
    assert cs.serialize_workspace(a) == cs.serialize_workspace(b)


def test_import_validates_clean(notebook_bytes):
    w = import_notebook(notebook_bytes)
    assert cs.validate_workspace(w).ok()


def test_source_list_joining():
    w = import_notebook(_notebook([_code(["line1\n", "line2\n"])]))
    assert list(w.cells.values())[0].content == "line1\nline2\n"

from __future__ import annotations

import pytest

import cellspace as cs
from cellspace.fixtures import build_study_notebook
from cellspace.geometry import segment_hits_panel_interior
from cellspace.model import CellKind, panel_box


@pytest.fixture(scope="session")
def notebook_bytes() -> bytes:
    return build_study_notebook()


@pytest.fixture(scope="session")
def _base_scene(notebook_bytes):
    return cs.initial_circular_layout(cs.import_notebook(notebook_bytes))


@pytest.fixture()
def scene(_base_scene):
    return _base_scene.clone()


def code_ids(w) -> list[str]:
    return [c.id for c in w.cells.values() if c.kind is CellKind.CODE]


def interior_hit_count(w) -> int:
    """Brute-force oracle: polyline segments crossing any third cell's open
    rectangle interior."""
    panels = {cid: panel_box(cell, w.config) for cid, cell in w.cells.items()}
    hits = 0
    for key, edge in w.edges.items():
        if not edge.visible or len(edge.polyline) < 2:
            continue
        for a, b in zip(edge.polyline, edge.polyline[1:]):
            for cid, panel in panels.items():
                if cid in key:
                    continue
                if segment_hits_panel_interior(a, b, panel):
                    hits += 1
    return hits

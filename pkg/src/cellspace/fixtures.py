"""Deterministic fixtures: the 50-code-cell study notebook, canonical
gesture traces for every trigger, and the scripted reorganization tasks.

Everything here is reproducible byte for byte; the notebook mimics an
introductory computer-vision course with section headings, fine-tuning
steps, and image outputs scattered through the pipeline.
"""

from __future__ import annotations

import json
import math

from .commands import CommandKind, TriggerCommand
from .gestures import GestureThresholds, Hand, HandPoseEvent
from .geometry import Vec3, vadd, vdist, vscale, vsub
from .model import StructureKind, Workspace
from .operations import _mean_position

_SECTIONS = [
    ("Setup", ["import numpy as np", "import torch", "from torchvision import transforms"]),
    ("Data Loading", ["dataset = ImageFolder('data/train')", "loader = DataLoader(dataset, batch_size=32)"]),
    ("Preprocessing", ["normalize = transforms.Normalize(mean, std)", "augment = transforms.RandomCrop(224)"]),
    ("Feature Exploration", ["hist = np.histogram(img.ravel(), bins=32)", "edges = cv2.Canny(img, 50, 150)"]),
    ("Model Definition", ["model = resnet18(pretrained=True)", "model.fc = nn.Linear(512, 10)"]),
    ("Fine Tuning", ["optimizer = torch.optim.Adam(model.parameters(), lr=1e-4)", "scheduler = CosineAnnealingLR(optimizer, T_max=10)"]),
    ("Evaluation", ["accuracy = correct / total", "confusion = confusion_matrix(labels, preds)"]),
    ("Visualization", ["plt.imshow(grid.permute(1, 2, 0))", "plt.plot(history['loss'])"]),
]

_TINY_PNG = "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mNk+M9QDwADhgGAWjR9awAAAABJRU5ErkJggg=="


def build_study_notebook(code_cells: int = 50, image_every: int = 5) -> bytes:
    """nbformat-4 JSON for the study notebook: `code_cells` code cells under
    section headings, with an image output on every `image_every`-th cell."""
    cells = []
    section_count = len(_SECTIONS)
    per_section = math.ceil(code_cells / section_count)
    produced = 0
    for title, snippets in _SECTIONS:
        if produced >= code_cells:
            break
        cells.append(
            {
                "cell_type": "markdown",
                "metadata": {},
                "source": [f"## {title}\n"],
            }
        )
        for i in range(per_section):
            if produced >= code_cells:
                break
            snippet = snippets[i % len(snippets)]
            source = [f"# step {produced}\n", f"{snippet}\n"]
            outputs = []
            if (produced + 1) % image_every == 0:
                outputs.append(
                    {
                        "output_type": "display_data",
                        "data": {"image/png": _TINY_PNG},
                        "metadata": {},
                    }
                )
            cells.append(
                {
                    "cell_type": "code",
                    "execution_count": produced + 1,
                    "metadata": {},
                    "source": source,
                    "outputs": outputs,
                }
            )
            produced += 1
    notebook = {
        "nbformat": 4,
        "nbformat_minor": 5,
        "metadata": {"kernelspec": {"name": "python3", "display_name": "Python 3"}},
        "cells": cells,
    }
    return json.dumps(notebook, indent=1, sort_keys=True).encode("utf-8")


# ---------------------------------------------------------------------------
# Canonical gesture traces


class _TraceBuilder:
    """Emits time-ordered hand events with slow repositioning moves so the
    travel between phases can never read as a swipe."""

    def __init__(self, start: Vec3 = (0.0, 0.0, -1.0)):
        self.events: list[HandPoseEvent] = []
        self.t = 0
        self.hand_pos: dict[Hand, Vec3] = {Hand.LEFT: start, Hand.RIGHT: start}

    def emit(self, hand: Hand, position: Vec3, grip: float = 0.0, pinch: float = 0.0,
             orientation=(0.0, 0.0, 0.0, 1.0), dt: int = 30) -> None:
        self.t += dt
        self.hand_pos[hand] = position
        self.events.append(
            HandPoseEvent(t=self.t, hand=hand, position=position,
                          orientation=orientation, grip=grip, pinch=pinch)
        )

    def travel(self, hand: Hand, target: Vec3) -> None:
        # Repositioning at <= 0.2 m/s keeps every pair under the swipe gate.
        distance = vdist(self.hand_pos[hand], target)
        dt = max(100, int(distance / 0.2 * 1000))
        self.emit(hand, target, dt=dt)

    def pinch_at(self, hand: Hand, position: Vec3) -> None:
        self.travel(hand, position)
        self.emit(hand, position, pinch=1.0)
        self.emit(hand, position, pinch=0.0)


def _selection_phase(tb: _TraceBuilder, w: Workspace, selection: list[str],
                     roots: list[str] | None = None) -> Vec3:
    """Pinch-select every cell (re-pinching the given roots); returns the
    proxy center (the first selected cell's position)."""
    for cid in selection:
        tb.pinch_at(Hand.RIGHT, w.cells[cid].pose.position)
    for cid in roots or []:
        tb.pinch_at(Hand.RIGHT, w.cells[cid].pose.position)
    return w.cells[selection[0]].pose.position


def _grip_path(tb: _TraceBuilder, hand: Hand, path: list[Vec3], orientations=None) -> None:
    tb.travel(hand, path[0])
    for i, p in enumerate(path):
        q = orientations[i] if orientations else (0.0, 0.0, 0.0, 1.0)
        tb.emit(hand, p, grip=1.0, orientation=q)
    final_q = orientations[-1] if orientations else (0.0, 0.0, 0.0, 1.0)
    tb.emit(hand, path[-1], grip=0.0, orientation=final_q)


def _lerp_path(a: Vec3, b: Vec3, steps: int) -> list[Vec3]:
    return [vadd(a, vscale(vsub(b, a), i / (steps - 1))) for i in range(steps)]


def canonical_trace(kind: str, w: Workspace, selection: list[str] | None = None,
                    thresholds: GestureThresholds | None = None, **kw) -> list[HandPoseEvent]:
    """Synthesize the canonical trace for one trigger gesture.

    Kinds: linear, grid, tree, loop, fold, pile, layer, swipe, snap,
    rotate, dims, move_structure."""
    th = thresholds or GestureThresholds()
    tb = _TraceBuilder()
    selection = selection or []

    if kind == "swipe":
        sid = kw["structure"]
        start = _mean_position(w, list(w.structures[sid].members))
        tb.travel(Hand.RIGHT, start)
        for p in _lerp_path(start, vadd(start, (0.45, 0.0, 0.0)), 10):
            tb.emit(Hand.RIGHT, p, dt=27)
        # settle so the burst ends inside the trace
        tb.emit(Hand.RIGHT, vadd(start, (0.45, 0.0, 0.0)), dt=400)
        return tb.events

    if kind == "move_structure":
        sid = kw["structure"]
        target = kw["release"]
        start = _mean_position(w, list(w.structures[sid].members))
        _grip_path(tb, Hand.RIGHT, _lerp_path(start, target, 12))
        return tb.events

    center = _selection_phase(tb, w, selection, kw.get("roots"))

    if kind == "linear":
        left = _lerp_path(vadd(center, (-0.05, 0.0, 0.0)), vadd(center, (-0.225, 0.0, 0.0)), 15)
        right = _lerp_path(vadd(center, (0.05, 0.0, 0.0)), vadd(center, (0.225, 0.0, 0.0)), 15)
        tb.travel(Hand.LEFT, left[0])
        tb.travel(Hand.RIGHT, right[0])
        for pl, pr in zip(left, right):
            tb.emit(Hand.LEFT, pl, grip=1.0)
            tb.emit(Hand.RIGHT, pr, grip=1.0, dt=0)
        tb.emit(Hand.LEFT, left[-1], grip=0.0)
        tb.emit(Hand.RIGHT, right[-1], grip=0.0, dt=0)
    elif kind == "fold":
        left = _lerp_path(vadd(center, (-0.15, 0.0, 0.0)), vadd(center, (-0.04, 0.0, 0.0)), 15)
        right = _lerp_path(vadd(center, (0.15, 0.0, 0.0)), vadd(center, (0.04, 0.0, 0.0)), 15)
        tb.travel(Hand.LEFT, left[0])
        tb.travel(Hand.RIGHT, right[0])
        for pl, pr in zip(left, right):
            tb.emit(Hand.LEFT, pl, grip=1.0)
            tb.emit(Hand.RIGHT, pr, grip=1.0, dt=0)
        tb.emit(Hand.LEFT, left[-1], grip=0.0)
        tb.emit(Hand.RIGHT, right[-1], grip=0.0, dt=0)
    elif kind == "grid":
        rows = kw.get("rows", 2)
        extent = rows * th.row_step
        path = _lerp_path(center, vadd(center, (extent, -extent, 0.0)), 20)
        _grip_path(tb, Hand.RIGHT, path)
    elif kind == "tree":
        path = _lerp_path(center, vadd(center, (0.40, 0.0, 0.0)), 15)
        _grip_path(tb, Hand.RIGHT, path)
    elif kind == "loop":
        radius = 0.15
        points = []
        for i in range(26):
            angle = math.radians(90.0 - 300.0 * i / 25)
            points.append(vadd(center, (radius * math.cos(angle), radius * math.sin(angle), 0.0)))
        _grip_path(tb, Hand.RIGHT, points)
    elif kind == "pile":
        path = _lerp_path(vadd(center, (0.28, 0.0, 0.0)), vadd(center, (0.01, 0.0, 0.0)), 15)
        _grip_path(tb, Hand.RIGHT, path)
    elif kind == "layer":
        away = kw.get("direction") == "away"
        cell_id = kw.get("grab_cell") or _farthest_selected(w, selection, center)
        cell_pos = w.cells[cell_id].pose.position
        axis = vsub(w.user_position, cell_pos)
        unit = vscale(axis, 1.0 / vdist(w.user_position, cell_pos))
        target = vadd(cell_pos, vscale(unit, -0.5 if away else 0.5))
        _grip_path(tb, Hand.RIGHT, _lerp_path(cell_pos, target, 15))
    elif kind == "snap":
        cell_id = kw.get("grab_cell") or _farthest_selected(w, selection, center)
        pos = w.cells[cell_id].pose.position
        tb.travel(Hand.RIGHT, pos)
        tb.emit(Hand.RIGHT, pos, grip=1.0)
        tb.emit(Hand.RIGHT, pos, grip=1.0, dt=60)
        tb.emit(Hand.RIGHT, pos, grip=0.0, dt=30)
    elif kind == "rotate":
        turn = math.radians(60.0)
        quats = []
        for i in range(12):
            half = turn * i / 11 / 2.0
            quats.append((0.0, 0.0, math.sin(half), math.cos(half)))
        path = [center] * 12
        _grip_path(tb, Hand.RIGHT, path, orientations=quats)
    elif kind == "dims":
        steps = kw.get("delta", 1)
        spread = steps * th.row_step
        left = _lerp_path(vadd(center, (-0.05, 0.0, 0.0)), vadd(center, (-0.05 - spread / 2, 0.0, 0.0)), 12)
        right = _lerp_path(vadd(center, (0.05, 0.0, 0.0)), vadd(center, (0.05 + spread / 2, 0.0, 0.0)), 12)
        tb.travel(Hand.LEFT, left[0])
        tb.travel(Hand.RIGHT, right[0])
        for pl, pr in zip(left, right):
            tb.emit(Hand.LEFT, pl, grip=1.0)
            tb.emit(Hand.RIGHT, pr, grip=1.0, dt=0)
        tb.emit(Hand.LEFT, left[-1], grip=0.0)
        tb.emit(Hand.RIGHT, right[-1], grip=0.0, dt=0)
    else:
        raise ValueError(f"unknown canonical trace kind {kind!r}")
    return tb.events


def _farthest_selected(w: Workspace, selection: list[str], center: Vec3) -> str:
    best = max(selection, key=lambda cid: (vdist(w.cells[cid].pose.position, center), cid))
    if vdist(w.cells[best].pose.position, center) <= 0.35:
        raise ValueError("selection too tight: no selected cell clear of the proxy window")
    return best


#: The eight trigger gestures and the command each canonical trace must yield.
CANONICAL_GESTURES: dict[str, CommandKind] = {
    "linear": CommandKind.CREATE_LINEAR_LINEAR,
    "grid": CommandKind.CREATE_GRID,
    "tree": CommandKind.CREATE_PARALLEL_TREE,
    "loop": CommandKind.CREATE_LOOP_CIRCLE,
    "fold": CommandKind.CREATE_SKIP_FOLD,
    "pile": CommandKind.CREATE_SKIP_PILE,
    "layer": CommandKind.APPLY_SKIP_LAYER,
    "swipe": CommandKind.CYCLE_CLUSTER_MODE,
}


# ---------------------------------------------------------------------------
# Study task scripts


def task1_script(w: Workspace) -> list[TriggerCommand]:
    """Execution-focused reorganization of the imported linear notebook:
    the long sequence becomes a grid, a hypothesis branch becomes a tree,
    and the tuning loop becomes a circle. Slices scale with the notebook
    (30/10/10 cells on the 50-cell study fixture)."""
    code = [c.id for c in w.cells.values() if c.kind.value != "markdown"]
    n = len(code)
    grid_members = code[: max(2, int(n * 0.6))]
    tree_members = code[len(grid_members): max(len(grid_members) + 2, int(n * 0.8))]
    loop_members = code[len(grid_members) + len(tree_members):]
    t = 0
    script = [
        TriggerCommand(kind=CommandKind.CREATE_GRID, t=(t := t + 1000),
                       selection=tuple(grid_members), rows=min(5, len(grid_members))),
    ]
    if len(tree_members) >= 2:
        roots = tuple(tree_members[i] for i in (1, 4, 7) if i < len(tree_members))
        script.append(TriggerCommand(kind=CommandKind.CREATE_PARALLEL_TREE, t=(t := t + 1000),
                                     selection=tuple(tree_members), roots=roots))
    if len(loop_members) >= 2:
        script.append(TriggerCommand(kind=CommandKind.CREATE_LOOP_CIRCLE, t=(t := t + 1000),
                                     selection=tuple(loop_members)))
    return script


def task2_script(w: Workspace) -> list[TriggerCommand]:
    """Narrative-focused pass: highlight key results in a near layer, pile
    the boilerplate, fold the tuning detail, cluster the rest by format,
    and hide every remaining execution indicator."""
    code = [c.id for c in w.cells.values() if c.kind.value != "markdown"]
    n = len(code)
    highlights = code[4::10] if n > 4 else code[:1]
    pile_members = code[: max(2, int(n * 0.16))]
    fold_members = code[max(2, int(n * 0.2)): max(4, int(n * 0.4))]
    cluster_members = code[max(4, int(n * 0.4)): max(6, int(n * 0.8))]
    cluster_sid = f"s{len(w.structures) + 3}"  # id of the linear group below
    t = 0
    return [
        TriggerCommand(kind=CommandKind.APPLY_SKIP_LAYER, t=(t := t + 1000),
                       selection=tuple(highlights)),
        TriggerCommand(kind=CommandKind.CREATE_SKIP_PILE, t=(t := t + 1000),
                       selection=tuple(pile_members)),
        TriggerCommand(kind=CommandKind.CREATE_SKIP_FOLD, t=(t := t + 1000),
                       selection=tuple(fold_members),
                       keep=(fold_members[0], fold_members[-1])),
        TriggerCommand(kind=CommandKind.CREATE_LINEAR_LINEAR, t=(t := t + 1000),
                       selection=tuple(cluster_members)),
        TriggerCommand(kind=CommandKind.CYCLE_CLUSTER_MODE, t=(t := t + 1000),
                       structure=cluster_sid),
        TriggerCommand(kind=CommandKind.TOGGLE_INDICATORS, t=t + 1000,
                       selection=tuple(code)),
    ]

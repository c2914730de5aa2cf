"""Command-line front door.

Subcommands: import, apply, replay, edit, metrics, compare, validate,
fixture. Domain errors exit 1 with a message on stderr; usage errors exit
2; success exits 0. Scene writes are atomic (write-temp-then-rename).
"""

from __future__ import annotations

import argparse
import json
import sys

from .commands import TriggerCommand, dump_commands, load_commands
from .fixtures import build_study_notebook, task1_script, task2_script
from .gestures import GestureThresholds, StreamError, load_trace, replay_trace
from .layout import LayoutParameterError, initial_circular_layout
from .metrics import MetricsError, Policy, PositionTrace, metrics_report, op_count
from .model import LayoutConfig, StructureKind, StructureParams, validate_workspace
from .notebook import NotebookError, import_notebook
from .operations import (
    OperationError,
    ReplayContext,
    adjust_dimensions,
    adjust_orientation,
    apply_command,
    apply_structure,
    detach_or_insert_cell,
    merge_structures,
    move_structure,
    rewire_edge,
    toggle_indicators,
)
from .sceneio import SceneFormatError, atomic_write, canonical_dumps, load_scene, save_scene

_KIND_NAMES = {
    "linear-linear": StructureKind.LINEAR_LINEAR,
    "multi-row-grid": StructureKind.MULTI_ROW_GRID,
    "multi-column-grid": StructureKind.MULTI_COLUMN_GRID,
    "parallel-tree": StructureKind.PARALLEL_TREE,
    "loop-circle": StructureKind.LOOP_CIRCLE,
    "cluster-by-format": StructureKind.CLUSTER_BY_FORMAT,
    "cluster-by-task": StructureKind.CLUSTER_BY_TASK,
    "skip-layer": StructureKind.SKIP_LAYER,
    "skip-fold": StructureKind.SKIP_FOLD,
    "skip-pile": StructureKind.SKIP_PILE,
}

_DOMAIN_ERRORS = (
    NotebookError,
    SceneFormatError,
    OperationError,
    LayoutParameterError,
    MetricsError,
    StreamError,
)


def _vec3(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected x,y,z")
    return tuple(float(p) for p in parts)


def _ids(text: str) -> list[str]:
    return [p for p in (s.strip() for s in text.split(",")) if p]


def _selection(w, text: str) -> list[str]:
    if text == "all":
        return w.cell_order()
    return _ids(text)


def _load_config(path: str | None) -> tuple[LayoutConfig, GestureThresholds]:
    layout = LayoutConfig()
    gestures = GestureThresholds()
    if path:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
        layout = LayoutConfig.from_dict(doc.get("layout", {}))
        gestures = GestureThresholds.from_dict(doc.get("gestures", {}))
    return layout, gestures


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellspace",
        description="Organize notebook cells and their execution order in a 3D workspace.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("import", help="import a Jupyter notebook into a circular scene")
    p.add_argument("notebook")
    p.add_argument("--out", required=True)
    p.add_argument("--config")

    p = sub.add_parser("apply", help="compose selected cells into a structure")
    p.add_argument("scene")
    p.add_argument("--select", required=True, help='"all" or comma-separated cell ids')
    p.add_argument("--structure", required=True, choices=sorted(_KIND_NAMES))
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--roots", help="comma-separated branch root ids")
    p.add_argument("--keep", help="comma-separated ids to keep unfolded")
    p.add_argument("--head", help="pile head cell id")
    p.add_argument("--direction", choices=["closer", "away"])
    p.add_argument("--out", required=True)

    p = sub.add_parser("replay", help="replay a gesture trace (or command log) onto a scene")
    p.add_argument("scene")
    p.add_argument("trace")
    p.add_argument("--out", required=True)
    p.add_argument("--log", help="write the command log here")
    p.add_argument("--commands", action="store_true",
                   help="the input is already a command log, not hand poses")
    p.add_argument("--config")

    p = sub.add_parser("edit", help="edit an existing organization")
    p.add_argument("scene")
    p.add_argument("--op", required=True,
                   choices=["move", "detach", "insert", "rewire", "toggle", "merge", "dims", "orient"])
    p.add_argument("--structure")
    p.add_argument("--cell")
    p.add_argument("--grab", type=_vec3)
    p.add_argument("--release", type=_vec3)
    p.add_argument("--edge", help="from:to")
    p.add_argument("--end", choices=["from", "to"])
    p.add_argument("--new", help="new endpoint cell id")
    p.add_argument("--select")
    p.add_argument("--src")
    p.add_argument("--dst")
    p.add_argument("--delta", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("metrics", help="measure a recorded position trace")
    p.add_argument("positions")
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--script", help="command script for op counts")
    p.add_argument("--scene", help="scene the script applies to")

    p = sub.add_parser("compare", help="manual vs compositional op-count report for a script")
    p.add_argument("scene")
    p.add_argument("script")

    p = sub.add_parser("validate", help="check every workspace invariant")
    p.add_argument("scene")

    p = sub.add_parser("fixture", help="write the bundled study fixtures")
    p.add_argument("--out", required=True, help="notebook path (.ipynb)")
    p.add_argument("--cells", type=int, default=50)
    p.add_argument("--task-scripts", action="store_true",
                   help="also write task1.jsonl/task2.jsonl next to the notebook")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.cmd == "import":
        layout_cfg, _ = _load_config(args.config)
        with open(args.notebook, "rb") as handle:
            document = handle.read()
        w = import_notebook(document, layout_cfg)
        for warning in w.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        w = initial_circular_layout(w)
        save_scene(args.out, w)
        print(f"imported {len(w.cells)} cells, {len(w.edges)} edges -> {args.out}")
        return 0

    if args.cmd == "apply":
        w = load_scene(args.scene)
        selection = _selection(w, args.select)
        kind = _KIND_NAMES[args.structure]
        params = StructureParams()
        if args.rows is not None:
            params.rows = args.rows
        if args.cols is not None:
            params.cols = args.cols
        if args.roots:
            params.branch_roots = tuple(_ids(args.roots))
        if args.keep is not None:
            params.keep = tuple(_ids(args.keep))
        elif kind is StructureKind.SKIP_FOLD:
            from .operations import default_fold_keep

            params.keep = default_fold_keep(w, selection)
        if args.head:
            params.visible_head = args.head
        if args.direction:
            from .model import LayerDirection

            params.layer_direction = LayerDirection(args.direction)
        w = apply_structure(w, selection, kind, params)
        save_scene(args.out, w)
        print(f"applied {args.structure} over {len(selection)} cells -> {args.out}")
        return 0

    if args.cmd == "replay":
        _, thresholds = _load_config(args.config)
        w = load_scene(args.scene)
        with open(args.trace, "r", encoding="utf-8") as handle:
            text = handle.read()
        if args.commands:
            commands = load_commands(text)
            ctx = ReplayContext()
            for cmd in commands:
                w = apply_command(w, cmd, ctx)
            log = commands
        else:
            w, log = replay_trace(w, load_trace(text), thresholds)
        save_scene(args.out, w)
        if args.log:
            atomic_write(args.log, dump_commands(log))
        print(f"replayed {len(log)} commands -> {args.out}")
        return 0

    if args.cmd == "edit":
        w = load_scene(args.scene)
        op = args.op
        if op == "move":
            _require(args, "structure", "grab", "release")
            w = move_structure(w, args.structure, args.grab, args.release)
        elif op in ("detach", "insert"):
            _require(args, "cell", "release")
            w = detach_or_insert_cell(w, args.cell, args.release)
        elif op == "rewire":
            _require(args, "edge", "end", "new")
            from_id, _, to_id = args.edge.partition(":")
            w = rewire_edge(w, (from_id, to_id), args.end, args.new)
        elif op == "toggle":
            _require(args, "select")
            w = toggle_indicators(w, _selection(w, args.select))
        elif op == "merge":
            _require(args, "src", "dst")
            w = merge_structures(w, args.src, args.dst, args.release)
        elif op == "dims":
            _require(args, "structure", "delta")
            w = adjust_dimensions(w, args.structure, args.delta)
        elif op == "orient":
            _require(args, "structure")
            w = adjust_orientation(w, args.structure)
        save_scene(args.out, w)
        print(f"edit {op} -> {args.out}")
        return 0

    if args.cmd == "metrics":
        with open(args.positions, "r", encoding="utf-8") as handle:
            trace = PositionTrace.from_jsonl(handle.read())
        commands = workspace = None
        if args.script and args.scene:
            with open(args.script, "r", encoding="utf-8") as handle:
                commands = load_commands(handle.read())
            workspace = load_scene(args.scene)
        report = metrics_report(trace, args.eps, commands, workspace)
        print(canonical_dumps(report))
        return 0

    if args.cmd == "compare":
        w = load_scene(args.scene)
        with open(args.script, "r", encoding="utf-8") as handle:
            commands = load_commands(handle.read())
        manual = op_count(commands, Policy.MANUAL, w)
        compositional = op_count(commands, Policy.COMPOSITIONAL, w)
        report = {
            "op_count_manual": manual,
            "op_count_compositional": compositional,
            "ratio": manual / compositional if compositional else None,
        }
        print(canonical_dumps(report))
        return 0

    if args.cmd == "validate":
        w = load_scene(args.scene)
        report = validate_workspace(w)
        if report.ok():
            print("ok")
            return 0
        for violation in report.violations:
            print(f"{violation.code}: {violation.message}", file=sys.stderr)
        return 1

    if args.cmd == "fixture":
        document = build_study_notebook(code_cells=args.cells)
        atomic_write(args.out, document.decode("utf-8"))
        print(f"wrote {args.out}")
        if args.task_scripts:
            w = initial_circular_layout(import_notebook(document))
            base = args.out.rsplit(".", 1)[0]
            atomic_write(f"{base}.task1.jsonl", dump_commands(task1_script(w)))
            atomic_write(f"{base}.task2.jsonl", dump_commands(task2_script(w)))
            print(f"wrote {base}.task1.jsonl and {base}.task2.jsonl")
        return 0

    raise AssertionError(f"unhandled subcommand {args.cmd}")


def _require(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise OperationError(f"--op {args.op} requires --{name.replace('_', '-')}")


if __name__ == "__main__":
    sys.exit(main())

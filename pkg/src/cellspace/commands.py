"""Discrete organization commands and their JSON Lines wire format.

Commands are what the gesture interpreter emits, what replay consumes,
and what the viewer logs: one JSON object per line with a "command" tag,
a millisecond timestamp "t", and the payload fields of that command.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .geometry import Vec3
from .model import LayerDirection, Orientation


class CommandKind(Enum):
    SELECT_CELL = "select_cell"
    DESELECT_ALL = "deselect_all"
    MARK_BRANCH_ROOT = "mark_branch_root"
    CREATE_LINEAR_LINEAR = "create_linear_linear"
    CREATE_GRID = "create_grid"
    CREATE_PARALLEL_TREE = "create_parallel_tree"
    CREATE_LOOP_CIRCLE = "create_loop_circle"
    CREATE_SKIP_FOLD = "create_skip_fold"
    CREATE_SKIP_PILE = "create_skip_pile"
    APPLY_SKIP_LAYER = "apply_skip_layer"
    CYCLE_CLUSTER_MODE = "cycle_cluster_mode"
    GRAB_STRUCTURE = "grab_structure"
    RELEASE_STRUCTURE = "release_structure"
    GRAB_CELL = "grab_cell"
    RELEASE_CELL = "release_cell"
    GRAB_EDGE_ENDPOINT = "grab_edge_endpoint"
    RELEASE_EDGE_ENDPOINT = "release_edge_endpoint"
    TOGGLE_INDICATORS = "toggle_indicators"
    MERGE_STRUCTURES = "merge_structures"
    ADJUST_DIMENSIONS = "adjust_dimensions"
    ADJUST_ORIENTATION = "adjust_orientation"
    CANCEL = "cancel"


@dataclass
class TriggerCommand:
    """One discrete command with its sparse payload."""

    kind: CommandKind
    t: int = 0
    cell: str | None = None
    structure: str | None = None
    src: str | None = None
    dst: str | None = None
    edge: tuple[str, str] | None = None
    end: str | None = None  # "from" | "to"
    orientation: Orientation | None = None
    rows: int | None = None
    roots: tuple[str, ...] = ()
    direction: LayerDirection | None = None
    delta: int | None = None
    pose: Vec3 | None = None
    selection: tuple[str, ...] = ()
    keep: tuple[str, ...] = ()
    head: str | None = None

    def to_dict(self) -> dict:
        d: dict = {"command": self.kind.value, "t": self.t}
        if self.cell is not None:
            d["cell"] = self.cell
        if self.structure is not None:
            d["structure"] = self.structure
        if self.src is not None:
            d["src"] = self.src
        if self.dst is not None:
            d["dst"] = self.dst
        if self.edge is not None:
            d["edge"] = list(self.edge)
        if self.end is not None:
            d["end"] = self.end
        if self.orientation is not None:
            d["orientation"] = self.orientation.value
        if self.rows is not None:
            d["rows"] = self.rows
        if self.roots:
            d["roots"] = list(self.roots)
        if self.direction is not None:
            d["direction"] = self.direction.value
        if self.delta is not None:
            d["delta"] = self.delta
        if self.pose is not None:
            d["pose"] = list(self.pose)
        if self.selection:
            d["selection"] = list(self.selection)
        if self.keep:
            d["keep"] = list(self.keep)
        if self.head is not None:
            d["head"] = self.head
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TriggerCommand":
        cmd = cls(kind=CommandKind(d["command"]), t=int(d.get("t", 0)))
        cmd.cell = d.get("cell")
        cmd.structure = d.get("structure")
        cmd.src = d.get("src")
        cmd.dst = d.get("dst")
        if "edge" in d:
            cmd.edge = (d["edge"][0], d["edge"][1])
        cmd.end = d.get("end")
        if "orientation" in d:
            cmd.orientation = Orientation(d["orientation"])
        cmd.rows = d.get("rows")
        cmd.roots = tuple(d.get("roots", ()))
        if "direction" in d:
            cmd.direction = LayerDirection(d["direction"])
        cmd.delta = d.get("delta")
        if "pose" in d:
            cmd.pose = tuple(float(v) for v in d["pose"])
        cmd.selection = tuple(d.get("selection", ()))
        cmd.keep = tuple(d.get("keep", ()))
        cmd.head = d.get("head")
        return cmd


def dump_commands(commands: list[TriggerCommand]) -> str:
    """JSON Lines text, one command per line."""
    return "".join(json.dumps(c.to_dict(), sort_keys=True) + "\n" for c in commands)


def load_commands(text: str) -> list[TriggerCommand]:
    commands = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            commands.append(TriggerCommand.from_dict(json.loads(line)))
    return commands

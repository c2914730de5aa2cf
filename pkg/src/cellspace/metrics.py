"""Session measures and the manual-vs-compositional interaction cost model.

Physical measures come straight from recorded position traces. The cost
model counts primitive interactions (select, grab, move, release, gesture
trigger, fine alignment; one unit each) needed to reach a target
organization under each policy:

  compositional  each composition costs one select per cell plus one
                 triggering gesture; edits cost their grab/release pairs.
  manual         each structure is assembled one artifact at a time:
                 grab+move+release per cell, grab+release per execution
                 indicator, plus one fine alignment per cell; reshaping
                 edits (dimensions, orientation, merge, clustering) are
                 costed as manual rebuilds.

The model claims ordinal agreement only: it predicts which policy needs
fewer primitive interactions, never wall time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .commands import CommandKind, TriggerCommand
from .geometry import Vec3, vdist
from .model import Workspace
from .operations import ReplayContext, apply_command


class MetricsError(ValueError):
    """A trace or script cannot be measured."""


class Policy(Enum):
    MANUAL = "manual"
    COMPOSITIONAL = "compositional"


@dataclass
class CostModel:
    """Unit costs of the primitive interactions."""

    policy: Policy = Policy.COMPOSITIONAL
    select: int = 1
    grab: int = 1
    move: int = 1
    release: int = 1
    gesture_trigger: int = 1
    fine_align: int = 1


@dataclass
class PositionTrace:
    """Recorded user positions: strictly increasing timestamps."""

    samples: list[tuple[int, Vec3]]

    def __post_init__(self):
        for (t0, _), (t1, _) in zip(self.samples, self.samples[1:]):
            if t1 <= t0:
                raise MetricsError(f"trace timestamps must strictly increase ({t0} -> {t1})")

    @classmethod
    def from_jsonl(cls, text: str) -> "PositionTrace":
        samples = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            samples.append((int(record["t"]), tuple(float(v) for v in record["pos"])))
        return cls(samples)

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"t": t, "pos": list(p)}, sort_keys=True) + "\n" for t, p in self.samples
        )


def travel_distance(trace: PositionTrace) -> float:
    """Sum of Euclidean distances between consecutive recorded positions."""
    if not trace.samples:
        raise MetricsError("trace is empty")
    return sum(vdist(a[1], b[1]) for a, b in zip(trace.samples, trace.samples[1:]))


def movement_count(trace: PositionTrace, eps: float = 0.01) -> int:
    """Number of consecutive sample pairs that moved more than eps meters."""
    if not trace.samples:
        raise MetricsError("trace is empty")
    return sum(1 for a, b in zip(trace.samples, trace.samples[1:]) if vdist(a[1], b[1]) > eps)


# ---------------------------------------------------------------------------
# Interaction cost


def op_count(commands: list[TriggerCommand], policy: Policy, workspace: Workspace,
             costs: CostModel | None = None) -> int:
    """Primitive interaction count to realize a command script.

    The script is simulated so edge counts (indicators the manual policy
    must drag one by one) reflect the actual resulting scenes."""
    c = costs or CostModel(policy=policy)
    total = 0
    w = workspace
    ctx = ReplayContext()
    for cmd in commands:
        selection = list(cmd.selection) if cmd.selection else list(ctx.selection)
        before = w
        w = apply_command(w, cmd, ctx)
        total += _command_cost(cmd, selection, before, w, policy, c)
    return total


def _visible_intra_edges(w: Workspace, members: set[str]) -> int:
    return sum(
        1 for key, e in w.edges.items() if e.visible and key[0] in members and key[1] in members
    )


def _command_cost(cmd: TriggerCommand, selection: list[str], before: Workspace,
                  after: Workspace, policy: Policy, c: CostModel) -> int:
    kind = cmd.kind
    manual = policy is Policy.MANUAL

    if kind in (CommandKind.SELECT_CELL, CommandKind.MARK_BRANCH_ROOT, CommandKind.DESELECT_ALL):
        return 0 if manual else c.select
    if kind in (CommandKind.CANCEL, CommandKind.GRAB_STRUCTURE, CommandKind.GRAB_CELL,
                CommandKind.GRAB_EDGE_ENDPOINT):
        return 0  # grabs are costed with their release

    if kind in _CREATE_COMMANDS or kind is CommandKind.CYCLE_CLUSTER_MODE:
        if kind is CommandKind.CYCLE_CLUSTER_MODE:
            members = set(before.structures[cmd.structure].members) if cmd.structure in before.structures else set()
        else:
            members = set(selection)
        n = len(members)
        if manual:
            edges = max(_visible_intra_edges(after, members), _visible_intra_edges(before, members))
            return n * (c.grab + c.move + c.release) + edges * (c.grab + c.release) + n * c.fine_align
        if kind is CommandKind.CYCLE_CLUSTER_MODE:
            return c.gesture_trigger
        explicit = bool(cmd.selection)
        return (n * c.select if explicit else 0) + c.gesture_trigger

    if kind is CommandKind.RELEASE_STRUCTURE:
        sid = cmd.structure
        members = set(before.structures[sid].members) if sid in before.structures else set()
        if manual:
            edges = _visible_intra_edges(before, members)
            return len(members) * (c.grab + c.move + c.release) + edges * (c.grab + c.release)
        return c.grab + c.move + c.release
    if kind is CommandKind.RELEASE_CELL:
        return c.grab + c.move + c.release
    if kind is CommandKind.RELEASE_EDGE_ENDPOINT:
        return c.grab + c.release
    if kind is CommandKind.TOGGLE_INDICATORS:
        members = set(selection)
        flipped = sum(1 for key in before.edges if key[0] in members and key[1] in members)
        if manual:
            return flipped * (c.grab + c.release)
        return len(members) * c.select + c.gesture_trigger
    if kind is CommandKind.MERGE_STRUCTURES:
        if manual:
            src_members = set(before.structures[cmd.src].members) if cmd.src in before.structures else set()
            dst_members = set(after.structures[cmd.dst].members) if cmd.dst in after.structures else set()
            edges = _visible_intra_edges(after, dst_members)
            return len(src_members) * (c.grab + c.move + c.release) + edges * (c.grab + c.release)
        return c.grab + c.release
    if kind in (CommandKind.ADJUST_DIMENSIONS, CommandKind.ADJUST_ORIENTATION):
        sid = cmd.structure
        members = set(after.structures[sid].members) if sid in after.structures else set()
        if manual:
            edges = _visible_intra_edges(after, members)
            return len(members) * (c.grab + c.move + c.release) + edges * (c.grab + c.release) + len(members) * c.fine_align
        return c.grab + c.release
    return 0


_CREATE_COMMANDS = {
    CommandKind.CREATE_LINEAR_LINEAR,
    CommandKind.CREATE_GRID,
    CommandKind.CREATE_PARALLEL_TREE,
    CommandKind.CREATE_LOOP_CIRCLE,
    CommandKind.CREATE_SKIP_FOLD,
    CommandKind.CREATE_SKIP_PILE,
    CommandKind.APPLY_SKIP_LAYER,
}


def metrics_report(trace: PositionTrace | None = None, eps: float = 0.01,
                   commands: list[TriggerCommand] | None = None,
                   workspace: Workspace | None = None) -> dict:
    """The combined metrics document written by the command line tools."""
    report: dict = {
        "travel_m": None,
        "movements": None,
        "op_count_manual": None,
        "op_count_compositional": None,
        "ratio": None,
    }
    if trace is not None:
        report["travel_m"] = travel_distance(trace)
        report["movements"] = movement_count(trace, eps)
    if commands is not None and workspace is not None:
        manual = op_count(commands, Policy.MANUAL, workspace)
        compositional = op_count(commands, Policy.COMPOSITIONAL, workspace)
        report["op_count_manual"] = manual
        report["op_count_compositional"] = compositional
        report["ratio"] = (manual / compositional) if compositional else None
    return report

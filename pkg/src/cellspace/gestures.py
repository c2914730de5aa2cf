"""Hand-pose gesture interpretation: event streams in, commands out.

The interpreter is a deterministic state machine. Selection happens with
pinches (a pinch onset over a cell selects it; over empty space it clears
the selection); composition gestures happen with grips. A grip segment
runs from the first grip onset until every hand has released and the
dwell-commit window has passed; each segment closes with exactly one
command or a Cancel.

What a grip means depends on what the hand closed on:

  proxy window      composition gestures (see below)
  a selected cell   short still pulse = snap (toggle indicators);
                    long pull along the cell-to-user axis = skip layer
  structure center  grab/move (release inside another structure merges)
  free cell         grab/move (release decides detach/insert/move)
  indicator end     grab/rewire an execution edge endpoint

Composition gestures on the proxy window, in priority order:

  two hands   circular sweep > squeeze (fold) / pull apart (linear,
              near-horizontal) by distance-change sign > diagonal co-move
              (grid)
  one hand    circular sweep (loop circle) > diagonal drag (grid, rows
              from the vertical extent) > pull away (tree) / close toward
              the proxy (pile) by radial sign

When every selected cell already belongs to one grid structure, proxy
grips adjust that structure instead: a wrist rotation past the toggle
angle flips its orientation, and a two-hand squeeze/unsqueeze changes its
row count. An open-hand lateral swipe near a structure cycles its cluster
mode. Anything below every threshold cancels; no command is ever emitted
for an empty selection.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

from .commands import CommandKind, TriggerCommand
from .geometry import Vec3, point_panel_distance, vdist, vsub
from .model import LayerDirection, Orientation, StructureKind, Workspace
from .operations import structure_bounds, _inside_bounds, _mean_position


class Hand(Enum):
    LEFT = "L"
    RIGHT = "R"


class StreamError(ValueError):
    """Events arrived out of time order."""


@dataclass
class HandPoseEvent:
    """One tracked-hand sample."""

    t: int
    hand: Hand
    position: Vec3
    orientation: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 1.0)  # x, y, z, w
    grip: float = 0.0
    pinch: float = 0.0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "hand": self.hand.value,
            "pos": list(self.position),
            "quat": list(self.orientation),
            "grip": self.grip,
            "pinch": self.pinch,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HandPoseEvent":
        return cls(
            t=int(d["t"]),
            hand=Hand(d["hand"]),
            position=tuple(float(v) for v in d["pos"]),
            orientation=tuple(float(v) for v in d.get("quat", (0, 0, 0, 1))),
            grip=float(d.get("grip", 0.0)),
            pinch=float(d.get("pinch", 0.0)),
        )


def dump_trace(events: list[HandPoseEvent]) -> str:
    return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in events)


def load_trace(text: str) -> list[HandPoseEvent]:
    events = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            events.append(HandPoseEvent.from_dict(json.loads(line)))
    return events


@dataclass
class GestureThresholds:
    """Every numeric gesture threshold, serialized with config overrides."""

    pull_apart_min: float = 0.25  # m of inter-hand growth / radial pull
    squeeze_max: float = 0.12  # m final inter-hand distance for a fold
    diag_angle_lo: float = 20.0  # degrees, diagonal-drag window
    diag_angle_hi: float = 70.0
    min_drag: float = 0.20  # m displacement for grid / pile gestures
    sweep_min: float = 270.0  # degrees of circular sweep
    depth_pull_min: float = 0.30  # m along the cell-to-user axis
    swipe_speed_min: float = 1.0  # m/s mean burst speed
    swipe_travel_min: float = 0.30  # m burst travel
    grab_grip_min: float = 0.7  # grip value that counts as grabbing
    proximity_grabber: float = 0.30  # m to proxy / structure centers
    row_step: float = 0.15  # m of vertical drag per grid row
    rotate_toggle: float = 45.0  # degrees of wrist roll
    dwell_commit: int = 150  # ms of quiet before a segment commits
    pinch_select_min: float = 0.7  # pinch value that counts as selecting
    pick_radius: float = 0.10  # m hit-test radius for cells

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, d: dict) -> "GestureThresholds":
        th = cls()
        for key, value in d.items():
            if hasattr(th, key):
                current = getattr(th, key)
                setattr(th, key, int(value) if isinstance(current, int) else float(value))
        return th


@dataclass
class ProxyWindow:
    """Grab handle that appears near the hand once cells are selected."""

    active: bool = False
    center: Vec3 = (0.0, 0.0, 0.0)
    selection: list[str] = field(default_factory=list)
    grabbed_by: set[Hand] = field(default_factory=set)


class GestureKind(Enum):
    CIRCULAR = "circular"
    SQUEEZE = "squeeze"
    PULL = "pull"
    DIAGONAL = "diagonal"


def _elevation_deg(v: Vec3) -> float:
    norm = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if norm < 1e-12:
        return 0.0
    return math.degrees(math.asin(min(1.0, abs(v[1]) / norm)))


def _sweep_deg(samples: list[Vec3], center: Vec3) -> float:
    """Signed cumulative sweep around the center, measured in the frontal
    (x-y) plane. Telescoping keeps it robust to per-sample noise."""
    total = 0.0
    prev = None
    for p in samples:
        angle = math.atan2(p[1] - center[1], p[0] - center[0])
        if prev is not None:
            delta = math.remainder(angle - prev, math.tau)
            total += delta
        prev = angle
    return math.degrees(total)


def _quat_angle_deg(q0, q1) -> float:
    dot = abs(sum(a * b for a, b in zip(q0, q1)))
    dot = min(1.0, dot)
    return math.degrees(2.0 * math.acos(dot))


def classify_segment(hands: dict[Hand, list[Vec3]], proxy_center: Vec3 | None,
                     thresholds: GestureThresholds | None = None) -> GestureKind | None:
    """Classify the motion pattern of one grip segment.

    `hands` maps each gripping hand to its position samples. Exactly one
    kind (or None) comes back; the priority order documented in the module
    docstring is part of the contract."""
    th = thresholds or GestureThresholds()
    traced = {h: pts for h, pts in hands.items() if len(pts) >= 2}
    if not traced:
        return None

    if proxy_center is not None:
        for pts in traced.values():
            if abs(_sweep_deg(pts, proxy_center)) >= th.sweep_min:
                return GestureKind.CIRCULAR

    if len(traced) == 2:
        (pa, pb) = (traced[Hand.LEFT], traced[Hand.RIGHT])
        d0 = vdist(pa[0], pb[0])
        d1 = vdist(pa[-1], pb[-1])
        delta = d1 - d0
        if delta < 0 and d1 < th.squeeze_max:
            return GestureKind.SQUEEZE
        separation = vsub(pa[-1], pb[-1])
        if delta > th.pull_apart_min and _elevation_deg(separation) < th.diag_angle_lo:
            return GestureKind.PULL
        mid0 = tuple((a + b) / 2 for a, b in zip(pa[0], pb[0]))
        mid1 = tuple((a + b) / 2 for a, b in zip(pa[-1], pb[-1]))
        disp = vsub(mid1, mid0)
        if vdist(mid0, mid1) > th.min_drag and th.diag_angle_lo <= _elevation_deg(disp) <= th.diag_angle_hi:
            return GestureKind.DIAGONAL
        return None

    pts = next(iter(traced.values()))
    disp = vsub(pts[-1], pts[0])
    distance = vdist(pts[0], pts[-1])
    if distance > th.min_drag and th.diag_angle_lo <= _elevation_deg(disp) <= th.diag_angle_hi:
        return GestureKind.DIAGONAL
    if proxy_center is not None:
        radial = vdist(pts[-1], proxy_center) - vdist(pts[0], proxy_center)
        if radial > th.pull_apart_min:
            return GestureKind.PULL
        if radial < -th.min_drag:
            return GestureKind.SQUEEZE
    return None


# ---------------------------------------------------------------------------
# Interpreter


@dataclass
class _HandState:
    gripping: bool = False
    last_grip: float = 0.0
    last_pinch: float = 0.0
    samples: list[HandPoseEvent] = field(default_factory=list)
    anchor: tuple | None = None
    swipe_pairs: list[tuple[HandPoseEvent, HandPoseEvent]] = field(default_factory=list)
    last_open_sample: HandPoseEvent | None = None


@dataclass
class _Segment:
    hands: dict[Hand, list[HandPoseEvent]] = field(default_factory=dict)
    anchors: dict[Hand, tuple | None] = field(default_factory=dict)
    proxy_center: Vec3 | None = None
    gripping: set[Hand] = field(default_factory=set)
    last_release_t: int = 0


class GestureInterpreter:
    """Consumes time-ordered hand events and emits trigger commands.

    The `workspace` reference is used for hit tests; a replay driver that
    applies emitted commands should refresh it between events so later
    gestures see the structures earlier ones created."""

    def __init__(self, workspace: Workspace, thresholds: GestureThresholds | None = None):
        self.workspace = workspace
        self.thresholds = thresholds or GestureThresholds()
        self.proxy = ProxyWindow()
        self.roots: list[str] = []
        self._hands = {Hand.LEFT: _HandState(), Hand.RIGHT: _HandState()}
        self._segment: _Segment | None = None
        self._last_t: int | None = None

    # -- event loop --------------------------------------------------------

    def process(self, event: HandPoseEvent) -> list[TriggerCommand]:
        if self._last_t is not None and event.t < self._last_t:
            raise StreamError(f"event at t={event.t} arrived after t={self._last_t}")
        self._last_t = event.t
        out: list[TriggerCommand] = []

        self._maybe_close_segment(event.t, out)

        state = self._hands[event.hand]
        self._update_selection(event, state, out)
        self._update_grip(event, state, out)
        self._update_swipe(event, state, out)

        state.last_grip = event.grip
        state.last_pinch = event.pinch
        return out

    def finish(self) -> list[TriggerCommand]:
        out: list[TriggerCommand] = []
        for state in self._hands.values():
            self._end_swipe_burst(state, out)
        if self._segment is not None:
            if self._segment.gripping:
                self._segment.last_release_t = self._last_t or 0
            self._close_segment(out)
        return out

    def ingest(self, events: list[HandPoseEvent]) -> list[TriggerCommand]:
        commands: list[TriggerCommand] = []
        for event in events:
            commands.extend(self.process(event))
        commands.extend(self.finish())
        return commands

    # -- selection ----------------------------------------------------------

    def _update_selection(self, event: HandPoseEvent, state: _HandState, out: list[TriggerCommand]) -> None:
        th = self.thresholds
        onset = state.last_pinch < th.pinch_select_min <= event.pinch
        if not onset:
            return
        cell_id = self._cell_under(event.position)
        if cell_id is None:
            if self.proxy.selection:
                out.append(TriggerCommand(kind=CommandKind.DESELECT_ALL, t=event.t))
            self.proxy = ProxyWindow()
            self.roots = []
            return
        if cell_id in self.proxy.selection:
            if cell_id != self.proxy.selection[0] and cell_id not in self.roots:
                self.roots.append(cell_id)
                out.append(TriggerCommand(kind=CommandKind.MARK_BRANCH_ROOT, t=event.t, cell=cell_id))
            return
        if not self.proxy.active:
            self.proxy.active = True
            self.proxy.center = event.position
        self.proxy.selection.append(cell_id)
        out.append(TriggerCommand(kind=CommandKind.SELECT_CELL, t=event.t, cell=cell_id))

    # -- grip segments ------------------------------------------------------

    def _update_grip(self, event: HandPoseEvent, state: _HandState, out: list[TriggerCommand]) -> None:
        th = self.thresholds
        onset = state.last_grip < th.grab_grip_min <= event.grip
        release = state.gripping and event.grip < th.grab_grip_min

        if onset:
            anchor = self._grab_target(event.position)
            if self._segment is not None and not self._segment.gripping:
                # Pending segment: rejoin only on the same anchor.
                if self._segment.anchors.get(event.hand) != anchor:
                    self._segment.last_release_t = event.t
                    self._close_segment(out, close_t=event.t)
            if self._segment is None:
                self._segment = _Segment(proxy_center=self.proxy.center if self.proxy.active else None)
            seg = self._segment
            seg.gripping.add(event.hand)
            seg.hands.setdefault(event.hand, [])
            seg.anchors[event.hand] = anchor
            state.gripping = True
            state.anchor = anchor
            if anchor is not None and anchor[0] == "structure":
                out.append(TriggerCommand(kind=CommandKind.GRAB_STRUCTURE, t=event.t,
                                          structure=anchor[1], pose=event.position))
            elif anchor is not None and anchor[0] == "cell":
                out.append(TriggerCommand(kind=CommandKind.GRAB_CELL, t=event.t, cell=anchor[1]))
            elif anchor is not None and anchor[0] == "edge":
                out.append(TriggerCommand(kind=CommandKind.GRAB_EDGE_ENDPOINT, t=event.t,
                                          edge=anchor[1], end=anchor[2]))

        if state.gripping:
            self._segment.hands[event.hand].append(event)

        if release:
            state.gripping = False
            seg = self._segment
            if seg is not None:
                seg.gripping.discard(event.hand)
                seg.last_release_t = event.t

    def _maybe_close_segment(self, now: int, out: list[TriggerCommand]) -> None:
        seg = self._segment
        if seg is None or seg.gripping:
            return
        if now > seg.last_release_t + self.thresholds.dwell_commit:
            self._close_segment(out)

    def _close_segment(self, out: list[TriggerCommand], close_t: int | None = None) -> None:
        seg = self._segment
        self._segment = None
        if seg is None:
            return
        t = close_t if close_t is not None else seg.last_release_t + self.thresholds.dwell_commit
        command = self._classify_closed_segment(seg, t)
        out.append(command)
        if command.kind in _CREATE_KINDS:
            self.proxy = ProxyWindow()
            self.roots = []

    def _classify_closed_segment(self, seg: _Segment, t: int) -> TriggerCommand:
        th = self.thresholds
        anchors = [a for a in seg.anchors.values() if a is not None]
        cancel = TriggerCommand(kind=CommandKind.CANCEL, t=t)

        if any(a[0] == "proxy" for a in anchors):
            return self._classify_proxy_segment(seg, t)

        primary = anchors[0] if anchors else None
        if primary is None:
            return cancel
        hand = next(h for h, a in seg.anchors.items() if a == primary)
        samples = seg.hands.get(hand, [])
        if len(samples) < 2:
            return cancel
        release_pose = samples[-1].position

        if primary[0] == "selected_cell":
            duration = samples[-1].t - samples[0].t
            travel = vdist(samples[0].position, samples[-1].position)
            if duration <= th.dwell_commit and travel < th.min_drag:
                return TriggerCommand(kind=CommandKind.TOGGLE_INDICATORS, t=t,
                                      selection=tuple(self.proxy.selection))
            cell_pos = self.workspace.cells[primary[1]].pose.position
            axis = vsub(self.workspace.user_position, cell_pos)
            norm = math.sqrt(sum(v * v for v in axis))
            if norm > 1e-9:
                unit = tuple(v / norm for v in axis)
                disp = vsub(release_pose, samples[0].position)
                along = sum(a * b for a, b in zip(disp, unit))
                if along > th.depth_pull_min:
                    return TriggerCommand(kind=CommandKind.APPLY_SKIP_LAYER, t=t,
                                          direction=LayerDirection.CLOSER,
                                          selection=tuple(self.proxy.selection))
                if along < -th.depth_pull_min:
                    return TriggerCommand(kind=CommandKind.APPLY_SKIP_LAYER, t=t,
                                          direction=LayerDirection.AWAY,
                                          selection=tuple(self.proxy.selection))
            return cancel
        if primary[0] == "structure":
            return TriggerCommand(kind=CommandKind.RELEASE_STRUCTURE, t=t,
                                  structure=primary[1], pose=release_pose)
        if primary[0] == "cell":
            return TriggerCommand(kind=CommandKind.RELEASE_CELL, t=t,
                                  cell=primary[1], pose=release_pose)
        if primary[0] == "edge":
            target = self._cell_under(release_pose)
            if target is None:
                return cancel
            return TriggerCommand(kind=CommandKind.RELEASE_EDGE_ENDPOINT, t=t,
                                  edge=primary[1], end=primary[2], cell=target)
        return cancel

    def _classify_proxy_segment(self, seg: _Segment, t: int) -> TriggerCommand:
        th = self.thresholds
        selection = tuple(self.proxy.selection)
        cancel = TriggerCommand(kind=CommandKind.CANCEL, t=t)
        if not selection:
            return cancel
        proxy_hands = {h for h, a in seg.anchors.items() if a is not None and a[0] == "proxy"}
        traces = {h: [e.position for e in pts] for h, pts in seg.hands.items()
                  if h in proxy_hands and len(pts) >= 2}
        if not traces:
            return cancel

        context = self._selection_structure()
        if context is not None and context.kind in _ADJUSTABLE_KINDS:
            for hand in proxy_hands:
                pts = seg.hands.get(hand, [])
                if len(pts) >= 2:
                    turn = _quat_angle_deg(pts[0].orientation, pts[-1].orientation)
                    still = vdist(pts[0].position, pts[-1].position) < th.min_drag
                    if turn >= th.rotate_toggle and still:
                        return TriggerCommand(kind=CommandKind.ADJUST_ORIENTATION, t=t,
                                              structure=context.id)
            if len(traces) == 2 and context.kind in _GRID_KINDS:
                pa, pb = traces[Hand.LEFT], traces[Hand.RIGHT]
                delta = vdist(pa[-1], pb[-1]) - vdist(pa[0], pb[0])
                steps = int(round(delta / th.row_step))
                if steps != 0:
                    return TriggerCommand(kind=CommandKind.ADJUST_DIMENSIONS, t=t,
                                          structure=context.id, delta=steps)
                return cancel

        pattern = classify_segment(traces, seg.proxy_center, th)
        two_handed = len(traces) == 2
        if pattern is GestureKind.CIRCULAR:
            return TriggerCommand(kind=CommandKind.CREATE_LOOP_CIRCLE, t=t, selection=selection)
        if pattern is GestureKind.PULL:
            if two_handed:
                return TriggerCommand(kind=CommandKind.CREATE_LINEAR_LINEAR, t=t, selection=selection)
            roots = tuple(r for r in self.roots if r in selection)
            if not roots:
                if len(selection) < 2:
                    return cancel
                roots = (selection[1],)
            return TriggerCommand(kind=CommandKind.CREATE_PARALLEL_TREE, t=t,
                                  selection=selection, roots=roots)
        if pattern is GestureKind.SQUEEZE:
            if two_handed:
                return TriggerCommand(kind=CommandKind.CREATE_SKIP_FOLD, t=t, selection=selection)
            return TriggerCommand(kind=CommandKind.CREATE_SKIP_PILE, t=t, selection=selection)
        if pattern is GestureKind.DIAGONAL:
            if two_handed:
                pa, pb = traces[Hand.LEFT], traces[Hand.RIGHT]
                mid0 = tuple((a + b) / 2 for a, b in zip(pa[0], pb[0]))
                mid1 = tuple((a + b) / 2 for a, b in zip(pa[-1], pb[-1]))
                dy = abs(mid1[1] - mid0[1])
            else:
                pts = next(iter(traces.values()))
                dy = abs(pts[-1][1] - pts[0][1])
            rows = max(2, min(int(round(dy / th.row_step)), len(selection)))
            return TriggerCommand(kind=CommandKind.CREATE_GRID, t=t, selection=selection,
                                  orientation=Orientation.HORIZONTAL, rows=rows)
        return cancel

    # -- swipes ---------------------------------------------------------------

    def _update_swipe(self, event: HandPoseEvent, state: _HandState, out: list[TriggerCommand]) -> None:
        th = self.thresholds
        open_hand = event.grip < th.grab_grip_min and event.pinch < th.pinch_select_min
        if not open_hand:
            self._end_swipe_burst(state, out)
            state.last_open_sample = None
            return
        prev = state.last_open_sample
        state.last_open_sample = event
        if prev is None:
            return
        dt = (event.t - prev.t) / 1000.0
        if dt <= 0:
            return
        speed = vdist(prev.position, event.position) / dt
        if speed >= th.swipe_speed_min * 0.5:
            state.swipe_pairs.append((prev, event))
        else:
            self._end_swipe_burst(state, out)

    def _end_swipe_burst(self, state: _HandState, out: list[TriggerCommand]) -> None:
        pairs = state.swipe_pairs
        state.swipe_pairs = []
        if not pairs:
            return
        th = self.thresholds
        start = pairs[0][0]
        end = pairs[-1][1]
        travel = sum(vdist(a.position, b.position) for a, b in pairs)
        duration = (end.t - start.t) / 1000.0
        if duration <= 0 or travel < th.swipe_travel_min:
            return
        if travel / duration < th.swipe_speed_min:
            return
        if _elevation_deg(vsub(end.position, start.position)) >= th.diag_angle_lo:
            return
        sid = self._structure_near(start.position)
        if sid is None:
            return
        out.append(TriggerCommand(kind=CommandKind.CYCLE_CLUSTER_MODE, t=end.t, structure=sid))

    # -- hit tests -------------------------------------------------------------

    def _cell_under(self, position: Vec3) -> str | None:
        best: tuple[float, tuple, str] | None = None
        for cid, cell in self.workspace.cells.items():
            d = point_panel_distance(position, self.workspace.panel(cid))
            if d <= self.thresholds.pick_radius:
                key = (d, _sortable(cid), cid)
                if best is None or key < best:
                    best = key
        return best[2] if best else None

    def _structure_near(self, position: Vec3) -> str | None:
        w = self.workspace
        best: tuple[float, tuple, str] | None = None
        for sid, s in w.structures.items():
            if not s.members:
                continue
            bounds = structure_bounds(w, s, self.thresholds.proximity_grabber)
            if _inside_bounds(position, bounds):
                d = vdist(position, _mean_position(w, list(s.members)))
                key = (d, _sortable(sid), sid)
                if best is None or key < best:
                    best = key
        return best[2] if best else None

    def _edge_endpoint_near(self, position: Vec3) -> tuple[tuple[str, str], str] | None:
        radius = self.thresholds.pick_radius * 0.5
        best = None
        for key in sorted(self.workspace.edges):
            edge = self.workspace.edges[key]
            if not edge.visible or not edge.polyline:
                continue
            for end, point in (("from", edge.polyline[0]), ("to", edge.polyline[-1])):
                d = vdist(position, point)
                if d <= radius and (best is None or d < best[0]):
                    best = (d, key, end)
        return (best[1], best[2]) if best else None

    def _grab_target(self, position: Vec3) -> tuple | None:
        th = self.thresholds
        if self.proxy.active and vdist(position, self.proxy.center) <= th.proximity_grabber:
            return ("proxy",)
        cell_id = self._cell_under(position)
        if cell_id is not None and cell_id in self.proxy.selection:
            return ("selected_cell", cell_id)
        endpoint = self._edge_endpoint_near(position)
        if endpoint is not None:
            return ("edge", endpoint[0], endpoint[1])
        structure_id = self._structure_centroid_near(position)
        if structure_id is not None:
            return ("structure", structure_id)
        if cell_id is not None:
            return ("cell", cell_id)
        return None

    def _structure_centroid_near(self, position: Vec3) -> str | None:
        w = self.workspace
        best: tuple[float, tuple, str] | None = None
        for sid, s in w.structures.items():
            if not s.members:
                continue
            d = vdist(position, _mean_position(w, list(s.members)))
            if d <= self.thresholds.proximity_grabber:
                key = (d, _sortable(sid), sid)
                if best is None or key < best:
                    best = key
        return best[2] if best else None

    def _selection_structure(self):
        """The one structure containing every selected cell, if any."""
        w = self.workspace
        found = None
        for s in w.structures.values():
            if all(cid in s.members for cid in self.proxy.selection):
                if found is not None:
                    return None
                found = s
        return found


_CREATE_KINDS = {
    CommandKind.CREATE_LINEAR_LINEAR,
    CommandKind.CREATE_GRID,
    CommandKind.CREATE_PARALLEL_TREE,
    CommandKind.CREATE_LOOP_CIRCLE,
    CommandKind.CREATE_SKIP_FOLD,
    CommandKind.CREATE_SKIP_PILE,
    CommandKind.APPLY_SKIP_LAYER,
}

_GRID_KINDS = {StructureKind.MULTI_ROW_GRID, StructureKind.MULTI_COLUMN_GRID}
_ADJUSTABLE_KINDS = _GRID_KINDS | {StructureKind.PARALLEL_TREE}


def _sortable(identifier: str) -> tuple:
    digits = "".join(ch for ch in identifier if ch.isdigit())
    return (int(digits) if digits else 0, identifier)


def ingest(events: list[HandPoseEvent], workspace: Workspace,
           thresholds: GestureThresholds | None = None) -> list[TriggerCommand]:
    """Classify a whole stream against a fixed workspace snapshot."""
    return GestureInterpreter(workspace, thresholds).ingest(events)


def update_selection(event: HandPoseEvent, interpreter: GestureInterpreter) -> list[TriggerCommand]:
    """Feed one event through the selection logic only (unit-test hook)."""
    out: list[TriggerCommand] = []
    state = interpreter._hands[event.hand]
    interpreter._update_selection(event, state, out)
    state.last_pinch = event.pinch
    return out


def replay_trace(w: Workspace, events: list[HandPoseEvent],
                 thresholds: GestureThresholds | None = None) -> tuple[Workspace, list[TriggerCommand]]:
    """Run the interpreter over a trace, applying each command as it is
    emitted so later gestures see the updated workspace."""
    from .operations import ReplayContext, apply_command

    interpreter = GestureInterpreter(w, thresholds)
    ctx = ReplayContext()
    log: list[TriggerCommand] = []
    for event in events:
        for cmd in interpreter.process(event):
            log.append(cmd)
            w = apply_command(w, cmd, ctx)
            interpreter.workspace = w
    for cmd in interpreter.finish():
        log.append(cmd)
        w = apply_command(w, cmd, ctx)
        interpreter.workspace = w
    return w, log

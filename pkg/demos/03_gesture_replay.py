"""Drive the engine with synthesized hand-pose streams.

Each canonical trace pinch-selects cells, grabs the proxy window, and
performs one trigger motion; the interpreter turns the stream into
commands and the replay applies them. The same organization reached by a
direct apply call is byte-identical.
"""

import cellspace as cs
from cellspace.fixtures import build_study_notebook, canonical_trace
from cellspace.gestures import replay_trace
from cellspace.model import StructureKind

base = cs.initial_circular_layout(cs.import_notebook(build_study_notebook()))
code = [c.id for c in base.cells.values() if c.kind is cs.CellKind.CODE]
selection = code[:6]

trace = canonical_trace("loop", base, selection)
print(f"synthesized {len(trace)} hand events")

after, log = replay_trace(base.clone(), trace)
for cmd in log:
    print("  ", cmd.to_dict())

direct = cs.apply_structure(base, selection, StructureKind.LOOP_CIRCLE)
same = cs.serialize_workspace(after) == cs.serialize_workspace(direct)
print("gesture path == direct apply:", same)

# A sloppy grip that crosses no threshold cancels instead of guessing.
from cellspace.gestures import Hand, HandPoseEvent

pos = base.cells[selection[0]].pose.position
wiggle = [
    HandPoseEvent(t=10, hand=Hand.RIGHT, position=pos, pinch=1.0),
    HandPoseEvent(t=40, hand=Hand.RIGHT, position=pos, pinch=0.0),
    HandPoseEvent(t=70, hand=Hand.RIGHT, position=pos, grip=1.0),
    HandPoseEvent(t=400, hand=Hand.RIGHT, position=(pos[0] + 0.04, pos[1], pos[2]), grip=1.0),
    HandPoseEvent(t=430, hand=Hand.RIGHT, position=(pos[0] + 0.04, pos[1], pos[2]), grip=0.0),
]
commands = cs.ingest(wiggle, base)
print("ambiguous wiggle ->", [c.kind.value for c in commands])

"""Editing an existing organization: move, detach, rewire, toggle, merge,
and the two proxy-window adjustments."""

import cellspace as cs
from cellspace.fixtures import build_study_notebook
from cellspace.model import StructureKind, StructureParams
from cellspace.operations import _mean_position

base = cs.initial_circular_layout(cs.import_notebook(build_study_notebook()))
code = [c.id for c in base.cells.values() if c.kind is cs.CellKind.CODE]

w = cs.apply_structure(base, code[:10], StructureKind.MULTI_ROW_GRID, StructureParams(rows=2))
print("grid rows:", w.structures["s0"].params.rows)

w = cs.adjust_dimensions(w, "s0", +1)
print("after unsqueeze:", w.structures["s0"].params.rows, "rows")

w = cs.adjust_orientation(w, "s0")
print("after rotation:", w.structures["s0"].kind.value, "cols =", w.structures["s0"].params.cols)

centroid = _mean_position(w, code[:10])
w = cs.move_structure(w, "s0", centroid, (centroid[0] + 1.5, centroid[1], centroid[2]))
print("moved structure 1.5 m right; valid:", cs.validate_workspace(w).ok())

w = cs.detach_or_insert_cell(w, code[5], (8.0, 0.0, 2.0))
print("detached", code[5], "-> free cells:", len(w.free_cells()))

w = cs.apply_structure(w, code[10:14], StructureKind.LINEAR_LINEAR)
w = cs.merge_structures(w, "s1", "s0")
print("merged run into the grid:", len(w.structures["s0"].members), "members,",
      w.structures["s0"].kind.value)

w = cs.toggle_indicators(w, list(w.structures["s0"].members))
hidden = sum(1 for e in w.edges.values() if not e.visible)
print("indicators hidden inside the grid:", hidden)

print("operation log:")
for entry in w.log:
    print(f"  t={entry.t} {entry.command.kind.value:20s} cost={entry.primitive_cost}")

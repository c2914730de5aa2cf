"""Import the bundled 50-cell study notebook and place it on the arc.

The notebook lands as a linear sequence; the initial layout sweeps it
across a semicircle in front of the user with a left-to-right execution
flow, exactly what an analyst sees before reorganizing anything.
"""

import cellspace as cs
from cellspace.fixtures import build_study_notebook

notebook = build_study_notebook()
w = cs.import_notebook(notebook)
print(f"imported {len(w.cells)} cells "
      f"({sum(1 for c in w.cells.values() if c.kind is cs.CellKind.CODE)} code), "
      f"{len(w.edges)} execution edges")

w = cs.initial_circular_layout(w)
first = next(iter(w.cells.values()))
last = list(w.cells.values())[-1]
print(f"arc endpoints: {first.id} at {tuple(round(v, 3) for v in first.pose.position)}, "
      f"{last.id} at {tuple(round(v, 3) for v in last.pose.position)}")

report = cs.validate_workspace(w)
print("validation:", "clean" if report.ok() else report.codes())

path = "/tmp/cellspace_demo_scene.json"
cs.save_scene(path, w)
print("scene written to", path)

"""Apply each of the ten composition structures to the study fixture.

Execution-focused kinds rebuild the execution-order edges canonically;
narrative clusters hide them; the hybrid skip structures add skip chains,
fold runs into bars, or stack cells behind a visible head.
"""

import cellspace as cs
from cellspace.fixtures import build_study_notebook
from cellspace.model import StructureKind, StructureParams

base = cs.initial_circular_layout(cs.import_notebook(build_study_notebook()))
code = [c.id for c in base.cells.values() if c.kind is cs.CellKind.CODE]
everything = base.cell_order()

catalog = {
    StructureKind.LINEAR_LINEAR: (everything, StructureParams()),
    StructureKind.MULTI_ROW_GRID: (everything, StructureParams(rows=5)),
    StructureKind.MULTI_COLUMN_GRID: (everything, StructureParams(cols=5)),
    StructureKind.PARALLEL_TREE: (code, StructureParams(branch_roots=(code[1], code[20], code[35]))),
    StructureKind.LOOP_CIRCLE: (everything, StructureParams()),
    StructureKind.CLUSTER_BY_FORMAT: (everything, StructureParams()),
    StructureKind.CLUSTER_BY_TASK: (everything, StructureParams()),
    StructureKind.SKIP_LAYER: (code[4::10], StructureParams()),
    StructureKind.SKIP_FOLD: (code[:12], StructureParams(keep=(code[0], code[11]))),
    StructureKind.SKIP_PILE: (code[:8], StructureParams()),
}

for kind, (selection, params) in catalog.items():
    w = cs.apply_structure(base, list(selection), kind, params)
    s = next(iter(w.structures.values()))
    visible = sum(1 for e in w.edges.values() if e.visible)
    report = cs.validate_workspace(w)
    extras = ""
    if s.params.circle_radius:
        extras = f" radius={s.params.circle_radius:.3f}"
    if kind is StructureKind.SKIP_FOLD:
        extras = f" folded={sum(1 for c in w.cells.values() if c.folded)}"
    print(f"{kind.value:20s} members={len(s.members):2d} visible_edges={visible:2d} "
          f"valid={report.ok()}{extras}")

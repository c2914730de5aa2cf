"""Session measures and the manual-vs-compositional cost comparison.

Travel distance and movement counts come from recorded position traces;
the cost model counts primitive interactions for the scripted study
reorganizations under both policies. The comparison claims direction
only: composing is cheaper, not by how many seconds.
"""

import cellspace as cs
from cellspace.fixtures import build_study_notebook, task1_script, task2_script
from cellspace.metrics import Policy, PositionTrace, movement_count, op_count, travel_distance

# A back-and-forth pacing trace like a participant inspecting distant cells.
samples = []
for i in range(60):
    x = (i % 20) * 0.25 if (i // 20) % 2 == 0 else (19 - i % 20) * 0.25
    samples.append((i * 500, (x, 0.0, -1.0)))
trace = PositionTrace(samples)
print(f"travel: {travel_distance(trace):.2f} m over {movement_count(trace)} movements")

scene = cs.initial_circular_layout(cs.import_notebook(build_study_notebook()))
for name, script in (("task 1 (execution-focused)", task1_script(scene)),
                     ("task 2 (narrative-focused)", task2_script(scene))):
    manual = op_count(script, Policy.MANUAL, scene)
    compositional = op_count(script, Policy.COMPOSITIONAL, scene)
    print(f"{name}: manual={manual} compositional={compositional} "
          f"ratio={manual / compositional:.2f}x")

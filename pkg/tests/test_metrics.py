from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cellspace as cs
from cellspace.commands import CommandKind, TriggerCommand
from cellspace.metrics import (
    MetricsError,
    Policy,
    PositionTrace,
    metrics_report,
    movement_count,
    op_count,
    travel_distance,
)

from conftest import code_ids


def _trace(points, dt=100):
    return PositionTrace([(i * dt, tuple(p)) for i, p in enumerate(points)])


def test_straight_walk_ten_meters():
    trace = _trace([(i, 0.0, 0.0) for i in range(11)])
    assert travel_distance(trace) == pytest.approx(10.0, abs=1e-9)


def test_square_path():
    trace = _trace([(0, 0, 0), (2.5, 0, 0), (2.5, 2.5, 0), (0, 2.5, 0), (0, 0, 0)])
    assert travel_distance(trace) == pytest.approx(10.0, abs=1e-9)


def test_single_sample_distance_zero():
    assert travel_distance(_trace([(1, 2, 3)])) == 0.0


def test_empty_trace_is_an_error():
    with pytest.raises(MetricsError):
        travel_distance(PositionTrace([]))
    with pytest.raises(MetricsError):
        movement_count(PositionTrace([]))


def test_non_increasing_timestamps_rejected():
    with pytest.raises(MetricsError):
        PositionTrace([(5, (0, 0, 0)), (5, (1, 0, 0))])


def test_stationary_movement_count():
    assert movement_count(_trace([(1.0, 1.0, 1.0)] * 100)) == 0


def test_walk_movement_count():
    assert movement_count(_trace([(i, 0.0, 0.0) for i in range(11)])) == 10


def test_jitter_below_eps_not_counted():
    points = [((0.005 if i % 2 else 0.0), 0.0, 0.0) for i in range(50)]
    assert movement_count(_trace(points), eps=0.01) == 0


@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(-math.pi, math.pi))
@settings(max_examples=40, deadline=None)
def test_travel_distance_rigid_invariance(dx, dz, yaw):
    points = [(0, 0, 0), (1, 0, 0), (1, 0, 2), (3, 1, 2)]
    base = travel_distance(_trace(points))
    c, s = math.cos(yaw), math.sin(yaw)
    moved = [(c * x + s * z + dx, y, -s * x + c * z + dz) for x, y, z in points]
    assert travel_distance(_trace(moved)) == pytest.approx(base, abs=1e-9)


def test_travel_distance_concatenation_additive():
    first = [(0, 0, 0), (1, 0, 0), (1, 1, 0)]
    second = [(1, 1, 0), (4, 1, 0)]
    whole = travel_distance(_trace(first + second[1:]))
    assert whole == pytest.approx(travel_distance(_trace(first)) + travel_distance(_trace(second)), abs=1e-12)


@given(st.lists(st.floats(0.0, 0.2), min_size=2, max_size=30))
@settings(max_examples=40, deadline=None)
def test_movement_count_monotone_in_eps(steps):
    points = []
    x = 0.0
    for step in steps:
        points.append((x, 0.0, 0.0))
        x += step
    points.append((x, 0.0, 0.0))
    trace = _trace(points)
    counts = [movement_count(trace, eps) for eps in (0.0, 0.01, 0.05, 0.1, 0.5)]
    assert counts == sorted(counts, reverse=True)


# ---------------------------------------------------------------------------
# Interaction cost model


def test_linear_ten_cell_cost_table(scene):
    code = code_ids(scene)[:10]
    script = [TriggerCommand(kind=CommandKind.CREATE_LINEAR_LINEAR, selection=tuple(code))]
    assert op_count(script, Policy.COMPOSITIONAL, scene) == 11
    assert op_count(script, Policy.MANUAL, scene) == 58  # 10*3 + 9*2 + 10


def test_single_cell_reposition_costs_equal(scene):
    cid = code_ids(scene)[0]
    script = [
        TriggerCommand(kind=CommandKind.GRAB_CELL, cell=cid),
        TriggerCommand(kind=CommandKind.RELEASE_CELL, cell=cid, pose=(5.0, 0.0, 5.0)),
    ]
    assert op_count(script, Policy.COMPOSITIONAL, scene) == 3
    assert op_count(script, Policy.MANUAL, scene) == 3


def test_compositional_never_costs_more(scene):
    from cellspace.fixtures import task1_script, task2_script

    for script in (task1_script(scene), task2_script(scene)):
        manual = op_count(script, Policy.MANUAL, scene)
        compositional = op_count(script, Policy.COMPOSITIONAL, scene)
        assert compositional < manual


def test_structure_of_two_cells_is_strictly_cheaper(scene):
    code = code_ids(scene)[:2]
    script = [TriggerCommand(kind=CommandKind.CREATE_LINEAR_LINEAR, selection=tuple(code))]
    manual = op_count(script, Policy.MANUAL, scene)
    compositional = op_count(script, Policy.COMPOSITIONAL, scene)
    assert compositional < manual


def test_metrics_report_schema(scene):
    from cellspace.fixtures import task1_script

    trace = _trace([(i, 0.0, 0.0) for i in range(11)])
    report = metrics_report(trace, 0.01, task1_script(scene), scene)
    assert set(report) == {"travel_m", "movements", "op_count_manual", "op_count_compositional", "ratio"}
    assert report["travel_m"] == pytest.approx(10.0)
    assert report["movements"] == 10
    assert report["ratio"] > 1.5


def test_position_trace_jsonl_roundtrip():
    trace = _trace([(0, 0, 0), (1.5, 0.25, -2.0)])
    assert PositionTrace.from_jsonl(trace.to_jsonl()).samples == trace.samples

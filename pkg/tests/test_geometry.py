from __future__ import annotations

import math

import pytest

from cellspace.geometry import (
    PanelBox,
    Pose,
    circular_mean_yaw,
    panels_clear,
    point_panel_distance,
    segment_hits_panel_interior,
    segment_panel_distance,
    wrap_angle,
)


def test_wrap_angle_range():
    for a in [-10.0, -math.pi, -1.0, 0.0, 1.0, math.pi, 10.0, 4 * math.pi]:
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(2 * math.pi) == pytest.approx(0.0)


def test_pose_roundtrip():
    pose = Pose((1.0, 2.0, -3.0), 0.7)
    local = (0.2, -0.1, 0.05)
    assert pose.untransform(pose.transform(local)) == pytest.approx(local)


def test_pose_compose_matches_sequential_application():
    outer = Pose((1.0, 0.0, 0.0), math.pi / 3)
    inner = Pose((0.0, 0.5, 2.0), -math.pi / 5)
    p = (0.3, -0.2, 0.9)
    assert outer.compose(inner).transform(p) == pytest.approx(outer.transform(inner.transform(p)))


def test_circular_mean_yaw():
    assert circular_mean_yaw([0.1, -0.1]) == pytest.approx(0.0)
    assert circular_mean_yaw([math.pi - 0.1, -math.pi + 0.1]) == pytest.approx(math.pi)
    assert circular_mean_yaw([]) == 0.0


def _panel(x=0.0, y=0.0, z=0.0, yaw=0.0, w=0.4, h=0.3) -> PanelBox:
    return PanelBox((x, y, z), yaw, w / 2, h / 2)


def test_panels_clear_side_by_side():
    assert panels_clear(_panel(0.0), _panel(0.45), clearance=0.01)
    assert not panels_clear(_panel(0.0), _panel(0.40), clearance=0.01)  # touching
    assert not panels_clear(_panel(0.0), _panel(0.2), clearance=0.01)


def test_panels_clear_identical_pose_overlaps():
    assert not panels_clear(_panel(), _panel(), clearance=0.01)


def test_panels_clear_depth_separation():
    assert panels_clear(_panel(z=0.0), _panel(z=0.1), clearance=0.01)
    assert not panels_clear(_panel(z=0.0), _panel(z=0.005), clearance=0.01)


def test_panels_clear_rotated():
    # Perpendicular panels crossing through each other.
    assert not panels_clear(_panel(), _panel(yaw=math.pi / 2), clearance=0.01)
    # Far enough apart along the first panel's normal.
    assert panels_clear(_panel(), _panel(z=0.5, yaw=math.pi / 2), clearance=0.01)


def test_segment_through_interior():
    panel = _panel()
    assert segment_hits_panel_interior((0.0, 0.0, -1.0), (0.0, 0.0, 1.0), panel)
    # Crossing outside the rectangle
    assert not segment_hits_panel_interior((1.0, 0.0, -1.0), (1.0, 0.0, 1.0), panel)
    # Parallel, off-plane
    assert not segment_hits_panel_interior((-1.0, 0.0, 0.2), (1.0, 0.0, 0.2), panel)


def test_segment_coplanar_cases():
    panel = _panel()
    # Straight through the middle, in-plane.
    assert segment_hits_panel_interior((-1.0, 0.0, 0.0), (1.0, 0.0, 0.0), panel)
    # Along the top edge: boundary, not interior.
    assert not segment_hits_panel_interior((-1.0, 0.15, 0.0), (1.0, 0.15, 0.0), panel)
    # In-plane but clear of the rectangle.
    assert not segment_hits_panel_interior((-1.0, 0.5, 0.0), (1.0, 0.5, 0.0), panel)


def test_segment_touching_attachment_point_is_not_a_hit():
    panel = _panel()
    # Leaves the right-edge midpoint outward.
    assert not segment_hits_panel_interior((0.2, 0.0, 0.0), (0.6, 0.0, 0.0), panel)


def test_point_panel_distance():
    panel = _panel()
    assert point_panel_distance((0.2, 0.0, 0.0), panel) == pytest.approx(0.0)
    assert point_panel_distance((0.3, 0.0, 0.0), panel) == pytest.approx(0.1)
    assert point_panel_distance((0.0, 0.0, 0.25), panel) == pytest.approx(0.25)
    assert point_panel_distance((0.3, 0.25, 0.0), panel) == pytest.approx(math.hypot(0.1, 0.1))


def test_segment_panel_distance_face_overflight():
    panel = _panel()
    # Long segment passing over the face at constant height z=0.05.
    d = segment_panel_distance((-1.0, 0.0, 0.05), (1.0, 0.0, 0.05), panel)
    assert d == pytest.approx(0.05)
    # Crossing segment has distance zero.
    assert segment_panel_distance((0.0, 0.0, -1.0), (0.0, 0.0, 1.0), panel) == 0.0

"""Pose and panel geometry for the 3D cell workspace.

Frame convention: right-handed, +y up, origin at the user's starting head
position (1.2 m above the floor point), user looking along -z. A cell is a
thin w x h rectangular panel centered on its pose position, spanning local
x (width) and y (height), rotated about +y by the pose yaw. All distances
are meters, angles radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Vec3 = tuple[float, float, float]

_EPS = 1e-12


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.remainder(a, math.tau)
    if a <= -math.pi:
        a = math.pi
    return a


def rot_y(yaw: float) -> np.ndarray:
    """Rotation matrix about +y; rotates local +z toward +x for yaw > 0."""
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def vadd(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(a: Vec3, s: float) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def vnorm(a: Vec3) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def vdist(a: Vec3, b: Vec3) -> float:
    return vnorm(vsub(a, b))


@dataclass(frozen=True)
class Pose:
    """Position plus yaw about +y. Yaw is kept in (-pi, pi]."""

    position: Vec3 = (0.0, 0.0, 0.0)
    yaw: float = 0.0

    def rotate(self, v: Vec3) -> Vec3:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return (c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2])

    def unrotate(self, v: Vec3) -> Vec3:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return (c * v[0] - s * v[2], v[1], s * v[0] + c * v[2])

    def transform(self, local: Vec3) -> Vec3:
        """Local point -> world point."""
        return vadd(self.position, self.rotate(local))

    def untransform(self, world: Vec3) -> Vec3:
        """World point -> local point."""
        return self.unrotate(vsub(world, self.position))

    def compose(self, inner: "Pose") -> "Pose":
        """self applied after inner: (self o inner)(p) = self(inner(p))."""
        return Pose(self.transform(inner.position), wrap_angle(self.yaw + inner.yaw))

    def translated(self, delta: Vec3) -> "Pose":
        return Pose(vadd(self.position, delta), self.yaw)


def circular_mean_yaw(yaws: list[float]) -> float:
    """Mean direction of a set of yaw angles; 0.0 when degenerate."""
    s = sum(math.sin(y) for y in yaws)
    c = sum(math.cos(y) for y in yaws)
    if abs(s) < _EPS and abs(c) < _EPS:
        return 0.0
    return wrap_angle(math.atan2(s, c))


@dataclass(frozen=True)
class PanelBox:
    """Oriented w x h rectangle (zero thickness) at a pose."""

    center: Vec3
    yaw: float
    half_w: float
    half_h: float

    def axes(self) -> tuple[Vec3, Vec3, Vec3]:
        """(width axis u, height axis v, normal n) in world coordinates."""
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return (c, 0.0, -s), (0.0, 1.0, 0.0), (s, 0.0, c)

    def to_local(self, p: Vec3) -> Vec3:
        d = vsub(p, self.center)
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return (c * d[0] - s * d[2], d[1], s * d[0] + c * d[2])

    def to_world(self, p: Vec3) -> Vec3:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return vadd(self.center, (c * p[0] + s * p[2], p[1], -s * p[0] + c * p[2]))

    def edge_midpoint(self, side: str) -> Vec3:
        """Midpoint of one of the four perimeter edges: left/right/top/bottom."""
        local = {
            "right": (self.half_w, 0.0, 0.0),
            "left": (-self.half_w, 0.0, 0.0),
            "top": (0.0, self.half_h, 0.0),
            "bottom": (0.0, -self.half_h, 0.0),
        }[side]
        return self.to_world(local)


def panels_clear(a: PanelBox, b: PanelBox, clearance: float) -> bool:
    """Separating-axis test: True when the two panels, each inflated by
    clearance/2, do not intersect (so the gap between them is at least
    ~clearance)."""
    ua, va, na = (np.array(x) for x in a.axes())
    ub, vb, nb = (np.array(x) for x in b.axes())
    ea = np.array([a.half_w + clearance / 2.0, a.half_h + clearance / 2.0, clearance / 2.0])
    eb = np.array([b.half_w + clearance / 2.0, b.half_h + clearance / 2.0, clearance / 2.0])
    axes_a = (ua, va, na)
    axes_b = (ub, vb, nb)
    d = np.array(vsub(b.center, a.center))

    candidates = list(axes_a) + list(axes_b)
    for xa in axes_a:
        for xb in axes_b:
            cr = np.cross(xa, xb)
            n = np.linalg.norm(cr)
            if n > 1e-9:
                candidates.append(cr / n)

    for axis in candidates:
        ra = sum(ea[i] * abs(float(np.dot(axes_a[i], axis))) for i in range(3))
        rb = sum(eb[i] * abs(float(np.dot(axes_b[i], axis))) for i in range(3))
        if abs(float(np.dot(d, axis))) > ra + rb:
            return True
    return False


def segment_hits_panel_interior(p0: Vec3, p1: Vec3, panel: PanelBox, shrink: float = 1e-9) -> bool:
    """Exact test: does the segment pass through the open interior of the
    panel rectangle? Touching the perimeter (attachment points) is not a
    hit. Handles both plane-crossing and coplanar segments."""
    q0 = panel.to_local(p0)
    q1 = panel.to_local(p1)
    z0, z1 = q0[2], q1[2]
    hw = panel.half_w - shrink
    hh = panel.half_h - shrink
    coplanar_tol = 1e-9

    if abs(z0) <= coplanar_tol and abs(z1) <= coplanar_tol:
        # Coplanar: clip the 2D segment against the open rectangle.
        return _segment_overlaps_rect_2d((q0[0], q0[1]), (q1[0], q1[1]), hw, hh)

    if (z0 > coplanar_tol and z1 > coplanar_tol) or (z0 < -coplanar_tol and z1 < -coplanar_tol):
        return False

    dz = z1 - z0
    if abs(dz) < _EPS:
        return False
    t = -z0 / dz
    if t < -_EPS or t > 1.0 + _EPS:
        return False
    x = q0[0] + t * (q1[0] - q0[0])
    y = q0[1] + t * (q1[1] - q0[1])
    return abs(x) < hw and abs(y) < hh


def _segment_overlaps_rect_2d(a: tuple[float, float], b: tuple[float, float], hw: float, hh: float) -> bool:
    # Liang-Barsky clip against [-hw, hw] x [-hh, hh]; non-degenerate overlap counts.
    t0, t1 = 0.0, 1.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    for p, q in (
        (-dx, a[0] + hw),
        (dx, hw - a[0]),
        (-dy, a[1] + hh),
        (dy, hh - a[1]),
    ):
        if abs(p) < _EPS:
            if q < 0.0:
                return False
        else:
            r = q / p
            if p < 0.0:
                t0 = max(t0, r)
            else:
                t1 = min(t1, r)
            if t0 > t1:
                return False
    return (t1 - t0) > 1e-9


def segment_hits_box(p0: Vec3, p1: Vec3, panel: PanelBox, inflate: float) -> bool:
    """Slab test against the panel inflated to a box with half-extents
    (half_w + inflate, half_h + inflate, inflate). Used for routing
    decisions, where a clearance margin must be respected."""
    q0 = np.array(panel.to_local(p0))
    q1 = np.array(panel.to_local(p1))
    ext = np.array([panel.half_w + inflate, panel.half_h + inflate, inflate])
    d = q1 - q0
    t0, t1 = 0.0, 1.0
    for i in range(3):
        if abs(d[i]) < _EPS:
            if abs(q0[i]) > ext[i]:
                return False
        else:
            ta = (-ext[i] - q0[i]) / d[i]
            tb = (ext[i] - q0[i]) / d[i]
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
            if t0 > t1:
                return False
    return True


def point_panel_distance(p: Vec3, panel: PanelBox) -> float:
    """Euclidean distance from a point to the panel rectangle."""
    q = panel.to_local(p)
    dx = max(abs(q[0]) - panel.half_w, 0.0)
    dy = max(abs(q[1]) - panel.half_h, 0.0)
    return math.sqrt(dx * dx + dy * dy + q[2] * q[2])


def _seg_seg_distance(p0: np.ndarray, p1: np.ndarray, q0: np.ndarray, q1: np.ndarray) -> float:
    # Standard closest-distance between two 3D segments.
    u = p1 - p0
    v = q1 - q0
    w = p0 - q0
    a, b, c = float(u @ u), float(u @ v), float(v @ v)
    d, e = float(u @ w), float(v @ w)
    denom = a * c - b * b
    if denom > _EPS:
        s = min(max((b * e - c * d) / denom, 0.0), 1.0)
    else:
        s = 0.0
    if c > _EPS:
        t = min(max((b * s + e) / c, 0.0), 1.0)
    else:
        t = 0.0
    if a > _EPS:
        s = min(max((b * t - d) / a, 0.0), 1.0)
    return float(np.linalg.norm((p0 + s * u) - (q0 + t * v)))


def segment_panel_distance(p0: Vec3, p1: Vec3, panel: PanelBox) -> float:
    """Distance from a segment to the panel rectangle (0 when it crosses)."""
    if segment_hits_panel_interior(p0, p1, panel, shrink=0.0):
        return 0.0
    q0 = np.array(panel.to_local(p0))
    q1 = np.array(panel.to_local(p1))
    hw, hh = panel.half_w, panel.half_h
    corners = [
        np.array([-hw, -hh, 0.0]),
        np.array([hw, -hh, 0.0]),
        np.array([hw, hh, 0.0]),
        np.array([-hw, hh, 0.0]),
    ]
    best = min(point_panel_distance(p0, panel), point_panel_distance(p1, panel))
    for i in range(4):
        best = min(best, _seg_seg_distance(q0, q1, corners[i], corners[(i + 1) % 4]))
    # Face overflight: clip the in-plane projection to the rectangle and
    # take |z| at the clipped interval ends (z is linear along the segment).
    t0, t1 = 0.0, 1.0
    a = (q0[0], q0[1])
    b = (q1[0], q1[1])
    dx, dy = b[0] - a[0], b[1] - a[1]
    inside = True
    for p, q in ((-dx, a[0] + hw), (dx, hw - a[0]), (-dy, a[1] + hh), (dy, hh - a[1])):
        if abs(p) < _EPS:
            if q < 0.0:
                inside = False
                break
        else:
            r = q / p
            if p < 0.0:
                t0 = max(t0, r)
            else:
                t1 = min(t1, r)
            if t0 > t1:
                inside = False
                break
    if inside:
        for t in (t0, t1):
            z = q0[2] + t * (q1[2] - q0[2])
            best = min(best, abs(z))
    return best

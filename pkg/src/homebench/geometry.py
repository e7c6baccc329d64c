"""Small 2D helpers: points are (x, y) tuples in meters, yaw is compass degrees.

Yaw convention: 0 deg faces +y, 90 deg faces +x (clockwise when viewed from
above), matching turn_right adding degrees.
"""

from __future__ import annotations

import math

Point = tuple[float, float]

EPS = 1e-6


def quant(x: float, places: int = 3) -> float:
    """Quantize to fixed decimals, normalizing -0.0 to 0.0."""
    return round(float(x), places) + 0.0


def heading_vector(yaw_deg: float) -> Point:
    r = math.radians(yaw_deg)
    return (math.sin(r), math.cos(r))


def bearing_deg(origin: Point, target: Point) -> float:
    """Compass bearing from origin to target, in [0, 360)."""
    dx, dy = target[0] - origin[0], target[1] - origin[1]
    return math.degrees(math.atan2(dx, dy)) % 360.0


def angle_diff_deg(a: float, b: float) -> float:
    """Smallest absolute difference between two angles in degrees."""
    d = (a - b) % 360.0
    return min(d, 360.0 - d)


def signed_angle_delta(from_deg: float, to_deg: float) -> float:
    """Signed rotation in (-180, 180] taking from_deg to to_deg."""
    d = (to_deg - from_deg) % 360.0
    return d if d <= 180.0 else d - 360.0


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def lerp(a: Point, b: Point, t: float) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


class Rect:
    """Axis-aligned rectangle with inclusive boundaries."""

    __slots__ = ("x0", "y0", "x1", "y1")

    def __init__(self, x0: float, y0: float, x1: float, y1: float):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1

    def contains(self, p: Point, eps: float = EPS) -> bool:
        return (self.x0 - eps <= p[0] <= self.x1 + eps
                and self.y0 - eps <= p[1] <= self.y1 + eps)

    def contains_strict(self, p: Point, margin: float = 0.0) -> bool:
        return (self.x0 + margin < p[0] < self.x1 - margin
                and self.y0 + margin < p[1] < self.y1 - margin)

    def area(self) -> float:
        return max(0.0, self.x1 - self.x0) * max(0.0, self.y1 - self.y0)

    def center(self) -> Point:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def clamp_inside(self, p: Point, margin: float = 0.05) -> Point:
        return (min(max(p[0], self.x0 + margin), self.x1 - margin),
                min(max(p[1], self.y0 + margin), self.y1 - margin))

    def overlaps(self, other: "Rect", eps: float = EPS) -> bool:
        """True if the interiors intersect (shared edges do not count)."""
        return (self.x0 < other.x1 - eps and other.x0 < self.x1 - eps
                and self.y0 < other.y1 - eps and other.y0 < self.y1 - eps)

    def exit_parameter(self, p: Point, q: Point) -> float | None:
        """Smallest t in (0, 1] where the segment p->q leaves the rectangle.

        Returns None if q is inside (the segment never exits).
        """
        if self.contains(q):
            return None
        t_exit = 1.0
        dx, dy = q[0] - p[0], q[1] - p[1]
        if dx > EPS:
            t_exit = min(t_exit, (self.x1 - p[0]) / dx)
        elif dx < -EPS:
            t_exit = min(t_exit, (self.x0 - p[0]) / dx)
        if dy > EPS:
            t_exit = min(t_exit, (self.y1 - p[1]) / dy)
        elif dy < -EPS:
            t_exit = min(t_exit, (self.y0 - p[1]) / dy)
        return max(t_exit, 0.0)


def point_on_segment(p: Point, a: Point, b: Point, tol: float = 1e-4) -> bool:
    """True if p lies on segment a-b within tol (perpendicular and along)."""
    ax, ay = b[0] - a[0], b[1] - a[1]
    length2 = ax * ax + ay * ay
    if length2 < EPS:
        return dist(p, a) <= tol
    t = ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / length2
    t = min(max(t, 0.0), 1.0)
    proj = (a[0] + t * ax, a[1] + t * ay)
    return dist(p, proj) <= tol

"""Planar primitives for the lifted billiard table.

The configuration space is the plane minus closed disks of a common radius
``r0`` centered at every integer point, with ``0 < r0 < sqrt(2)/4`` so the
diagonal corridors stay open.  Everything here is exact double-precision
arithmetic on immutable values; no state, no tolerance other than the
documented tangency cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import GeometryError, ModelError, TangencyError

#: Open upper bound for obstacle radii (the "small obstacle" regime).
MAX_RADIUS = math.sqrt(2.0) / 4.0

#: Radius below which every unit/diagonal passage pair is admissible.
STRONG_RADIUS = math.sqrt(5.0) / 10.0

#: Quadratic discriminants below this count as a miss (grazing rays are
#: measure zero and excluded from the coding).
TANGENCY_TOL = 1e-12


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":  # type: ignore[override]
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":  # type: ignore[override]
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> "Vec2":
        n = math.hypot(self.x, self.y)
        if n == 0.0:
            raise GeometryError("cannot normalize the zero vector")
        return Vec2(self.x / n, self.y / n)


class LatticePoint(NamedTuple):
    m: int
    n: int

    def __add__(self, other: "LatticePoint") -> "LatticePoint":  # type: ignore[override]
        return LatticePoint(self.m + other.m, self.n + other.n)

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.m - other.m, self.n - other.n)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(-self.m, -self.n)

    def norm(self) -> float:
        return math.hypot(self.m, self.n)

    def as_vec(self) -> Vec2:
        return Vec2(float(self.m), float(self.n))


@dataclass(frozen=True)
class Disk:
    center: LatticePoint
    radius: float

    def __post_init__(self) -> None:
        if not (0.0 < self.radius < MAX_RADIUS):
            raise ModelError(
                f"obstacle radius {self.radius} outside (0, sqrt(2)/4)"
            )


class Segment(NamedTuple):
    a: Vec2
    b: Vec2


def check_radius(r0: float, upper: float = MAX_RADIUS) -> None:
    """Reject radii outside the supported regime."""
    if not (0.0 < r0 < upper):
        raise ModelError(f"radius {r0} outside (0, {upper})")


def dist_point_segment(p: Vec2, s: Segment) -> float:
    """Euclidean distance from ``p`` to the closed segment ``s``.

    Projection onto the carrier line with endpoint clamping; exact for
    degenerate (zero length) segments as well.
    """
    d = s.b - s.a
    dd = d.dot(d)
    if dd == 0.0:
        return (p - s.a).norm()
    t = (p - s.a).dot(d) / dd
    if t <= 0.0:
        return (p - s.a).norm()
    if t >= 1.0:
        return (p - s.b).norm()
    return (p - (s.a + d * t)).norm()


def hull_intersects_disk(d1: Disk, d2: Disk, probe: Disk) -> bool:
    """Whether ``probe`` meets the convex hull of the union of ``d1, d2``.

    For equal radii the hull is the stadium of radius ``r`` around the
    segment of centers, so the test reduces to a point-segment distance
    against ``2 r``.  Obstacles are closed: touching counts as intersecting.
    """
    if not (d1.radius == d2.radius == probe.radius):
        raise ModelError("hull test requires all radii equal")
    seg = Segment(d1.center.as_vec(), d2.center.as_vec())
    return dist_point_segment(probe.center.as_vec(), seg) <= 2.0 * d1.radius


def ray_disk_first_hit(
    origin: Vec2, direction: Vec2, disk: Disk, t_min: float = 0.0
) -> Optional[float]:
    """Smallest ``t > t_min`` with ``origin + t*direction`` on the circle.

    ``direction`` must be unit; ``origin`` must not lie strictly inside the
    disk.  Solved via the numerically stable form of the quadratic (product
    of roots over the large root), so near-tangent hits do not cancel.
    Discriminants within ``TANGENCY_TOL`` of zero are treated as misses.
    """
    if abs(direction.norm() - 1.0) > 1e-12:
        raise GeometryError("ray direction must be a unit vector")
    r = origin - disk.center.as_vec()
    c = r.dot(r) - disk.radius * disk.radius
    if c < -2.0 * disk.radius * 1e-12:
        raise GeometryError("ray origin lies inside the obstacle")
    b = r.dot(direction)
    if b >= 0.0:
        return None  # moving away; both roots behind or complex
    disc = b * b - c
    if disc <= TANGENCY_TOL:
        return None
    t = c / (-b + math.sqrt(disc))
    return t if t > t_min else None


def reflect(v: Vec2, normal: Vec2) -> Vec2:
    """Specular reflection of unit ``v`` at a wall with unit ``normal``.

    Requires incoming incidence (``v . normal < 0``); grazing incidence
    within ``1e-12`` raises, matching the coding's exclusion of tangent
    orbits.  The result is renormalized to unit length.
    """
    vn = v.dot(normal)
    if abs(vn) < 1e-12:
        raise TangencyError("grazing incidence: |v . n| < 1e-12")
    if vn > 0.0:
        raise GeometryError("reflect expects an incoming direction (v . n < 0)")
    out = v - normal * (2.0 * vn)
    return out.unit()

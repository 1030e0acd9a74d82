import math
import random

import pytest
from hypothesis import given, strategies as st

from torusbilliard.errors import GeometryError, ModelError, TangencyError
from torusbilliard.geometry import (
    Disk,
    LatticePoint,
    Segment,
    Vec2,
    dist_point_segment,
    hull_intersects_disk,
    ray_disk_first_hit,
    reflect,
)


def disk(m, n, r):
    return Disk(LatticePoint(m, n), r)


class TestDistPointSegment:
    def test_oblique(self):
        d = dist_point_segment(Vec2(0, 0), Segment(Vec2(-1, -1), Vec2(0, 1)))
        assert d == pytest.approx(1 / math.sqrt(5), abs=1e-12)

    def test_endpoint(self):
        assert dist_point_segment(Vec2(0, 0), Segment(Vec2(0, 0), Vec2(1, 0))) == 0.0

    def test_perpendicular_foot(self):
        assert dist_point_segment(Vec2(0, 1), Segment(Vec2(-1, 0), Vec2(1, 0))) == 1.0

    def test_degenerate_segment(self):
        assert dist_point_segment(Vec2(3, 4), Segment(Vec2(0, 0), Vec2(0, 0))) == 5.0

    def test_matches_dense_sampling(self):
        # independent oracle: dense parameter sampling of the segment
        seg = Segment(Vec2(-1, -1), Vec2(0, 1))
        p = Vec2(0, 0)
        samples = (
            min(
                (p - (seg.a + (seg.b - seg.a) * (i / 1_000_000.0))).norm()
                for i in range(0, 1_000_001, 37)
            )
        )
        assert dist_point_segment(p, seg) <= samples + 1e-9


class TestHull:
    def test_threshold_example(self):
        assert not hull_intersects_disk(disk(-1, -1, 0.22), disk(0, 1, 0.22), disk(0, 0, 0.22))
        assert hull_intersects_disk(disk(-1, -1, 0.23), disk(0, 1, 0.23), disk(0, 0, 0.23))

    def test_collinear(self):
        assert hull_intersects_disk(disk(0, 0, 0.05), disk(2, 0, 0.05), disk(1, 0, 0.05))

    def test_radii_mismatch(self):
        with pytest.raises(ModelError):
            hull_intersects_disk(disk(0, 0, 0.1), disk(1, 0, 0.2), disk(0, 1, 0.1))

    def test_symmetric_and_monotone(self):
        rng = random.Random(5)
        for _ in range(200):
            a = LatticePoint(rng.randint(-3, 3), rng.randint(-3, 3))
            b = LatticePoint(rng.randint(-3, 3), rng.randint(-3, 3))
            c = LatticePoint(rng.randint(-3, 3), rng.randint(-3, 3))
            r1 = rng.uniform(0.01, 0.3)
            r2 = rng.uniform(r1, 0.33)
            hit1 = hull_intersects_disk(Disk(a, r1), Disk(b, r1), Disk(c, r1))
            assert hit1 == hull_intersects_disk(Disk(b, r1), Disk(a, r1), Disk(c, r1))
            if hit1:
                assert hull_intersects_disk(Disk(a, r2), Disk(b, r2), Disk(c, r2))


class TestRayDisk:
    def test_head_on(self):
        assert ray_disk_first_hit(Vec2(-1, 0), Vec2(1, 0), disk(0, 0, 0.25)) == pytest.approx(0.75)

    def test_tangent_is_miss(self):
        assert ray_disk_first_hit(Vec2(-1, 0.25), Vec2(1, 0), disk(0, 0, 0.25)) is None

    def test_clear_miss(self):
        assert ray_disk_first_hit(Vec2(-1, 0.5), Vec2(1, 0), disk(0, 0, 0.25)) is None

    def test_moving_away(self):
        assert ray_disk_first_hit(Vec2(1, 0), Vec2(1, 0), disk(0, 0, 0.25)) is None

    def test_inside_raises(self):
        with pytest.raises(GeometryError):
            ray_disk_first_hit(Vec2(0.1, 0), Vec2(1, 0), disk(0, 0, 0.25))

    def test_hit_point_on_circle(self):
        rng = random.Random(11)
        for _ in range(500):
            ang = rng.uniform(0, 2 * math.pi)
            origin = Vec2(2.0 * math.cos(ang), 2.0 * math.sin(ang))
            aim = rng.uniform(0, 2 * math.pi)
            v = Vec2(math.cos(aim), math.sin(aim))
            r = rng.uniform(0.05, 0.34)
            t = ray_disk_first_hit(origin, v, disk(0, 0, r))
            if t is not None:
                hit = origin + v * t
                assert abs(hit.norm() - r) < 1e-10


class TestReflect:
    def test_head_on_reversal(self):
        assert reflect(Vec2(1, 0), Vec2(-1, 0)) == Vec2(-1, 0)

    def test_diagonal(self):
        s = 1 / math.sqrt(2)
        out = reflect(Vec2(1, 0), Vec2(-s, -s))
        assert out.x == pytest.approx(0.0, abs=1e-12)
        assert out.y == pytest.approx(-1.0, abs=1e-12)

    def test_vertical(self):
        assert reflect(Vec2(0, -1), Vec2(0, 1)) == Vec2(0, 1)

    def test_grazing_raises(self):
        with pytest.raises(TangencyError):
            reflect(Vec2(1, 0), Vec2(0, 1))

    @given(
        st.floats(0, 2 * math.pi),
        st.floats(0.01, math.pi - 0.01),
    )
    def test_norm_and_angle_preserved(self, na, off):
        n = Vec2(math.cos(na), math.sin(na))
        # incoming directions hitting the wall from the front
        va = na + math.pi / 2 + off
        v = Vec2(math.cos(va), math.sin(va))
        if v.dot(n) >= -1e-9:
            return
        out = reflect(v, n)
        assert abs(out.norm() - 1.0) < 1e-12
        assert abs(v.dot(n) + out.dot(n)) < 1e-12


def test_disk_radius_validation():
    with pytest.raises(ModelError):
        Disk(LatticePoint(0, 0), 0.36)
    with pytest.raises(ModelError):
        Disk(LatticePoint(0, 0), 0.0)

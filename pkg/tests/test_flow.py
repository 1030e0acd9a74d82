import math

import pytest

from torusbilliard.errors import ConfigError, DegenerateOrbitError, GeometryError
from torusbilliard.flow import (
    PhaseState,
    TrajectorySegment,
    chord_crossings,
    next_collision,
    random_state,
    simulate,
    word_of,
)
from torusbilliard.geometry import LatticePoint, Vec2
from torusbilliard.rotation import corridor_period, corridor_points

SQRT2 = math.sqrt(2.0)


class TestNextCollision:
    def test_head_on(self):
        st = PhaseState(Vec2(-0.5, 0), Vec2(1, 0))
        t, obs = next_collision(st, 10.0, 0.25)
        assert t == pytest.approx(0.25)
        assert obs == LatticePoint(0, 0)

    def test_midline_never_hits(self):
        st = PhaseState(Vec2(0.5, 0.5), Vec2(1, 0))
        assert next_collision(st, 500.0, 0.25) is None

    def test_corridor_first_hit(self):
        # diagonal corridor orbit: the launch from the origin disk first
        # meets the disk at (1, 2), tangentially pinned by the corridor wall
        r0, n = 0.2, 1
        p0, q0 = corridor_points(n, r0)
        v = (q0 - p0).unit()
        t, obs = next_collision(PhaseState(p0, v), 10.0, r0)
        assert obs == LatticePoint(1, 2)
        assert t == pytest.approx((q0 - p0).norm(), abs=1e-12)


class TestSimulate:
    def test_straight_chord_word(self):
        seg = simulate(PhaseState(Vec2(0.5, 0.5), Vec2(1, 0)), 2.0, 0.25)
        assert str(seg.word()) == "aa"
        assert not seg.collisions

    def test_corridor_period(self):
        r0, n = 0.2, 1
        T1 = corridor_period(n, r0)
        p0, q0 = corridor_points(n, r0)
        v = (q0 - p0).unit()
        seg = simulate(PhaseState(p0, v), T1 * 1.000001, r0)
        assert len(seg.collisions) == 2
        assert seg.collisions[1].time == pytest.approx(T1, rel=1e-9)
        word = "".join(c.letter for c in seg.crossings[: 4 * n + 2])
        assert word in ("ababab", "bababa")

    def test_events_ordered_and_duration(self):
        seg = simulate(random_state(0.25, 3), 50.0, 0.25)
        assert seg.duration == 50.0
        times = [c.time for c in seg.collisions]
        assert times == sorted(times)
        xtimes = [c.time for c in seg.crossings]
        assert xtimes == sorted(xtimes)

    def test_energy_conserved(self):
        seg = simulate(random_state(0.3, 8), 100.0, 0.3)
        for ev in seg.collisions:
            assert abs(ev.v_out.norm() - 1.0) < 1e-12
            # reflection law: tangential component preserved, normal flipped
            nhat = (ev.point - ev.obstacle.as_vec()).unit()
            assert abs(ev.v_in.dot(nhat) + ev.v_out.dot(nhat)) < 1e-9

    def test_collision_points_on_circles(self):
        seg = simulate(random_state(0.25, 21), 100.0, 0.25)
        for ev in seg.collisions:
            assert abs((ev.point - ev.obstacle.as_vec()).norm() - seg.r0) < 1e-9

    def test_crossing_bound(self):
        for seed in range(20):
            seg = simulate(random_state(0.25, seed), 100.0, 0.25)
            assert seg.crossing_count() <= SQRT2 * 100.0 + 2.0

    def test_gap_advance_at_least_one(self):
        for seed in range(10):
            seg = simulate(random_state(0.25, seed), 60.0, 0.25)
            for axis in ("x", "y"):
                for adv in seg.crossing_gap_advances(axis):
                    assert adv >= 1.0 - 1e-12

    def test_reversibility_short_horizon(self):
        # error doubles roughly by (1 + flight/r0) per collision, so any
        # orbit is reversible over a few collisions
        for seed in range(10):
            st0 = random_state(0.25, seed)
            seg = simulate(st0, 5.0, 0.25)
            back = simulate(
                PhaseState(seg.final.position, -seg.final.velocity), 5.0, 0.25
            )
            # the start sits on the origin obstacle, so the backward orbit
            # may or may not process the arrival collision; compare positions
            assert (back.final.position - st0.position).norm() < 1e-6

    def test_reversibility_T20_within_conditioning(self):
        # at T = 20 the 1e-6 horizon holds exactly when the accumulated
        # expansion factor prod(1 + flight/r0) stays below ~1e5
        tested = 0
        for seed in range(60):
            st0 = random_state(0.25, seed)
            seg = simulate(st0, 20.0, 0.25)
            amp, t_prev = 1.0, 0.0
            for ev in seg.collisions:
                amp *= 1.0 + (ev.time - t_prev) / 0.25
                t_prev = ev.time
            if amp > 1e5:
                continue
            tested += 1
            back = simulate(
                PhaseState(seg.final.position, -seg.final.velocity), 20.0, 0.25
            )
            assert (back.final.position - st0.position).norm() < 1e-6
        assert tested >= 2

    def test_trivial_bouncing_flagged(self):
        st = PhaseState(Vec2(-0.25, 0.0), Vec2(-1.0, 0.0))
        seg = simulate(st, 10.0, 0.25)
        assert seg.degenerate
        with pytest.raises(DegenerateOrbitError):
            word_of(seg)

    def test_inside_obstacle_rejected(self):
        with pytest.raises(GeometryError):
            simulate(PhaseState(Vec2(0.1, 0.0), Vec2(1, 0)), 1.0, 0.25)

    def test_bad_T(self):
        with pytest.raises(ConfigError):
            simulate(random_state(0.25, 0), -1.0, 0.25)


class TestBoundedTail:
    def test_tail_effect_vanishes(self):
        # appending a bounded extension changes the speed estimate by O(1/T)
        r0 = 0.25
        st = random_state(r0, 13)
        for T in (50.0, 100.0, 200.0):
            seg = simulate(st, T, r0)
            ext = simulate(st, T + 5.0, r0)
            s1 = len(seg.word()) / T
            s2 = len(ext.word()) / (T + 5.0)
            assert abs(s1 - s2) <= (SQRT2 * 5.0 + 2.0 + 5.0 * SQRT2) / T


class TestChordCrossings:
    def test_simple_up(self):
        evs, bad = chord_crossings(0.5, 0.5, 2.5, 0.5)
        assert [ch for _, ch in evs] == ["a", "a"]
        assert not bad

    def test_half_open_at_integer_junction(self):
        # two chords joined exactly on a line: one crossing total
        evs1, _ = chord_crossings(0.5, 0.2, 1.0, 0.4)
        evs2, _ = chord_crossings(1.0, 0.4, 1.5, 0.2)
        letters = [ch for _, ch in evs1] + [ch for _, ch in evs2]
        assert letters == ["a"]

    def test_reversal_at_integer_cancels(self):
        evs1, _ = chord_crossings(0.5, 0.2, 1.0 + 1e-12, 0.4)
        evs2, _ = chord_crossings(1.0 + 1e-12, 0.4, 0.5, 0.6)
        letters = [ch for _, ch in evs1] + [ch for _, ch in evs2]
        assert letters in (["a", "A"], [])

    def test_sliding_flagged(self):
        _, bad = chord_crossings(1.0, 0.25, 1.0, 0.75)
        assert bad


class TestSerialization:
    def test_round_trip(self):
        seg = simulate(random_state(0.25, 4), 25.0, 0.25, seed=4)
        doc = seg.to_json()
        back = TrajectorySegment.from_json(doc)
        assert back.duration == seg.duration
        assert back.seed == 4
        assert len(back.collisions) == len(seg.collisions)
        assert back.word() == seg.word()
        assert back.to_json() == doc

    def test_position_reconstruction(self):
        seg = simulate(random_state(0.25, 6), 30.0, 0.25)
        assert (seg.position_at(0.0) - seg.initial.position).norm() < 1e-12
        assert (seg.position_at(30.0) - seg.final.position).norm() < 1e-9
        for ev in seg.collisions:
            assert (seg.position_at(ev.time) - ev.point).norm() < 1e-9

import math

import pytest

from torusbilliard.errors import ConfigError, DegenerateOrbitError
from torusbilliard.flow import PhaseState, random_state
from torusbilliard.freegroup import EndPrefix, Word
from torusbilliard.geometry import Vec2
from torusbilliard.rotation import (
    RotationEstimate,
    achievable_point,
    commutator_ceiling,
    corridor_family,
    corridor_orbit,
    corridor_period,
    corridor_points,
    periodic_achievable,
    rotation_series,
    winding_length_oracle,
)

SQRT2 = math.sqrt(2.0)


class TestRotationSeries:
    def test_corridor_speed_constant(self):
        # the corridor orbit's shallow bounces amplify roundoff by ~1e2 per
        # collision, so three periods is the double-precision horizon
        r0, n = 0.2, 1
        T1 = corridor_period(n, r0)
        p0, q0 = corridor_points(n, r0)
        state = PhaseState(p0, (q0 - p0).unit())
        ests = rotation_series(state, [T1 * k for k in range(1, 4)], r0)
        for k, est in enumerate(ests, start=1):
            assert len(est.word) == 6 * k
            assert est.speed == pytest.approx(6.0 / T1, rel=1e-9)

    def test_prefix_depth_grows(self):
        ests = rotation_series(random_state(0.25, 2), [20, 40, 80], 0.25)
        assert ests[0].prefix_depth == -1
        assert ests[1].prefix_depth >= 0
        assert ests[2].prefix_depth >= ests[1].prefix_depth - 2

    def test_speed_bounded(self):
        for seed in range(10):
            ests = rotation_series(random_state(0.25, seed), [50.0, 100.0], 0.25)
            for est in ests:
                assert est.speed <= SQRT2 + 2.0 / est.T

    def test_degenerate_flagged(self):
        state = PhaseState(Vec2(-0.25, 0.0), Vec2(-1.0, 0.0))
        with pytest.raises(DegenerateOrbitError):
            rotation_series(state, [5.0], 0.25)

    def test_bad_grid(self):
        with pytest.raises(ConfigError):
            rotation_series(random_state(0.25, 0), [10.0, 5.0], 0.25)


class TestCorridor:
    def test_ratio_approaches_sqrt2(self):
        fam = corridor_family(10, 0.2)
        ratios = [o.ratio for o in fam]
        assert all(abs(r - SQRT2) <= 2.0 / o.n for r, o in zip(ratios, fam))
        assert abs(ratios[-1] - SQRT2) < abs(ratios[0] - SQRT2)

    def test_three_way_agreement(self):
        for r0 in (0.1, 0.3):
            o = corridor_orbit(2, r0)
            assert o.period_realized == pytest.approx(o.period_formula, rel=1e-9)
            assert o.period_simulated == pytest.approx(o.period_formula, rel=1e-9)
            assert len(o.word) == 10

    def test_corridor_free_near_max_radius(self):
        # the diagonal strip stays obstacle-free up to sqrt(2)/4
        r0 = 0.34
        assert SQRT2 * r0 < 1 - SQRT2 * r0
        o = corridor_orbit(1, r0)
        assert o.period_realized == pytest.approx(o.period_formula, rel=1e-9)

    def test_bad_n(self):
        with pytest.raises(ConfigError):
            corridor_orbit(0, 0.2)


class TestAchievable:
    def test_targets_and_directions(self):
        direction = EndPrefix(Word(""), Word("ab"))
        for target in (0.3, 0.6):
            orbits = achievable_point(target, direction, 40, 0.2)
            final = orbits[-1]
            assert abs(len(final.word) / final.duration - target) <= 0.05
            assert final.word == direction.prefix(40)

    def test_zero_target(self):
        direction = EndPrefix(Word(""), Word("a"))
        orbits = achievable_point(0.0, direction, 10, 0.2)
        final = orbits[-1]
        assert len(final.word) / final.duration <= 0.05
        assert final.word == direction.prefix(10)

    def test_star_shaped_dilution(self):
        # once a speed is realized, every smaller speed is realized in the
        # same direction: the constructive star-shapedness
        direction = EndPrefix(Word(""), Word("abAB"))
        for s in (0.5, 0.35, 0.2):
            orbits = achievable_point(s, direction, 24, 0.2)
            final = orbits[-1]
            assert abs(len(final.word) / final.duration - s) <= 0.05

    def test_above_ball_rejected(self):
        with pytest.raises(ConfigError):
            achievable_point(0.8, EndPrefix(Word(""), Word("ab")), 20, 0.2)


class TestPeriodicDensity:
    def test_periodic_estimates_hit_the_ball(self):
        # rotation data of periodic orbits comes arbitrarily close to any
        # achievable point: realize each direction at two speeds with
        # honestly periodic orbits
        for block in ("ab", "a", "abAB"):
            direction = EndPrefix(Word(""), Word(block))
            for s in (0.5, 0.3):
                orb = periodic_achievable(s, direction, 10, 0.2)
                assert orb.broken_line.periodic
                assert str(orb.word) == block * 10
                assert abs(len(orb.word) / orb.duration - s) <= 0.05
                assert orb.reflection_residual < 1e-8

    def test_requires_repeating_direction(self):
        with pytest.raises(ConfigError):
            periodic_achievable(0.5, EndPrefix(Word("ab")), 4, 0.2)


class TestCommutator:
    def test_ceiling_and_trend(self):
        ratios = []
        for r0 in (0.2, 0.1, 0.05):
            ratio, bound = commutator_ceiling(5, r0)
            assert ratio <= bound + 0.02
            ratios.append(ratio)
        assert ratios == sorted(ratios, reverse=True)
        assert ratios[-1] > SQRT2 / 2

    def test_k1_lower_bound(self):
        # the winding orbit cannot be shorter than the geometric floor
        ratio, _ = commutator_ceiling(1, 0.1)
        T = 4.0 / ratio
        assert T >= 4.0 * SQRT2 * (1.0 - 2 * 0.1) - 1e-9


class TestWindingOracle:
    def test_zero(self):
        assert winding_length_oracle(0) == 0.0

    def test_single_turn_diamond(self):
        assert winding_length_oracle(1) == pytest.approx(4 * SQRT2, abs=1e-9)

    def test_double_turn_linear(self):
        assert winding_length_oracle(2) == pytest.approx(8 * SQRT2, abs=1e-9)

    def test_budget_domain(self):
        with pytest.raises(ConfigError):
            winding_length_oracle(3)


def test_estimate_validation():
    with pytest.raises(ConfigError):
        RotationEstimate(T=0.0, word=Word("a"))

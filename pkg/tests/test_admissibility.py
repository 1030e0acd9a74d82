import itertools
import math

import pytest

from torusbilliard.admissibility import (
    Itinerary,
    check_cycle,
    edge_allowed,
    is_admissible,
    is_strongly_admissible,
)
from torusbilliard.errors import ConfigError, ModelError
from torusbilliard.geometry import LatticePoint


def itin(*cs):
    return Itinerary(tuple(LatticePoint(*c) for c in cs))


STEP8 = [
    LatticePoint(m, n)
    for m in (-1, 0, 1)
    for n in (-1, 0, 1)
    if (m, n) != (0, 0)
]


class TestConditions:
    def test_collinear_violates_3(self):
        rep = is_admissible(itin((0, 0), (1, 0), (2, 0)), 0.2)
        assert not rep and rep.condition == 3 and rep.index == 1

    def test_knight_turn_ok(self):
        assert is_admissible(itin((0, 0), (1, 0), (1, 1)), 0.2)

    def test_origin_required(self):
        rep = is_admissible(itin((1, 0), (1, 1)), 0.2)
        assert not rep and rep.condition == 1
        assert is_admissible(itin((1, 0), (1, 1)), 0.2, require_origin=False)

    def test_condition_2_blocked_pair(self):
        # passage (1,2) squeezes past the obstacle at (0,1) only for small radii
        ok_small = is_admissible(itin((0, 0), (1, 2)), 0.2)
        bad_big = is_admissible(itin((0, 0), (1, 2)), 0.23)
        assert ok_small
        assert not bad_big and bad_big.condition == 2

    def test_backtracking_allowed(self):
        assert is_admissible(itin((0, 0), (0, 1), (0, 0)), 0.2)

    def test_monotone_in_radius(self):
        seqs = [
            itin((0, 0), (1, 1), (2, 0), (2, -1)),
            itin((0, 0), (1, 0), (1, 1), (0, 1)),
            itin((0, 0), (1, 2), (2, 4)),
        ]
        for it in seqs:
            for r_hi in (0.1, 0.15, 0.2, 0.3):
                if is_admissible(it, r_hi):
                    for r_lo in (0.02, 0.05, r_hi / 2):
                        assert is_admissible(it, r_lo)

    def test_r0_out_of_range(self):
        with pytest.raises(ModelError):
            is_admissible(itin((0, 0), (1, 0)), 0.4)


class TestStrong:
    def test_long_passage_rejected(self):
        rep = is_strongly_admissible(itin((0, 0), (2, 1)), 0.2)
        assert not rep and rep.condition == 4

    def test_diagonal_pair(self):
        assert is_strongly_admissible(itin((0, 0), (1, 1), (2, 0)), 0.2)

    def test_singleton_vacuous(self):
        assert is_strongly_admissible(itin((0, 0)), 0.2)


class TestThreshold:
    def test_bisection_flips_at_sqrt5_over_10(self):
        # the (-1,-1)/(0,1) hull first touches the origin obstacle at
        # r0 = sqrt(5)/10; locate the flip by bisection
        probe = itin((-1, -1), (0, 1))

        def touches(r0):
            return not is_admissible(probe, r0, require_origin=False)

        lo, hi = 0.1, 0.3
        assert not touches(lo) and touches(hi)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if touches(mid):
                hi = mid
            else:
                lo = mid
        assert abs(hi - math.sqrt(5) / 10) < 1e-9


class TestEdgeAllowed:
    def test_perpendicular_units(self):
        assert edge_allowed(LatticePoint(1, 0), LatticePoint(0, 1), 0.2)

    def test_repeat_collinear(self):
        assert not edge_allowed(LatticePoint(1, 0), LatticePoint(1, 0), 0.2)

    def test_exhaustive_observation(self):
        # every ordered pair of distinct short passages that does not
        # backtrack is allowed, at every radius below sqrt(5)/10 tested
        for r0 in (0.10, 0.15, 0.20, 0.22):
            for l1, l2 in itertools.product(STEP8, STEP8):
                if l1 == l2 or l2 == -l1:
                    continue
                assert edge_allowed(l1, l2, r0), (l1, l2, r0)

    def test_norm_validation(self):
        with pytest.raises(ConfigError):
            edge_allowed(LatticePoint(2, 0), LatticePoint(0, 1), 0.2)

    def test_regime_validation(self):
        with pytest.raises(ModelError):
            edge_allowed(LatticePoint(1, 0), LatticePoint(0, 1), 0.23)


class TestCycle:
    def test_winding_ring(self):
        ring = itin((1, 0), (0, 1), (-1, 0), (0, -1))
        assert check_cycle(ring, LatticePoint(0, 0), 0.2)

    def test_corridor_cycle(self):
        assert check_cycle(itin((0, 0), (1, 2)), LatticePoint(3, 3), 0.2)

    def test_corridor_cycle_blocked_at_large_radius(self):
        assert not check_cycle(itin((0, 0), (1, 2)), LatticePoint(3, 3), 0.3)


class TestText:
    def test_round_trip(self):
        it = itin((0, 0), (1, 0), (1, 1), (0, 1))
        assert Itinerary.from_text(it.to_text()) == it
        assert it.to_text() == "0,0 1,0 1,1 0,1"

    def test_bad_token(self):
        with pytest.raises(ConfigError):
            Itinerary.from_text("0,0 nope")

    def test_consecutive_equal_rejected(self):
        with pytest.raises(ConfigError):
            itin((0, 0), (0, 0))

import math

import pytest

from torusbilliard.admissibility import Itinerary, is_strongly_admissible
from torusbilliard.compiler import (
    BlockWord,
    compile_detailed,
    compile_word,
    dilute,
    enumerate_codes,
)
from torusbilliard.errors import ConfigError
from torusbilliard.freegroup import Word, enumerate_words
from torusbilliard.geometry import LatticePoint
from torusbilliard.realize import minimize_length, validate_orbit

SQRT2 = math.sqrt(2.0)


class TestBlockWord:
    def test_from_word(self):
        bw = BlockWord.from_word(Word("aaBBa"))
        assert bw.blocks == (("a", 2), ("b", -2), ("a", 1))
        assert bw.to_word() == Word("aaBBa")

    def test_alternation_enforced(self):
        with pytest.raises(ConfigError):
            BlockWord((("a", 1), ("a", 2)))
        with pytest.raises(ConfigError):
            BlockWord((("a", 0),))


class TestEnumerateCodes:
    def test_single_letter_has_six(self):
        assert enumerate_codes(0) == 6

    def test_longer_blocks_have_eight(self):
        assert enumerate_codes(1) == 8
        assert enumerate_codes(5) == 8

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            enumerate_codes(-1)


class TestCompile:
    def test_triple_a_canonical_code(self):
        cw = compile_detailed("aaa", 0.2)
        vecs = [(v.m, v.n) for v in cw.code.vectors]
        # published zig-zag: parallel entry then alternating diagonals
        assert vecs[:3] == [(1, 0), (1, 1), (1, -1)]
        assert str(cw.orbit.word) == "aaa"

    def test_case_one_coupling(self):
        # positive block follows positive block: junction is the next
        # block's travel direction
        cw = compile_detailed("ab", 0.2)
        junction = cw.code.vectors[cw.code.roles.index("junction")]
        assert (junction.m, junction.n) == (0, 1)
        assert str(cw.orbit.word) == "ab"

    def test_case_two_coupling(self):
        # negative continuation: the junction keeps the first block's
        # direction instead (published case II; needs a long enough block)
        cw = compile_detailed("aaaB", 0.2)
        junction = cw.code.vectors[cw.code.roles.index("junction")]
        assert (junction.m, junction.n) == (1, 0)
        assert str(cw.orbit.word) == "aaaB"

    def test_compile_word_returns_itinerary(self):
        it = compile_word("abAB", 0.2)
        assert isinstance(it, Itinerary)
        assert it.centers[0] == LatticePoint(0, 0)
        assert is_strongly_admissible(it, 0.2)

    def test_empty_word_rejected(self):
        with pytest.raises(ConfigError):
            compile_word("", 0.2)

    def test_radius_regime(self):
        from torusbilliard.errors import ModelError

        with pytest.raises(ModelError):
            compile_word("ab", 0.25)

    def test_duration_bound(self):
        for s in ("a", "abA", "aabb", "abAB", "bbbA"):
            cw = compile_detailed(s, 0.2)
            assert cw.duration <= SQRT2 * (cw.passage_count + 1)

    def test_round_trip_through_public_api(self):
        for s in ("aaa", "abab", "abAB", "BBa"):
            it = compile_word(s, 0.2)
            orbit = validate_orbit(minimize_length(it, 0.2, gate="strong"), 0.2)
            assert str(orbit.word) == s


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_round_trip_exhaustive_short(L):
    for w in enumerate_words(L):
        cw = compile_detailed(w, 0.2)
        assert cw.orbit.word == w
        assert is_strongly_admissible(cw.itinerary, 0.2)


@pytest.mark.slow
@pytest.mark.parametrize("L", [5, 6, 7, 8])
def test_round_trip_exhaustive_long(L):
    for w in enumerate_words(L):
        cw = compile_detailed(w, 0.2)
        assert cw.orbit.word == w


class TestDilute:
    def test_zero_is_identity(self):
        it = compile_word("aaa", 0.2)
        assert dilute(it, 0, 1) == it

    def test_dilution_preserves_word_and_lengthens(self):
        cw = compile_detailed("aaa", 0.2)
        base_T = cw.duration
        longer = dilute(cw.itinerary, 4, len(cw.itinerary) - 1, 0.2)
        assert is_strongly_admissible(longer, 0.2)
        orbit = validate_orbit(minimize_length(longer, 0.2, gate="relaxed"), 0.2)
        assert str(orbit.word) == "aaa"
        assert orbit.duration > base_T + 4.0

    def test_speed_targeting(self):
        cw = compile_detailed("abab", 0.2)
        L = 4
        target = 0.3
        for pairs in range(1, 40):
            it = dilute(cw.itinerary, pairs, len(cw.itinerary) - 1, 0.2)
            orbit = validate_orbit(minimize_length(it, 0.2, gate="relaxed"), 0.2)
            if abs(L / orbit.duration - target) <= 0.05:
                break
        else:
            pytest.fail("no dilution reached the target speed")

    def test_bad_position(self):
        it = compile_word("a", 0.2)
        with pytest.raises(ConfigError):
            dilute(it, 1, 99)

"""Validation of symbolic itineraries.

An itinerary is the time-ordered list of obstacle centers a trajectory
reflects on.  It is admissible when (1) it starts at the origin obstacle,
(2) the convex hull of each consecutive obstacle pair meets no third
obstacle, and (3) each obstacle is disjoint from the hull of its two
neighbors.  Strong admissibility additionally restricts every passage
vector to norm 1 or sqrt(2).

Obstacles are closed, so "intersects" in (2) is a non-strict comparison
and "disjoint" in (3) a strict one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ConfigError
from .geometry import (
    STRONG_RADIUS,
    LatticePoint,
    Segment,
    check_radius,
    dist_point_segment,
)

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Itinerary:
    centers: Tuple[LatticePoint, ...]

    def __post_init__(self) -> None:
        cs = tuple(
            c if isinstance(c, LatticePoint) else LatticePoint(int(c[0]), int(c[1]))
            for c in self.centers
        )
        object.__setattr__(self, "centers", cs)
        if not cs:
            raise ConfigError("itinerary must contain at least one center")
        for a, b in zip(cs, cs[1:]):
            if a == b:
                raise ConfigError(f"consecutive centers equal: {a}")

    def __len__(self) -> int:
        return len(self.centers)

    def __getitem__(self, i):
        return self.centers[i]

    def passage_vectors(self) -> Tuple[LatticePoint, ...]:
        return tuple(b - a for a, b in zip(self.centers, self.centers[1:]))

    def to_text(self) -> str:
        return " ".join(f"{c.m},{c.n}" for c in self.centers)

    @staticmethod
    def from_text(text: str) -> "Itinerary":
        centers = []
        for tok in text.split():
            try:
                m, n = tok.split(",")
                centers.append(LatticePoint(int(m), int(n)))
            except ValueError:
                raise ConfigError(f"bad itinerary token {tok!r}; expected 'm,n'")
        return Itinerary(tuple(centers))


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    condition: Optional[int] = None  # 1, 2, 3 or 4 (= passage norm, strong only)
    index: Optional[int] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


_OK = AdmissibilityReport(True)

# conditions (2) and (3) are translation invariant, so their outcome only
# depends on the passage vectors; memoized per (vector(s), radius)
_PAIR_CACHE: dict = {}
_TRIPLE_CACHE: dict = {}


def _pair_clear_cached(a: LatticePoint, b: LatticePoint, r0: float) -> Optional[LatticePoint]:
    v = b - a
    key = (v.m, v.n, r0)
    off = _PAIR_CACHE.get(key, False)
    if off is False:
        off = _pair_clear(LatticePoint(0, 0), v, r0)
        _PAIR_CACHE[key] = off
    return None if off is None else a + off


def _triple_ok_cached(
    prev: LatticePoint, mid: LatticePoint, nxt: LatticePoint, r0: float
) -> bool:
    v1 = mid - prev
    v2 = nxt - mid
    key = (v1.m, v1.n, v2.m, v2.n, r0)
    ok = _TRIPLE_CACHE.get(key)
    if ok is None:
        ok = _triple_ok(LatticePoint(0, 0), v1, v1 + v2, r0)
        _TRIPLE_CACHE[key] = ok
    return ok


def _pair_clear(a: LatticePoint, b: LatticePoint, r0: float) -> Optional[LatticePoint]:
    """First third obstacle meeting the hull of the pair, if any.

    The hull is the stadium of radius r0 around the center segment; a third
    disk of equal radius meets it iff its center is within 2*r0 of the
    segment.  Scanning the bounding box inflated by ceil(2*r0)+1 cells
    covers every candidate.
    """
    pad = math.ceil(2.0 * r0) + 1
    seg = Segment(a.as_vec(), b.as_vec())
    lim = 2.0 * r0
    for m in range(min(a.m, b.m) - pad, max(a.m, b.m) + pad + 1):
        for n in range(min(a.n, b.n) - pad, max(a.n, b.n) + pad + 1):
            c = LatticePoint(m, n)
            if c == a or c == b:
                continue
            if dist_point_segment(c.as_vec(), seg) <= lim:
                return c
    return None


def _triple_ok(
    prev: LatticePoint, mid: LatticePoint, nxt: LatticePoint, r0: float
) -> bool:
    """Condition (3): the middle obstacle avoids the hull of its neighbors.

    A backtracking step (prev == nxt) degenerates the hull to the single
    disk, and the test to a plain center distance.
    """
    seg = Segment(prev.as_vec(), nxt.as_vec())
    return dist_point_segment(mid.as_vec(), seg) > 2.0 * r0


def is_admissible(
    it: Itinerary, r0: float, *, require_origin: bool = True
) -> AdmissibilityReport:
    """Check conditions (1)-(3); reports the first violation found."""
    check_radius(r0)
    cs = it.centers
    if require_origin and cs[0] != LatticePoint(0, 0):
        return AdmissibilityReport(False, 1, 0, f"itinerary starts at {cs[0]}, not (0,0)")
    for i in range(1, len(cs)):
        bad = _pair_clear_cached(cs[i - 1], cs[i], r0)
        if bad is not None:
            return AdmissibilityReport(
                False, 2, i, f"obstacle {bad} meets hull of {cs[i-1]} and {cs[i]}"
            )
    for i in range(1, len(cs) - 1):
        if not _triple_ok_cached(cs[i - 1], cs[i], cs[i + 1], r0):
            return AdmissibilityReport(
                False, 3, i, f"obstacle {cs[i]} meets hull of its neighbors"
            )
    return _OK


def is_strongly_admissible(it: Itinerary, r0: float) -> AdmissibilityReport:
    """Admissible with all passage vectors of norm 1 or sqrt(2)."""
    for i, v in enumerate(it.passage_vectors()):
        if v.m * v.m + v.n * v.n not in (1, 2):
            return AdmissibilityReport(
                False, 4, i + 1, f"passage {v} has norm {v.norm():.4f}"
            )
    return is_admissible(it, r0)


def check_cycle(it: Itinerary, shift: LatticePoint, r0: float) -> AdmissibilityReport:
    """Conditions (2) and (3) for a periodic itinerary, wrapping through
    ``centers[0] + shift``.  Condition (1) does not apply to cycles."""
    check_radius(r0)
    cs = list(it.centers)
    if len(cs) == 1:
        # the wrap triple (c, c+s, c+2s) is always collinear
        return AdmissibilityReport(False, 3, 0, "single-center cycle is degenerate")
    # two extra wrapped centers expose every cyclic pair and triple once
    ext = Itinerary(tuple(cs + [cs[0] + shift, cs[1] + shift]))
    return is_admissible(ext, r0, require_origin=False)


def edge_allowed(l1: LatticePoint, l2: LatticePoint, r0: float) -> bool:
    """Whether passage ``l2`` may directly follow passage ``l1``.

    Computed geometrically on the translated three-center itinerary
    ``[-l1, 0, l2]`` via conditions (2) and (3), rather than assumed.
    """
    check_radius(r0, upper=STRONG_RADIUS)
    for v in (l1, l2):
        if v.m * v.m + v.n * v.n not in (1, 2):
            raise ConfigError(f"passage {v} must have norm 1 or sqrt(2)")
    probe = Itinerary((-l1, LatticePoint(0, 0), l2))
    return bool(is_admissible(probe, r0, require_origin=False))

"""Topological-entropy bounds via coarse partition statistics.

The table splits into five domains: two vertical bands where the
fractional x-coordinate is within eps0 of an integer line (one band per
side), the two horizontal analogues, and the bulk.  Counting how often a
trajectory can visit the bands bounds the number of symbolic itinerary
types and hence the entropy from above by 6*sqrt(2)*ln 2; the word
construction bounds it from below by ln(3)/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .compiler import compile_detailed
from .errors import ConfigError
from .flow import TrajectorySegment
from .freegroup import Word, ball_count, enumerate_words
from .geometry import STRONG_RADIUS, Vec2, check_radius

_SQRT2 = math.sqrt(2.0)

#: The five partition tags.
LABELS = ("1", "2+", "2-", "3+", "3-")


def label(q: Vec2, eps0: float) -> str:
    """Partition tag of a point; band tags take precedence over the bulk.

    Where bands overlap (possible near obstacle corners for large eps0)
    the x-bands win over the y-bands and the + side over the - side, so
    every point gets exactly one tag.
    """
    if not (0.0 < eps0 < 0.5):
        raise ConfigError("eps0 must lie in (0, 1/2)")
    fx = q.x - math.floor(q.x)
    fy = q.y - math.floor(q.y)
    if fx <= eps0:
        return "2+"
    if fx >= 1.0 - eps0:
        return "2-"
    if fy <= eps0:
        return "3+"
    if fy >= 1.0 - eps0:
        return "3-"
    return "1"


def pi_itinerary(seg: TrajectorySegment, eps0: float) -> List[str]:
    """Partition tags sampled at times 0, eps0, 2*eps0, ..."""
    if eps0 <= 0.0:
        raise ConfigError("eps0 must be positive")
    n = int(math.floor(seg.duration / eps0 + 1e-12))
    return [label(seg.position_at(i * eps0), eps0) for i in range(n + 1)]


@dataclass(frozen=True)
class VisitStats:
    band_visits: int
    band_bound: float
    bulk_visits: int
    bulk_bound: float

    @property
    def slack(self) -> float:
        return self.band_bound - self.band_visits

    @property
    def ok(self) -> bool:
        return self.band_visits <= self.band_bound and self.bulk_visits <= self.bulk_bound


def _band_events(x0: float, x1: float, eps0: float) -> List[Tuple[float, bool]]:
    """In-band toggles of frac(x) in [0, eps0] along a linear sweep.

    Returns (fraction of the sweep, now_inside) events in order.
    """
    events: List[Tuple[float, bool]] = []
    dx = x1 - x0
    if dx > 0.0:
        k = math.floor(x0) + 1.0
        while k <= x1:  # entering at integer lines going up
            events.append(((k - x0) / dx, True))
            k += 1.0
        k = math.floor(x0 - eps0) + eps0 + 1.0
        while k <= x1:  # leaving at the band's upper edge
            events.append(((k - x0) / dx, False))
            k += 1.0
    elif dx < 0.0:
        k = math.ceil(x0) - 1.0
        while k >= x1:  # leaving at integer lines going down
            events.append(((k - x0) / dx, False))
            k -= 1.0
        k = math.ceil(x0 - eps0) + eps0 - 1.0
        while k >= x1:  # entering at the band's upper edge going down
            events.append(((k - x0) / dx, True))
            k -= 1.0
    events.sort(key=lambda e: e[0])
    return events


def _count_visits(coords: List[Tuple[float, float]], eps0: float, side: str) -> int:
    """Maximal excursions into a band family along a piecewise-linear path.

    ``coords`` is a list of (start, end) coordinate sweeps, one per chord.
    ``side`` selects frac(x) <= eps0 ('+') or frac(x) >= 1-eps0 ('-');
    the minus band of x is the plus band of -x.
    """
    visits = 0
    inside: Optional[bool] = None
    for (c0, c1) in coords:
        if side == "-":
            c0, c1 = -c0, -c1
        f0 = c0 - math.floor(c0)
        now = f0 <= eps0
        if inside is None:
            inside = now
            if inside:
                visits += 1
        # boundary-exact chord joints keep the previous state
        for _, entering in _band_events(c0, c1, eps0):
            if entering and not inside:
                visits += 1
            inside = entering
    return visits


def visit_bound_check(seg: TrajectorySegment, eps0: float) -> VisitStats:
    """Count band excursions of a trajectory and compare with the bound.

    The four bands together admit at most 2*sqrt(2)*T/(1-eps0) + 4 visits;
    the bulk, which alternates with them, at most one more.
    """
    if not (0.0 < eps0 < 0.5):
        raise ConfigError("eps0 must lie in (0, 1/2)")
    xs: List[Tuple[float, float]] = []
    ys: List[Tuple[float, float]] = []
    for (t0, t1, pos, vel) in seg.straight_pieces():
        dt = t1 - t0
        if dt <= 0.0:
            continue
        xs.append((pos.x, pos.x + vel.x * dt))
        ys.append((pos.y, pos.y + vel.y * dt))

    band_visits = (
        _count_visits(xs, eps0, "+")
        + _count_visits(xs, eps0, "-")
        + _count_visits(ys, eps0, "+")
        + _count_visits(ys, eps0, "-")
    )
    band_bound = 2.0 * _SQRT2 * seg.duration / (1.0 - eps0) + 4.0
    bulk_bound = band_bound + 1.0  # alternation with the four bands
    bulk_visits = _bulk_visits(xs, ys, eps0)
    return VisitStats(band_visits, band_bound, bulk_visits, bulk_bound)


def _bulk_visits(xs, ys, eps0: float) -> int:
    """Excursions into the complement of all four bands.

    Tracks how many bands contain the moving point; a bulk visit starts
    whenever that depth drops to zero (or at time zero in the bulk).
    """
    if not xs:
        return 0
    depth = _point_depth(xs[0][0], ys[0][0], eps0)
    visits = 1 if depth == 0 else 0
    for i in range(len(xs)):
        evs: List[Tuple[float, bool]] = []
        for (c0, c1), sgn in ((xs[i], 1), (xs[i], -1), (ys[i], 1), (ys[i], -1)):
            if sgn < 0:
                c0, c1 = -c0, -c1
            evs.extend(_band_events(c0, c1, eps0))
        evs.sort(key=lambda e: e[0])
        for _, entering in evs:
            depth += 1 if entering else -1
            if depth < 0:
                depth = 0  # boundary-exact joint; clamp
            if depth == 0 and not entering:
                visits += 1
    return visits


def _point_depth(x: float, y: float, eps0: float) -> int:
    d = 0
    for c in (x, -x, y, -y):
        f = c - math.floor(c)
        if f <= eps0:
            d += 1
    return d


def htop_upper_constant(eps0: float) -> float:
    """Entropy upper bound at band width eps0: (6*sqrt(2)/(1-eps0)) ln 2.

    Each band visit offers two exits and each bulk visit four, so the
    number of symbolic types grows like 8 to the visit bound; the rate is
    the stated constant, decreasing to 6*sqrt(2)*ln 2 as eps0 -> 0.
    """
    if not (0.0 < eps0 < 1.0):
        raise ConfigError("eps0 must lie in (0, 1)")
    return (2.0 * _SQRT2 / (1.0 - eps0)) * math.log(8.0)


def htop_upper_limit(steps: int = 8) -> float:
    """Richardson extrapolation of the upper constant to eps0 -> 0.

    Two rounds on a halving band-width sequence cancel the first- and
    second-order terms, leaving an O(eps0^3) defect.
    """
    h = 1e-2
    vals = [htop_upper_constant(h / 2**i) for i in range(steps)]
    ext1 = [2.0 * b - a for a, b in zip(vals, vals[1:])]
    ext2 = [(4.0 * b - a) / 3.0 for a, b in zip(ext1, ext1[1:])]
    return ext2[-1]


@dataclass(frozen=True)
class GrowthRow:
    length: int
    word_count: int
    min_T: float
    max_T: float
    max_passages: int

    @property
    def duration_bound(self) -> float:
        """sqrt(2) * (passage count + 1), the chord-of-centers bound."""
        return _SQRT2 * (self.max_passages + 1)


def word_growth(L_max: int, r0: float) -> List[GrowthRow]:
    """Realize every reduced word of each length up to L_max.

    Confirms that all 4*3^(L-1) words of length L are realized within
    duration sqrt(2)*(passages+1), which is what lets word counts lower-
    bound the number of orbit homotopy types per unit time.
    """
    if L_max < 1 or L_max > 10:
        raise ConfigError("L_max must be between 1 and 10")
    check_radius(r0, upper=STRONG_RADIUS)
    rows: List[GrowthRow] = []
    for L in range(1, L_max + 1):
        count = 0
        tmin, tmax, pmax = math.inf, 0.0, 0
        for w in enumerate_words(L):
            cw = compile_detailed(w, r0)
            if cw.orbit.word != w:
                raise ConfigError(f"round trip failed for {w}")
            count += 1
            tmin = min(tmin, cw.duration)
            tmax = max(tmax, cw.duration)
            pmax = max(pmax, cw.passage_count)
        rows.append(GrowthRow(L, count, tmin, tmax, pmax))
    return rows


def growth_exponent(lo: float = 10.0, hi: float = 40.0, samples: int = 31) -> float:
    """Least-squares slope of ln(count of reachable homotopy types) against
    the orbit-length budget.

    Words of length L are realized within sqrt(2)(L+1), so a budget S
    reaches at least ball_count(floor(S/sqrt(2)) - 1) types; the fitted
    slope approaches ln(3)/sqrt(2).
    """
    if hi <= lo or samples < 2:
        raise ConfigError("need an increasing budget range")
    ss = [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]
    xs, ys = [], []
    for s in ss:
        n = int(math.floor(s / _SQRT2)) - 1
        if n < 0:
            continue
        xs.append(s)
        ys.append(math.log(ball_count(n)))
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx

"""Escape-speed experiments on the cone over the group's ends.

A trajectory segment of duration T with word w contributes the estimate
(|w|/T, w): how fast, and in which direction of the Cayley tree, the
orbit escapes.  The experiments here reproduce the quantitative picture:
the universal speed ceiling sqrt(2), the diagonal-corridor family that
attains it, the constructive sqrt(2)/2 ball of prescribed-direction
orbits, and the commutator-direction ceiling sqrt(2)/(2(1-2 r0)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .admissibility import Itinerary
from .compiler import compile_detailed, dilute
from .errors import (
    BilliardError,
    ConfigError,
    ConstructionError,
    DegenerateOrbitError,
    OracleIncompleteError,
)
from .flow import PhaseState, simulate
from .freegroup import EndPrefix, Word, longest_common_prefix
from .geometry import STRONG_RADIUS, LatticePoint, Vec2, check_radius
from .realize import RealizedOrbit, minimize_length, minimize_periodic, validate_orbit

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RotationEstimate:
    T: float
    word: Word
    prefix_depth: int = -1  # letters shared with the previous estimate

    @property
    def speed(self) -> float:
        return len(self.word) / self.T

    def __post_init__(self) -> None:
        if self.T <= 0.0:
            raise ConfigError("estimate needs positive duration")


def rotation_series(
    initial: PhaseState, T_grid: Sequence[float], r0: float
) -> List[RotationEstimate]:
    """Escape-speed estimates of one orbit along an increasing time grid.

    The prefix depth between consecutive words is the empirical datum for
    the direction converging in the tree.
    """
    grid = list(T_grid)
    if not grid or any(t <= 0 for t in grid) or any(
        b <= a for a, b in zip(grid, grid[1:])
    ):
        raise ConfigError("T grid must be positive and increasing")
    seg = simulate(initial, grid[-1], r0)
    if seg.degenerate:
        raise DegenerateOrbitError(
            f"orbit flagged degenerate ({seg.degenerate_reason})"
        )
    out: List[RotationEstimate] = []
    prev_word: Optional[Word] = None
    for T in grid:
        letters = "".join(c.letter for c in seg.crossings if c.time <= T)
        w = Word(letters)
        depth = -1 if prev_word is None else len(longest_common_prefix(prev_word, w))
        out.append(RotationEstimate(T=T, word=w, prefix_depth=depth))
        prev_word = w
    return out


# ---------------------------------------------------------------------------
# diagonal corridor family


@dataclass(frozen=True)
class CorridorOrbit:
    n: int
    r0: float
    period_formula: float
    period_realized: float
    period_simulated: float
    word: Word

    @property
    def ratio(self) -> float:
        return (4 * self.n + 2) / self.period_formula


def corridor_period(n: int, r0: float) -> float:
    """Closed-form period of the n-th diagonal corridor orbit."""
    return 2.0 * math.sqrt(2 * n * n + 2 * n + 1 + 4 * r0 * r0 - 2 * _SQRT2 * r0)


def corridor_points(n: int, r0: float) -> Tuple[Vec2, Vec2]:
    """Reflection points of one period: on the origin disk and on the disk
    at (n, n+1)."""
    v0 = Vec2(-r0 / _SQRT2, r0 / _SQRT2)
    q = Vec2(float(n) - v0.x, float(n + 1) - v0.y)
    return v0, q


def corridor_orbit(n: int, r0: float) -> CorridorOrbit:
    """Build one corridor orbit three ways and cross-check them.

    The analytic reflection points give the period in closed form; the
    periodic length minimizer must reproduce it, and the event-driven flow
    launched from the first reflection point must spell the (ab)^(2n+1)
    word over one period.  The simulated period is measured as twice the
    first collision time: the orbit's two legs are congruent (it is a
    palindrome across the corridor axis), and the second bounce is too
    shallow for a direct full-period measurement to stay conditioned.
    """
    if n < 1:
        raise ConfigError("corridor index n must be >= 1")
    check_radius(r0)
    p0, q0 = corridor_points(n, r0)
    T = corridor_period(n, r0)

    it = Itinerary((LatticePoint(0, 0), LatticePoint(n, n + 1)))
    shift = LatticePoint(2 * n + 1, 2 * n + 1)
    bl = minimize_periodic(it, shift, r0, gate="relaxed")
    orbit = validate_orbit(bl, r0)
    if orbit.min_clearance < -1e-10:
        raise ConstructionError("corridor orbit obstructed; radius out of regime")

    vel = (q0 - p0).unit()
    seg = simulate(PhaseState(p0, vel), T * 1.0000001, r0)
    hits = seg.collisions
    t_sim = 2.0 * hits[0].time if hits else float("nan")
    if not hits or hits[0].obstacle != LatticePoint(n, n + 1):
        raise ConstructionError("corridor flight did not reach the expected obstacle")

    return CorridorOrbit(
        n=n,
        r0=r0,
        period_formula=T,
        period_realized=orbit.duration,
        period_simulated=t_sim,
        word=orbit.word if orbit.word is not None else Word(""),
    )


def corridor_family(n_max: int, r0: float) -> List[CorridorOrbit]:
    """The corridor orbits for n = 1..n_max; their speed tends to sqrt(2)."""
    return [corridor_orbit(n, r0) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# prescribed direction and speed


def achievable_point(
    target_speed: float,
    direction: EndPrefix,
    depth: int,
    r0: float,
    speed_tol: float = 0.05,
    max_rounds: int = 60,
) -> List[RealizedOrbit]:
    """Realize an orbit escaping along ``direction`` at a prescribed speed.

    Compiles the direction's depth-prefix, then stretches the orbit by idle
    insertions until |speed - target| <= speed_tol.  Returns the orbits of
    the monotone search; the last one meets the tolerance and spells the
    exact prefix.  Speeds above sqrt(2)/2 are outside the guaranteed ball.
    """
    if not (0.0 <= target_speed <= _SQRT2 / 2.0 + 1e-12):
        raise ConfigError(
            f"target speed {target_speed} outside the guaranteed ball [0, sqrt(2)/2]"
        )
    check_radius(r0, upper=STRONG_RADIUS)
    w = direction.prefix(depth)
    if len(w) == 0:
        raise ConfigError("direction prefix is empty")

    compiled = compile_detailed(w, r0)
    orbits = [compiled.orbit]
    L = len(w)
    it = compiled.itinerary
    pairs = 0
    if target_speed == 0.0:
        # vertex of the cone is approached, not attained; stretch far enough
        # that the speed is comfortably below any positive tolerance
        target = speed_tol / 2.0
    else:
        target = target_speed

    stretch = _IdleStretcher(it, w, r0)
    for _ in range(max_rounds):
        speed = L / orbits[-1].duration
        if abs(speed - target_speed) <= speed_tol or (
            target_speed == 0.0 and speed <= speed_tol
        ):
            return orbits
        if speed < target - speed_tol:
            raise ConstructionError(
                f"undiluted orbit already slower ({speed:.3f}) than target {target}"
            )
        # each idle pair adds between 2(1-2 r0) and 2 to the duration
        need = L / target - orbits[-1].duration
        pairs += max(1, int(need / 2.0))
        orbits.append(stretch(pairs))
    raise ConstructionError("speed targeting did not converge")


class _IdleStretcher:
    """Word-preserving idle insertion.

    The insertion spot and bounce direction can perturb the reflections
    around them, so candidates are tried in a fixed order and verified by
    the realized word; the first working choice is kept for every
    subsequent stretch.
    """

    def __init__(self, it: Itinerary, w: Word, r0: float):
        self.it = it
        self.w = w
        self.r0 = r0
        self.choice: Optional[Tuple[int, LatticePoint]] = None

    def _candidates(self):
        n = len(self.it)
        positions = [n - 1, max(0, n - 3), n // 2, min(1, n - 1)]
        steps = [
            LatticePoint(0, 1),
            LatticePoint(0, -1),
            LatticePoint(1, 0),
            LatticePoint(-1, 0),
            LatticePoint(1, 1),
            LatticePoint(1, -1),
            LatticePoint(-1, 1),
            LatticePoint(-1, -1),
        ]
        seen = set()
        for pos in positions:
            if pos in seen:
                continue
            seen.add(pos)
            for step in steps:
                yield pos, step

    def _try(self, pairs: int, pos: int, step: LatticePoint) -> Optional[RealizedOrbit]:
        try:
            diluted = dilute(self.it, pairs, pos, self.r0, step=step)
            bl = minimize_length(diluted, self.r0, 1e-10, gate="relaxed")
            orb = validate_orbit(bl, self.r0)
        except BilliardError:
            return None
        if orb.word != self.w or orb.min_clearance < -1e-10:
            return None
        return orb

    def __call__(self, pairs: int) -> RealizedOrbit:
        if self.choice is not None:
            orb = self._try(pairs, *self.choice)
            if orb is not None:
                return orb
            self.choice = None
        for pos, step in self._candidates():
            orb = self._try(pairs, pos, step)
            if orb is not None:
                self.choice = (pos, step)
                return orb
        raise ConstructionError("no word-preserving idle insertion found")


# ---------------------------------------------------------------------------
# periodic realizations of prescribed directions


def periodic_achievable(
    target_speed: float,
    direction: EndPrefix,
    copies: int,
    r0: float,
    speed_tol: float = 0.05,
) -> RealizedOrbit:
    """A periodic orbit escaping along an eventually-periodic direction at
    a prescribed speed.

    The passage-vector tile of one repeat block is extracted from the
    middle of a compiled triple repeat (where it has settled into its
    translation-periodic form), closed into a cyclic itinerary, and
    stretched by cyclic idle insertion until the speed estimate lands
    within tolerance.  The period word is verified to be exactly the
    block power, so the orbit's rotation data is (speed, direction) on
    the nose; such periodic estimates fill the achievable ball.
    """
    if direction.repeat is None:
        raise ConfigError("periodic realization needs a repeating direction")
    if not (0.0 < target_speed <= _SQRT2 / 2.0 + 1e-12):
        raise ConfigError("target speed outside (0, sqrt(2)/2]")
    check_radius(r0, upper=STRONG_RADIUS)
    block = direction.repeat
    Lb = len(block)
    triple = compile_detailed(Word(block.letters * 6), r0)
    vecs = triple.code.vectors
    target_word = Word(block.letters * copies)

    candidates = []
    for tile_len in (Lb, 2 * Lb):
        if (copies * Lb) % tile_len != 0:
            continue
        reps = (copies * Lb) // tile_len
        for offset in range(tile_len, min(3 * tile_len, len(vecs) - tile_len) + 1):
            candidates.append((vecs[offset : offset + tile_len], reps))

    for tile, reps in candidates:
        centers = [LatticePoint(0, 0)]
        for _ in range(reps):
            for v in tile:
                centers.append(centers[-1] + v)
        shift = centers[-1]
        if shift == LatticePoint(0, 0) and len(set(centers[:-1])) < 3:
            continue
        try:
            cyc = Itinerary(tuple(centers[:-1]))
        except ConfigError:
            continue
        orbit = _cyclic_word_orbit(cyc, shift, r0, target_word)
        if orbit is None:
            continue
        pairs = 0
        for _ in range(60):
            speed = len(target_word) / orbit.duration
            if abs(speed - target_speed) <= speed_tol:
                return orbit
            if speed < target_speed - speed_tol:
                break
            need = len(target_word) / target_speed - orbit.duration
            pairs += max(1, int(need / 2.0))
            stretched = _cyclic_dilute_orbit(cyc, shift, r0, target_word, pairs)
            if stretched is None:
                break
            orbit = stretched
    raise ConstructionError(
        f"no periodic realization of {direction.repeat}^{copies} at speed {target_speed}"
    )


def _cyclic_word_orbit(
    cyc: Itinerary, shift: LatticePoint, r0: float, target: Word
) -> Optional[RealizedOrbit]:
    """Realize a cycle and rotate its phase until it spells the target."""
    try:
        bl = minimize_periodic(cyc, shift, r0, gate="cycle")
        orbit = validate_orbit(bl, r0)
    except BilliardError:
        return None
    if orbit.coding_degenerate or orbit.min_clearance < -1e-10:
        return None
    if orbit.word == target:
        return orbit
    n = len(cyc)
    for rot in range(1, n):
        rolled = Itinerary(tuple(cyc.centers[rot:] + tuple(c + shift for c in cyc.centers[:rot])))
        try:
            bl = minimize_periodic(rolled, shift, r0, gate="cycle")
            rotated = validate_orbit(bl, r0)
        except BilliardError:
            continue
        if not rotated.coding_degenerate and rotated.word == target:
            return rotated
    return None


def _cyclic_dilute_orbit(
    cyc: Itinerary, shift: LatticePoint, r0: float, target: Word, pairs: int
) -> Optional[RealizedOrbit]:
    for pos in (len(cyc) // 2, 0, len(cyc) - 1):
        try:
            stretched = dilute(cyc, pairs, pos, r0)
        except BilliardError:
            continue
        orbit = _cyclic_word_orbit(stretched, shift, r0, target)
        if orbit is not None:
            return orbit
    return None


# ---------------------------------------------------------------------------
# commutator-direction ceiling


def winding_itinerary(k: int) -> Itinerary:
    """Cycle through the four obstacles neighboring the origin, k times."""
    ring = [
        LatticePoint(1, 0),
        LatticePoint(0, 1),
        LatticePoint(-1, 0),
        LatticePoint(0, -1),
    ]
    return Itinerary(tuple(ring * k))


def commutator_ceiling(k: int, r0: float) -> Tuple[float, float]:
    """Measured speed of the minimal k-fold winding orbit and its bound.

    The orbit reflects once per quadrant at the four gap midpoints around
    the origin obstacle, winding counterclockwise; its word per turn has
    length 4, so the measured ratio is 4k/T.  The bound is
    sqrt(2)/(2(1-2 r0)).
    """
    if k < 1:
        raise ConfigError("winding count k must be >= 1")
    check_radius(r0, upper=STRONG_RADIUS)
    it = winding_itinerary(k)
    bl = minimize_periodic(it, LatticePoint(0, 0), r0, gate="cycle")
    orbit = validate_orbit(bl, r0)
    if orbit.min_clearance < -1e-10:
        raise ConstructionError("winding orbit obstructed")
    ratio = 4.0 * k / orbit.duration
    bound = _SQRT2 / (2.0 * (1.0 - 2.0 * r0))
    return ratio, bound


def winding_length_oracle(
    N: int, max_coord: int = 2, budget: int = 2_000_000
) -> float:
    """Brute-force minimum length of a closed integer-cornered broken line
    that avoids the origin and winds around it at least N times.

    Depth-first search over corner sequences with branch-and-bound pruning
    on (current length + distance home); independent of the winding orbit
    construction.  The expected minimum is 4*sqrt(2)*N, attained only by
    the diamond through the four unit lattice points.
    """
    if N < 0:
        raise ConfigError("winding count must be nonnegative")
    if N == 0:
        return 0.0
    if N > 2 or max_coord > 3:
        raise ConfigError("oracle budget covers N <= 2, max_coord <= 3")

    pts = [
        (m, n)
        for m in range(-max_coord, max_coord + 1)
        for n in range(-max_coord, max_coord + 1)
        if (m, n) != (0, 0)
    ]
    target_angle = 2.0 * math.pi * N - 1e-9
    best = 4.0 * _SQRT2 * N + 1e-6  # seed: the k-fold diamond
    nodes = 0

    def edge(p, q):
        # length and swept angle; None if the edge passes through the origin
        cross = p[0] * q[1] - p[1] * q[0]
        dot = p[0] * q[0] + p[1] * q[1]
        if cross == 0 and dot < 0:
            return None
        return math.hypot(q[0] - p[0], q[1] - p[1]), math.atan2(cross, dot)

    # sharpest possible angle gain per unit length over the available edges
    # (computed from the point set itself, so the prune begs no question)
    max_rate = 0.0
    for p in pts:
        for q in pts:
            if q == p:
                continue
            e = edge(p, q)
            if e is not None and e[0] > 0.0:
                max_rate = max(max_rate, abs(e[1]) / e[0])

    def dfs(start, cur, length, angle):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise OracleIncompleteError("winding oracle search budget exceeded")
        for q in pts:
            if q == cur:
                continue
            e = edge(cur, q)
            if e is None:
                continue
            dl, da = e
            new_len = length + dl
            new_angle = angle + da
            home = math.hypot(start[0] - q[0], start[1] - q[1])
            need = max(home, (target_angle - new_angle) / max_rate)
            if new_len + need >= best:
                continue
            if q == start and new_angle >= target_angle:
                best = min(best, new_len)
                continue
            dfs(start, q, new_len, new_angle)

    for start in pts:
        dfs(start, start, 0.0, 0.0)
    return best

"""Event-driven billiard flow in the lifted plane.

The particle moves at unit speed among closed disks of radius ``r0``
centered at every integer point.  Collision search walks the ray through
the unit-cell grid and tests the disks sitting on the corners of each
visited cell; a disk can only be hit inside one of the four cells touching
its center, so the walk finds the true first hit and stops as soon as the
cell entry time passes the best candidate.

Crossings of integer lines are enumerated per straight chord in closed
form (no time stepping), which is what turns a trajectory into a word:
an x-crossing with positive velocity is the letter ``a``, with negative
velocity ``A``; y-crossings give ``b`` / ``B``.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ConfigError, DegenerateOrbitError, GeometryError
from .freegroup import Word
from .geometry import LatticePoint, Vec2, check_radius

_TANGENCY_TOL = 1e-12


@dataclass(frozen=True)
class PhaseState:
    position: Vec2
    velocity: Vec2

    def __post_init__(self) -> None:
        if abs(self.velocity.norm() - 1.0) > 1e-12:
            raise GeometryError("phase velocity must be a unit vector")


@dataclass(frozen=True)
class CollisionEvent:
    time: float
    obstacle: LatticePoint
    point: Vec2
    v_in: Vec2
    v_out: Vec2


@dataclass(frozen=True)
class CrossingEvent:
    time: float
    letter: str


@dataclass
class TrajectorySegment:
    initial: PhaseState
    r0: float
    duration: float
    collisions: List[CollisionEvent]
    crossings: List[CrossingEvent]
    final: PhaseState
    degenerate: bool = False
    degenerate_reason: Optional[str] = None
    seed: Optional[int] = None

    def word(self) -> Word:
        return word_of(self)

    def crossing_count(self) -> int:
        return len(self.crossings)

    def position_at(self, t: float) -> Vec2:
        """Position at time ``t`` reconstructed from the event log."""
        if t < 0.0 or t > self.duration + 1e-12:
            raise ConfigError(f"time {t} outside [0, {self.duration}]")
        pos, vel, t0 = self.initial.position, self.initial.velocity, 0.0
        for ev in self.collisions:
            if ev.time >= t:
                break
            pos, vel, t0 = ev.point, ev.v_out, ev.time
        return pos + vel * (t - t0)

    def straight_pieces(self) -> List[Tuple[float, float, Vec2, Vec2]]:
        """(t_start, t_end, start point, velocity) for each free flight."""
        pieces = []
        pos, vel, t0 = self.initial.position, self.initial.velocity, 0.0
        for ev in self.collisions:
            pieces.append((t0, ev.time, pos, vel))
            pos, vel, t0 = ev.point, ev.v_out, ev.time
        pieces.append((t0, self.duration, pos, vel))
        return pieces

    def crossing_gap_advances(self, axis: str) -> List[float]:
        """Integral of |dx/dt| (or |dy/dt|) between consecutive crossings
        of the given axis's integer lines.

        Single pass over the straight pieces, accumulating the integral at
        each crossing time.
        """
        if axis not in ("x", "y"):
            raise ConfigError("axis must be 'x' or 'y'")
        ax_letters = ("a", "A") if axis == "x" else ("b", "B")
        times = [c.time for c in self.crossings if c.letter in ax_letters]
        if len(times) < 2:
            return []
        comp = 0 if axis == "x" else 1
        integral_at: List[float] = []
        acc = 0.0
        i = 0
        for t0, t1, _pos, vel in self.straight_pieces():
            speed = abs(vel[comp])
            while i < len(times) and times[i] <= t1 + 1e-15:
                integral_at.append(acc + speed * (times[i] - t0))
                i += 1
            acc += speed * (t1 - t0)
        return [b - a for a, b in zip(integral_at, integral_at[1:])]

    def to_json(self) -> str:
        doc = {
            "format": "trajectory",
            "version": 1,
            "r0": self.r0,
            "seed": self.seed,
            "initial": _state_doc(self.initial),
            "duration": self.duration,
            "degenerate": self.degenerate,
            "degenerate_reason": self.degenerate_reason,
            "collisions": [
                {
                    "time": ev.time,
                    "obstacle": [ev.obstacle.m, ev.obstacle.n],
                    "point": [ev.point.x, ev.point.y],
                    "v_in": [ev.v_in.x, ev.v_in.y],
                    "v_out": [ev.v_out.x, ev.v_out.y],
                }
                for ev in self.collisions
            ],
            "crossings": [{"time": ev.time, "letter": ev.letter} for ev in self.crossings],
            "final": _state_doc(self.final),
            "word": str(self.word()) if not self.degenerate else None,
        }
        return json.dumps(doc, indent=1)

    @staticmethod
    def from_json(text: str) -> "TrajectorySegment":
        doc = json.loads(text)
        if doc.get("format") != "trajectory" or doc.get("version") != 1:
            raise ConfigError("not a v1 trajectory document")
        return TrajectorySegment(
            initial=_doc_state(doc["initial"]),
            r0=doc["r0"],
            duration=doc["duration"],
            collisions=[
                CollisionEvent(
                    time=c["time"],
                    obstacle=LatticePoint(*c["obstacle"]),
                    point=Vec2(*c["point"]),
                    v_in=Vec2(*c["v_in"]),
                    v_out=Vec2(*c["v_out"]),
                )
                for c in doc["collisions"]
            ],
            crossings=[CrossingEvent(c["time"], c["letter"]) for c in doc["crossings"]],
            final=_doc_state(doc["final"]),
            degenerate=doc.get("degenerate", False),
            degenerate_reason=doc.get("degenerate_reason"),
            seed=doc.get("seed"),
        )


def _state_doc(s: PhaseState) -> dict:
    return {
        "position": [s.position.x, s.position.y],
        "velocity": [s.velocity.x, s.velocity.y],
    }


def _doc_state(d: dict) -> PhaseState:
    return PhaseState(Vec2(*d["position"]), Vec2(*d["velocity"]))


def boundary_state(r0: float, angle: float, aim: float) -> PhaseState:
    """Initial condition on the boundary of the origin obstacle.

    ``angle`` places the point at ``r0 (cos, sin)``; ``aim`` is the
    outgoing direction, which must point out of the obstacle.
    """
    check_radius(r0)
    pos = Vec2(r0 * math.cos(angle), r0 * math.sin(angle))
    vel = Vec2(math.cos(aim), math.sin(aim))
    if vel.dot(pos.unit()) <= 1e-12:
        raise GeometryError("aim direction does not leave the obstacle")
    return PhaseState(pos, vel)


def random_state(r0: float, seed: int, margin: float = 1e-3) -> PhaseState:
    """Seeded random boundary state; the aim stays ``margin`` away from
    tangential so the first flight is well conditioned."""
    rng = random.Random(seed)
    angle = rng.uniform(0.0, 2.0 * math.pi)
    off = rng.uniform(-math.pi / 2 + margin, math.pi / 2 - margin)
    return boundary_state(r0, angle, angle + off)


def next_collision(
    state: PhaseState, t_max: float, r0: float
) -> Optional[Tuple[float, LatticePoint]]:
    """Earliest obstacle hit along the ray, or None before ``t_max``."""
    if t_max <= 0.0:
        raise ConfigError("t_max must be positive")
    check_radius(r0)
    hit = _march(
        state.position.x, state.position.y, state.velocity.x, state.velocity.y, r0, t_max
    )
    if hit is None:
        return None
    t, cm, cn = hit
    return t, LatticePoint(cm, cn)


def _march(
    x: float, y: float, vx: float, vy: float, r0: float, t_max: float
) -> Optional[Tuple[float, int, int]]:
    """Grid walk collision search on raw floats (hot path)."""
    r2 = r0 * r0
    best_t = math.inf
    best_m = best_n = 0
    ix = math.floor(x)
    iy = math.floor(y)
    if vx > 0.0:
        step_x, t_next_x, t_dx = 1, (ix + 1.0 - x) / vx, 1.0 / vx
    elif vx < 0.0:
        step_x, t_next_x, t_dx = -1, (ix - x) / vx, -1.0 / vx
    else:
        step_x, t_next_x, t_dx = 0, math.inf, math.inf
    if vy > 0.0:
        step_y, t_next_y, t_dy = 1, (iy + 1.0 - y) / vy, 1.0 / vy
    elif vy < 0.0:
        step_y, t_next_y, t_dy = -1, (iy - y) / vy, -1.0 / vy
    else:
        step_y, t_next_y, t_dy = 0, math.inf, math.inf

    t_entry = 0.0
    sqrt = math.sqrt
    while t_entry <= t_max and t_entry <= best_t:
        for cm, cn in ((ix, iy), (ix + 1, iy), (ix, iy + 1), (ix + 1, iy + 1)):
            rx = x - cm
            ry = y - cn
            b = rx * vx + ry * vy
            if b >= 0.0:
                continue
            disc = b * b - (rx * rx + ry * ry - r2)
            if disc <= _TANGENCY_TOL:
                continue
            t = (rx * rx + ry * ry - r2) / (-b + sqrt(disc))
            if 1e-12 < t < best_t:
                best_t = t
                best_m = cm
                best_n = cn
        if t_next_x < t_next_y:
            t_entry = t_next_x
            t_next_x += t_dx
            ix += step_x
        else:
            t_entry = t_next_y
            t_next_y += t_dy
            iy += step_y

    if best_t <= t_max:
        return best_t, best_m, best_n
    return None


def chord_crossings(
    x0: float, y0: float, x1: float, y1: float
) -> Tuple[List[Tuple[float, str]], bool]:
    """Integer-line crossings of one chord, counted on a half-open interval.

    A vertical line k is charged to the chord whose coordinate interval
    ``(start, end]`` contains it (exact float comparisons, no tolerance),
    so over consecutive chords every transversal passage is counted exactly
    once even when a collision point lands exactly on a line: sign-
    consistent motion yields one letter, a reversal at the line yields a
    cancelling pair or nothing.  Returns (list of (arc length from chord
    start, letter), degenerate flag); the flag marks a chord sliding along
    an integer line, whose coding is genuinely undefined.
    """
    out: List[Tuple[float, str]] = []
    dx = x1 - x0
    dy = y1 - y0
    length = math.hypot(dx, dy)
    sliding = (dx == 0.0 and x0 == round(x0)) or (dy == 0.0 and y0 == round(y0))
    if length == 0.0:
        return out, sliding
    if dx > 0.0:
        k = math.floor(x0) + 1.0
        while k <= x1:
            out.append(((k - x0) / dx * length, "a"))
            k += 1.0
    elif dx < 0.0:
        k = math.ceil(x0) - 1.0
        while k >= x1:
            out.append(((k - x0) / dx * length, "A"))
            k -= 1.0
    if dy > 0.0:
        k = math.floor(y0) + 1.0
        while k <= y1:
            out.append(((k - y0) / dy * length, "b"))
            k += 1.0
    elif dy < 0.0:
        k = math.ceil(y0) - 1.0
        while k >= y1:
            out.append(((k - y0) / dy * length, "B"))
            k -= 1.0
    out.sort()
    return out, sliding


def simulate(state: PhaseState, T: float, r0: float, seed: Optional[int] = None) -> TrajectorySegment:
    """Run the flow for time ``T`` and log collisions and crossings.

    Trivial axis-aligned period-2 bouncing (head-on between neighboring
    obstacles) is detected and flagged; the segment is still returned but
    its word is refused.
    """
    if T <= 0.0:
        raise ConfigError("T must be positive")
    check_radius(r0)
    x, y = state.position
    vx, vy = state.velocity
    _check_outside(x, y, r0)

    t = 0.0
    collisions: List[CollisionEvent] = []
    crossings: List[CrossingEvent] = []
    degenerate = False
    reason: Optional[str] = None
    head_on_streak = 0

    while True:
        rem = T - t
        if rem <= 0.0:
            break
        hit = _march(x, y, vx, vy, r0, rem)
        if hit is None:
            x1 = x + vx * rem
            y1 = y + vy * rem
            evs, bad = chord_crossings(x, y, x1, y1)
            if bad:
                degenerate, reason = True, reason or "line_coincidence"
            crossings.extend(CrossingEvent(t + s, ch) for s, ch in evs)
            x, y = x1, y1
            t = T
            break

        th, cm, cn = hit
        x1 = x + vx * th
        y1 = y + vy * th
        # snap the hit point onto the circle so radial drift cannot accumulate
        rx = x1 - cm
        ry = y1 - cn
        rn = math.hypot(rx, ry)
        x1 = cm + rx * r0 / rn
        y1 = cn + ry * r0 / rn

        evs, bad = chord_crossings(x, y, x1, y1)
        if bad:
            degenerate, reason = True, reason or "line_coincidence"
        crossings.extend(CrossingEvent(t + s, ch) for s, ch in evs)

        nx = (x1 - cm) / r0
        ny = (y1 - cn) / r0
        vn = vx * nx + vy * ny
        ox = vx - 2.0 * vn * nx
        oy = vy - 2.0 * vn * ny
        onorm = math.hypot(ox, oy)
        ox /= onorm
        oy /= onorm
        collisions.append(
            CollisionEvent(
                time=t + th,
                obstacle=LatticePoint(cm, cn),
                point=Vec2(x1, y1),
                v_in=Vec2(vx, vy),
                v_out=Vec2(ox, oy),
            )
        )

        # trivial period-2 bouncing: axis-aligned head-on reversal twice in a row
        if -vn > 1.0 - 1e-12 and (abs(vx) < 1e-12 or abs(vy) < 1e-12):
            head_on_streak += 1
            if head_on_streak >= 2 and not degenerate:
                degenerate, reason = True, "trivial_bouncing"
        else:
            head_on_streak = 0

        x, y, vx, vy = x1, y1, ox, oy
        t += th

    return TrajectorySegment(
        initial=state,
        r0=r0,
        duration=T,
        collisions=collisions,
        crossings=crossings,
        final=PhaseState(Vec2(x, y), Vec2(vx, vy)),
        degenerate=degenerate,
        degenerate_reason=reason,
        seed=seed,
    )


def _check_outside(x: float, y: float, r0: float) -> None:
    ix, iy = math.floor(x), math.floor(y)
    for cm, cn in ((ix, iy), (ix + 1, iy), (ix, iy + 1), (ix + 1, iy + 1)):
        if math.hypot(x - cm, y - cn) < r0 - 1e-10:
            raise GeometryError(f"initial position inside obstacle ({cm},{cn})")


def word_of(segment: TrajectorySegment) -> Word:
    """The trajectory's word: crossing letters in time order, reduced."""
    if segment.degenerate:
        raise DegenerateOrbitError(
            f"degenerate orbit ({segment.degenerate_reason}); word is undefined"
        )
    return Word("".join(c.letter for c in segment.crossings))


def config_hash(params: dict) -> str:
    """Short stable hash of a parameter dict, for output provenance."""
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]

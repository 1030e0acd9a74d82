"""Orbit synthesis by broken-line length minimization.

A symbolic itinerary is realized as a billiard orbit by minimizing the
total length of a polygonal chain whose corner points are constrained to
the itinerary's disks.  The objective is convex over the product of disks,
so cyclic exact coordinate descent reaches the global minimum; the
first-order optimality condition at a boundary corner is exactly the
specular reflection law, which is what certifies the minimizer as a
genuine orbit.

Corner updates run in parallel over an independent (red/black) index set
with numpy; each one-corner subproblem ``min |A-P| + |P-B|`` over a disk
is solved exactly: if the segment AB meets the disk the corner sits on the
chord's entry point, otherwise a safeguarded Newton iteration on the
boundary angle (with a grid+bisection rescue) finds the reflection point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .admissibility import (
    Itinerary,
    check_cycle,
    is_admissible,
    is_strongly_admissible,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateOrbitError,
    InadmissibleItineraryError,
)
from .flow import chord_crossings
from .freegroup import Word
from .geometry import LatticePoint, check_radius

_TWO_PI = 2.0 * math.pi
_GRID = np.linspace(0.0, _TWO_PI, 64, endpoint=False)


@dataclass
class BrokenLine:
    """Corner points of a realized chain, one per itinerary center.

    ``shift`` marks a periodic chain: the final leg runs from the last
    corner to ``points[0] + shift``.
    """

    itinerary: Itinerary
    r0: float
    points: np.ndarray  # (n, 2)
    shift: Optional[LatticePoint] = None
    sweeps: int = 0

    @property
    def periodic(self) -> bool:
        return self.shift is not None

    def chords(self) -> np.ndarray:
        """(m, 2, 2) array of chord endpoints in order."""
        pts = self.points
        if self.periodic:
            nxt = np.roll(pts, -1, axis=0).copy()
            nxt[-1] = pts[0] + np.array([self.shift.m, self.shift.n], dtype=float)
        else:
            nxt = pts[1:]
            pts = pts[:-1]
        return np.stack([pts, nxt], axis=1)

    @property
    def length(self) -> float:
        ch = self.chords()
        return float(np.linalg.norm(ch[:, 1] - ch[:, 0], axis=1).sum())


@dataclass
class RealizedOrbit:
    broken_line: BrokenLine
    duration: float
    word: Optional[Word]
    reflection_residual: float
    min_clearance: float
    coding_degenerate: bool = False

    def to_json(self) -> str:
        bl = self.broken_line
        doc = {
            "format": "orbit",
            "version": 1,
            "r0": bl.r0,
            "itinerary": [[c.m, c.n] for c in bl.itinerary.centers],
            "shift": [bl.shift.m, bl.shift.n] if bl.shift is not None else None,
            "corners": bl.points.tolist(),
            "length": self.duration,
            "word": str(self.word) if self.word is not None else None,
            "reflection_residual": self.reflection_residual,
            "min_clearance": self.min_clearance,
            "coding_degenerate": self.coding_degenerate,
            "sweeps": bl.sweeps,
        }
        return json.dumps(doc, indent=1)


# ---------------------------------------------------------------------------
# descent engine


def _bisector_init(centers: np.ndarray, shift: Optional[np.ndarray]) -> np.ndarray:
    """Corners on disk boundaries along the bisector of neighbor centers."""
    n = len(centers)
    theta = np.zeros(n)
    for j in range(n):
        if shift is None and j == 0:
            d = centers[1] - centers[0]
        elif shift is None and j == n - 1:
            d = centers[n - 2] - centers[n - 1]
        else:
            a = centers[(j - 1) % n] - (shift if j == 0 else 0.0) - centers[j]
            b = centers[(j + 1) % n] + (shift if j == n - 1 else 0.0) - centers[j]
            ua = a / np.linalg.norm(a)
            ub = b / np.linalg.norm(b)
            d = ua + ub
            if np.linalg.norm(d) < 1e-12:
                d = np.array([-ua[1], ua[0]])
        theta[j] = math.atan2(d[1], d[0])
    return theta


class _Descent:
    def __init__(
        self,
        centers: np.ndarray,
        r0: float,
        shift: Optional[np.ndarray],
        tol: float,
        max_sweeps: int,
        init_points: Optional[np.ndarray] = None,
    ):
        self.K = centers.astype(float)
        self.n = len(centers)
        self.r0 = r0
        self.shift = shift
        self.tol = tol
        self.max_sweeps = max_sweeps
        if init_points is None:
            self.theta = _bisector_init(self.K, shift)
            self.P = self.K + r0 * np.stack(
                [np.cos(self.theta), np.sin(self.theta)], axis=1
            )
        else:
            self.P = init_points.astype(float).copy()
            rel = self.P - self.K
            self.theta = np.arctan2(rel[:, 1], rel[:, 0])
        self.groups = self._make_groups()

    def _make_groups(self) -> List[np.ndarray]:
        n = self.n
        if self.shift is None:
            interior = np.arange(1, n - 1)
            return [interior[interior % 2 == 1], interior[interior % 2 == 0]]
        evens = np.arange(0, n, 2)
        odds = np.arange(1, n, 2)
        if n % 2 == 1:  # odd cycle: last even index is adjacent to 0
            return [evens[:-1], odds, np.array([n - 1])]
        return [evens, odds]

    def _neighbors(self, idx: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n, P = self.n, self.P
        if self.shift is None:
            return P[idx - 1], P[idx + 1]
        A = P[(idx - 1) % n].copy()
        B = P[(idx + 1) % n].copy()
        A[idx == 0] -= self.shift
        B[idx == n - 1] += self.shift
        return A, B

    def _update_endpoints(self) -> None:
        P, K, r0 = self.P, self.K, self.r0
        d = P[1] - K[0]
        P[0] = K[0] + r0 * d / np.linalg.norm(d)
        d = P[-2] - K[-1]
        P[-1] = K[-1] + r0 * d / np.linalg.norm(d)

    def _update_group(self, idx: np.ndarray) -> None:
        if len(idx) == 0:
            return
        r0 = self.r0
        A, B = self._neighbors(idx)
        K = self.K[idx]
        P_old = self.P[idx]
        f_old = np.linalg.norm(A - P_old, axis=1) + np.linalg.norm(B - P_old, axis=1)

        # chord through the disk: the corner sits on the entry point
        AB = B - A
        ab2 = np.einsum("ij,ij->i", AB, AB)
        t_foot = np.clip(np.einsum("ij,ij->i", K - A, AB) / np.maximum(ab2, 1e-300), 0.0, 1.0)
        foot = A + AB * t_foot[:, None]
        through = np.linalg.norm(foot - K, axis=1) <= r0

        theta = self.theta[idx].copy()
        P_new = np.empty_like(P_old)

        if np.any(through):
            ia = np.where(through)[0]
            a, d = A[ia], AB[ia]
            rel = a - K[ia]
            dd = np.einsum("ij,ij->i", d, d)
            bq = np.einsum("ij,ij->i", rel, d)
            cq = np.einsum("ij,ij->i", rel, rel) - r0 * r0
            disc = np.maximum(bq * bq - dd * cq, 0.0)
            t_in = (-bq - np.sqrt(disc)) / dd
            t_in = np.clip(t_in, 0.0, 1.0)
            pts = a + d * t_in[:, None]
            P_new[ia] = pts
            rel = pts - K[ia]
            theta[ia] = np.arctan2(rel[:, 1], rel[:, 0])

        ib = np.where(~through)[0]
        if len(ib) > 0:
            th, ok = _newton_angles(A[ib], B[ib], K[ib], r0, theta[ib])
            if not np.all(ok):
                bad = np.where(~ok)[0]
                th[bad] = _grid_angles(A[ib][bad], B[ib][bad], K[ib][bad], r0)
            theta[ib] = th
            P_new[ib] = K[ib] + r0 * np.stack([np.cos(th), np.sin(th)], axis=1)

        # monotone safeguard: never accept an increase
        f_new = np.linalg.norm(A - P_new, axis=1) + np.linalg.norm(B - P_new, axis=1)
        worse = f_new > f_old + 1e-14
        if np.any(worse):
            P_new[worse] = P_old[worse]
            theta[worse] = self.theta[idx][worse]
        self.P[idx] = P_new
        self.theta[idx] = theta

    def run(self) -> int:
        length = self._length()
        for sweep in range(1, self.max_sweeps + 1):
            before = self.P.copy()
            for g in self.groups:
                self._update_group(g)
            if self.shift is None:
                self._update_endpoints()
            new_length = self._length()
            moved = float(np.abs(self.P - before).max())
            # corner positions must settle, not just the total length: near
            # the optimum the length gap is quadratic in the corner error
            if length - new_length < self.tol and moved < 1e-10:
                return sweep
            length = new_length
        raise ConvergenceError(
            f"descent did not converge within {self.max_sweeps} sweeps"
        )

    def _length(self) -> float:
        P = self.P
        if self.shift is None:
            return float(np.linalg.norm(np.diff(P, axis=0), axis=1).sum())
        legs = np.linalg.norm(np.roll(P, -1, axis=0) - P, axis=1)
        legs[-1] = np.linalg.norm(P[0] + self.shift - P[-1])
        return float(legs.sum())


def _angle_derivatives(A, B, K, r0, theta):
    """g'(theta), g''(theta) for g = |A-P| + |P-B| on the circle."""
    ct, st = np.cos(theta), np.sin(theta)
    P = K + r0 * np.stack([ct, st], axis=1)
    tx, ty = -st, ct
    dA = A - P
    dB = B - P
    la = np.linalg.norm(dA, axis=1)
    lb = np.linalg.norm(dB, axis=1)
    la = np.maximum(la, 1e-300)
    lb = np.maximum(lb, 1e-300)
    uax, uay = dA[:, 0] / la, dA[:, 1] / la
    ubx, uby = dB[:, 0] / lb, dB[:, 1] / lb
    tua = tx * uax + ty * uay
    tub = tx * ubx + ty * uby
    g1 = -r0 * (tua + tub)
    nsum = ct * (uax + ubx) + st * (uay + uby)
    g2 = r0 * nsum + r0 * r0 * ((1.0 - tua * tua) / la + (1.0 - tub * tub) / lb)
    return g1, g2


def _f_on_circle(A, B, K, r0, theta):
    P = K + r0 * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return np.linalg.norm(A - P, axis=1) + np.linalg.norm(B - P, axis=1)


def _newton_angles(A, B, K, r0, theta0, steps: int = 8):
    """Damped Newton for the reflection angle; flags non-converged rows."""
    theta = theta0.copy()
    for _ in range(steps):
        g1, g2 = _angle_derivatives(A, B, K, r0, theta)
        step = -g1 / np.where(np.abs(g2) > 1e-300, g2, 1e-300)
        step = np.clip(step, -0.3, 0.3)
        bad_curv = g2 <= 0.0
        step = np.where(bad_curv, -np.sign(g1) * 0.1, step)
        theta = theta + step
        if np.all(np.abs(step) < 1e-13):
            break
    g1, g2 = _angle_derivatives(A, B, K, r0, theta)
    ok = (np.abs(g1) < 1e-11) & (g2 > 0.0)
    return theta, ok


def _grid_angles(A, B, K, r0):
    """Rescue path: coarse global grid then derivative bisection."""
    vals = _f_on_circle(
        A[:, None, :].repeat(len(_GRID), 1).reshape(-1, 2),
        B[:, None, :].repeat(len(_GRID), 1).reshape(-1, 2),
        K[:, None, :].repeat(len(_GRID), 1).reshape(-1, 2),
        r0,
        np.tile(_GRID, len(A)),
    ).reshape(len(A), len(_GRID))
    best = np.argmin(vals, axis=1)
    h = _TWO_PI / len(_GRID)
    lo = _GRID[best] - h
    hi = _GRID[best] + h
    for _ in range(55):
        mid = 0.5 * (lo + hi)
        g1, _ = _angle_derivatives(A, B, K, r0, mid)
        pos = g1 > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# public operations


def minimize_length(
    it: Itinerary,
    r0: float,
    tol: float = 1e-12,
    *,
    max_sweeps: int = 100_000,
    gate: str = "admissible",
    init_points: Optional[np.ndarray] = None,
) -> BrokenLine:
    """Globally minimal broken line through the itinerary's disks.

    ``gate`` selects the admissibility precondition: ``"admissible"``
    (conditions 1-3), ``"strong"``, or ``"relaxed"`` (no gate; the caller
    must certify the result with :func:`validate_orbit`).  ``init_points``
    warm-starts the descent, e.g. to polish a coarse solution.
    """
    check_radius(r0)
    if tol <= 0.0:
        raise ConfigError("tol must be positive")
    if len(it) < 2:
        raise ConfigError("itinerary needs at least two centers")
    _apply_gate(it, r0, gate, None)
    centers = np.array([[c.m, c.n] for c in it.centers], dtype=float)
    descent = _Descent(centers, r0, None, tol, max_sweeps, init_points)
    sweeps = descent.run()
    return BrokenLine(it, r0, descent.P, shift=None, sweeps=sweeps)


def minimize_periodic(
    it: Itinerary,
    shift: LatticePoint,
    r0: float,
    tol: float = 1e-12,
    *,
    max_sweeps: int = 100_000,
    gate: str = "cycle",
) -> BrokenLine:
    """Periodic variant: the chain wraps to ``points[0] + shift``.

    With ``shift == (0, 0)`` this produces a closed orbit of the lifted
    flow (one period of a periodic torus orbit in general).
    """
    check_radius(r0)
    if len(it) < 2:
        raise ConfigError("periodic itinerary needs at least two centers")
    if len(it) == 2 and shift == LatticePoint(0, 0):
        # back-and-forth bouncing between two obstacles: a flat, trivial
        # orbit whose coding is excluded
        raise DegenerateOrbitError("trivial two-obstacle bouncing cycle")
    _apply_gate(it, r0, gate, shift)
    centers = np.array([[c.m, c.n] for c in it.centers], dtype=float)
    sh = np.array([shift.m, shift.n], dtype=float)
    descent = _Descent(centers, r0, sh, tol, max_sweeps)
    sweeps = descent.run()
    return BrokenLine(it, r0, descent.P, shift=shift, sweeps=sweeps)


def _apply_gate(it: Itinerary, r0: float, gate: str, shift: Optional[LatticePoint]) -> None:
    if gate == "relaxed":
        return
    if gate == "admissible":
        rep = is_admissible(it, r0)
    elif gate == "strong":
        rep = is_strongly_admissible(it, r0)
    elif gate == "cycle":
        rep = check_cycle(it, shift if shift is not None else LatticePoint(0, 0), r0)
    else:
        raise ConfigError(f"unknown gate {gate!r}")
    if not rep:
        raise InadmissibleItineraryError(
            f"itinerary rejected (condition {rep.condition} at {rep.index}): {rep.detail}"
        )


def validate_orbit(bl: BrokenLine, r0: float) -> RealizedOrbit:
    """Certify a minimizer as a billiard orbit and extract its word.

    Checks, per interior corner: either the corner is a boundary reflection
    satisfying the reflection law (the difference of unit chord directions
    is parallel to the outward normal, pointing outward), or the two chords
    are collinear and the corner merely marks a pass-through.  Every open
    chord is checked for clearance against all nearby obstacles.
    """
    pts = bl.points
    n = len(pts)
    if bl.periodic:
        sh = np.array([bl.shift.m, bl.shift.n], dtype=float)
        prev = np.roll(pts, 1, axis=0).copy()
        prev[0] = pts[-1] - sh
        nxt = np.roll(pts, -1, axis=0).copy()
        nxt[-1] = pts[0] + sh
        interior = range(n)
    else:
        prev = np.empty_like(pts)
        nxt = np.empty_like(pts)
        prev[1:] = pts[:-1]
        nxt[:-1] = pts[1:]
        interior = range(1, n - 1)

    centers = np.array([[c.m, c.n] for c in bl.itinerary.centers], dtype=float)
    max_residual = 0.0
    for j in interior:
        u = pts[j] - prev[j]
        u = u / np.linalg.norm(u)
        w = nxt[j] - pts[j]
        w = w / np.linalg.norm(w)
        rad = pts[j] - centers[j]
        rho = np.linalg.norm(rad)
        bend = abs(u[0] * w[1] - u[1] * w[0])
        if rho < r0 - 1e-9:
            if bend > 1e-8:
                raise ConvergenceError(
                    f"corner {j} bends strictly inside its disk (bend {bend:.2e})"
                )
            continue
        nhat = rad / rho
        diff = w - u
        residual = abs(diff[0] * nhat[1] - diff[1] * nhat[0])
        if diff @ nhat < -1e-10:
            raise ConvergenceError(f"corner {j} reflects inward")
        max_residual = max(max_residual, residual)

    min_clear = _min_clearance(bl, r0)

    letters: List[str] = []
    degenerate = False
    for (p, q) in bl.chords():
        evs, bad = chord_crossings(float(p[0]), float(p[1]), float(q[0]), float(q[1]))
        degenerate = degenerate or bool(bad)
        letters.extend(ch for _, ch in evs)
    word = None if degenerate else Word("".join(letters))
    return RealizedOrbit(
        broken_line=bl,
        duration=float(bl.length),
        word=word,
        reflection_residual=float(max_residual),
        min_clearance=float(min_clear),
        coding_degenerate=degenerate,
    )


def _min_clearance(bl: BrokenLine, r0: float) -> float:
    """Signed clearance of every chord against every nearby non-endpoint disk."""
    cs = bl.itinerary.centers
    n = len(cs)
    best = math.inf
    chords = bl.chords()
    for i, (p, q) in enumerate(chords):
        end_a = cs[i]
        if bl.periodic and i == n - 1:
            end_b = cs[0] + bl.shift
        else:
            end_b = cs[i + 1]
        px, py = p
        qx, qy = q
        lo_m = math.floor(min(px, qx)) - 1
        hi_m = math.ceil(max(px, qx)) + 1
        dx = qx - px
        dy = qy - py
        L2 = dx * dx + dy * dy
        for m in range(lo_m, hi_m + 1):
            # y-window of the chord within this column, padded by 1+r0
            if abs(dx) > 1e-300:
                t0 = (m - 1 - px) / dx
                t1 = (m + 1 - px) / dx
                tlo, thi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
                if tlo > thi:
                    continue
                ys = (py + dy * tlo, py + dy * thi)
            else:
                ys = (py, qy)
            lo_n = math.floor(min(ys)) - 1
            hi_n = math.ceil(max(ys)) + 1
            for nn in range(lo_n, hi_n + 1):
                c = LatticePoint(m, nn)
                if c == end_a or c == end_b:
                    continue
                # distance from (m, nn) to the closed chord
                if L2 > 0.0:
                    t = ((m - px) * dx + (nn - py) * dy) / L2
                    t = min(1.0, max(0.0, t))
                    ex, ey = px + t * dx - m, py + t * dy - nn
                else:
                    ex, ey = px - m, py - nn
                d = math.hypot(ex, ey) - r0
                if d < best:
                    best = d
    return best


# ---------------------------------------------------------------------------
# independent oracle


def oracle_chain_length(
    it: Itinerary,
    r0: float,
    grid: int = 200,
    levels: int = 5,
) -> float:
    """Brute-force minimal length for chains with one or two interior corners.

    Free endpoint legs are exact (``|P - k| - r0``); the interior boundary
    angles are searched on a dense grid, refined ``levels`` times around
    the best cell.  Effective resolution matches a flat 1e4 x 1e4 grid by
    the third refinement.  Independent of the descent path.
    """
    check_radius(r0)
    cs = [c.as_vec() for c in it.centers]
    if len(cs) == 3:
        k0, k1, k2 = cs

        def val(theta):
            px = k1.x + r0 * np.cos(theta)
            py = k1.y + r0 * np.sin(theta)
            return (
                np.hypot(px - k0.x, py - k0.y)
                - r0
                + np.hypot(px - k2.x, py - k2.y)
                - r0
            )

        lo, hi = 0.0, _TWO_PI
        for _ in range(levels):
            th = np.linspace(lo, hi, grid)
            v = val(th)
            i = int(np.argmin(v))
            w = (hi - lo) / (grid - 1)
            lo, hi = th[i] - w, th[i] + w
        return float(np.min(val(np.linspace(lo, hi, grid))))
    if len(cs) == 4:
        k0, k1, k2, k3 = cs

        def val2(t1, t2):
            p1x = k1.x + r0 * np.cos(t1)
            p1y = k1.y + r0 * np.sin(t1)
            p2x = k2.x + r0 * np.cos(t2)
            p2y = k2.y + r0 * np.sin(t2)
            return (
                np.hypot(p1x - k0.x, p1y - k0.y)
                - r0
                + np.hypot(p2x - p1x, p2y - p1y)
                + np.hypot(p2x - k3.x, p2y - k3.y)
                - r0
            )

        lo1, hi1 = 0.0, _TWO_PI
        lo2, hi2 = 0.0, _TWO_PI
        for _ in range(levels):
            t1 = np.linspace(lo1, hi1, grid)
            t2 = np.linspace(lo2, hi2, grid)
            v = val2(t1[:, None], t2[None, :])
            i, j = np.unravel_index(int(np.argmin(v)), v.shape)
            w1 = (hi1 - lo1) / (grid - 1)
            w2 = (hi2 - lo2) / (grid - 1)
            lo1, hi1 = t1[i] - w1, t1[i] + w1
            lo2, hi2 = t2[j] - w2, t2[j] + w2
        t1 = np.linspace(lo1, hi1, grid)
        t2 = np.linspace(lo2, hi2, grid)
        return float(np.min(val2(t1[:, None], t2[None, :])))
    raise ConfigError("oracle supports chains of 3 or 4 centers")

"""Command-line front end.

Every subcommand writes machine-readable output (v1 CSV or JSON) whose
header embeds the schema version, a hash of the configuration, and the
seed, so identical invocations produce byte-identical files.  Sweeps fan
out over a process pool capped by the HB_THREADS environment variable;
results are always written in parameter order.

Exit codes: 0 ok, 2 configuration error, 3 regime violation, 4 numeric
convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Sequence

from . import entropy as entropy_mod
from . import rotation as rotation_mod
from .admissibility import Itinerary
from .compiler import compile_detailed, enumerate_codes
from .errors import (
    BilliardError,
    ConfigError,
    ConstructionError,
    ConvergenceError,
    DegenerateOrbitError,
    GeometryError,
    InadmissibleItineraryError,
    InsertionError,
    ModelError,
    OracleIncompleteError,
)
from .flow import (
    TrajectorySegment,
    boundary_state,
    config_hash,
    random_state,
    simulate,
    word_of,
)
from .freegroup import EndPrefix, Word, ball_count
from .geometry import LatticePoint
from .realize import minimize_length, minimize_periodic, validate_orbit

SCHEMA_VERSION = 1

_SQRT2 = math.sqrt(2.0)


def _workers() -> int:
    cap = os.environ.get("HB_THREADS")
    if cap is None:
        return 1
    try:
        n = int(cap)
    except ValueError:
        raise ConfigError(f"HB_THREADS must be an integer, got {cap!r}")
    return max(1, n)


def parallel_map(fn, items: Sequence, workers: Optional[int] = None) -> List:
    """Order-preserving map over a worker pool (serial when workers <= 1)."""
    if workers is None:
        workers = _workers()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _write_csv(path: str, command: str, params: dict, header: List[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    seed = params.get("seed", "-")
    buf.write(
        f"# torusbilliard v{SCHEMA_VERSION} {command} config={config_hash(params)} seed={seed}\n"
    )
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    data = buf.getvalue()
    if path == "-":
        sys.stdout.write(data)
    else:
        with open(path, "w") as fh:
            fh.write(data)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_text(path: str, data: str) -> None:
    if path == "-" or path is None:
        sys.stdout.write(data if data.endswith("\n") else data + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(data if data.endswith("\n") else data + "\n")


def _write_json(path: str, json_text: str, params: dict) -> None:
    """Embed the configuration hash alongside the document's own version."""
    import json as _json

    doc = _json.loads(json_text)
    doc["config"] = config_hash(params)
    _write_text(path, _json.dumps(doc, indent=1))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_simulate(args) -> int:
    if args.seed is not None:
        state = random_state(args.r0, args.seed)
    elif args.angle is not None and args.direction is not None:
        state = boundary_state(args.r0, args.angle, args.direction)
    else:
        raise ConfigError("simulate needs either --seed or --angle and --direction")
    seg = simulate(state, args.T, args.r0, seed=args.seed)
    params = {"r0": args.r0, "T": args.T, "seed": args.seed,
              "angle": args.angle, "direction": args.direction}
    _write_json(args.out, seg.to_json(), params)
    return 0


def _cmd_word(args) -> int:
    with open(args.input) as fh:
        seg = TrajectorySegment.from_json(fh.read())
    _write_text(args.out, str(word_of(seg)))
    return 0


def _cmd_compile(args) -> int:
    cw = compile_detailed(Word(args.word), args.r0)
    _write_text(args.out, cw.itinerary.to_text())
    return 0


def _cmd_realize(args) -> int:
    it = Itinerary.from_text(args.itinerary)
    if args.shift is not None:
        m, n = (int(t) for t in args.shift.split(","))
        gate = args.gate or "cycle"
        bl = minimize_periodic(it, LatticePoint(m, n), args.r0, gate=gate)
    else:
        gate = args.gate or "admissible"
        bl = minimize_length(it, args.r0, gate=gate)
    orbit = validate_orbit(bl, args.r0)
    params = {"itinerary": args.itinerary, "r0": args.r0,
              "shift": args.shift, "gate": gate}
    _write_json(args.out, orbit.to_json(), params)
    return 0


def _cmd_corridor(args) -> int:
    rows = []
    for orb in rotation_mod.corridor_family(args.n_max, args.r0):
        rows.append(
            (
                orb.n,
                orb.period_formula,
                orb.period_realized,
                orb.period_simulated,
                len(orb.word),
                orb.ratio,
            )
        )
    params = {"r0": args.r0, "n_max": args.n_max}
    _write_csv(
        args.out,
        "corridor",
        params,
        ["n", "T_formula", "T_realized", "T_simulated", "word_len", "ratio"],
        rows,
    )
    return 0


def _cmd_rotate(args) -> int:
    if args.mode == "series":
        state = random_state(args.r0, args.seed)
        grid = [args.T * (i + 1) / args.points for i in range(args.points)]
        ests = rotation_mod.rotation_series(state, grid, args.r0)
        rows = [(e.T, len(e.word), e.speed, e.prefix_depth) for e in ests]
        params = {"r0": args.r0, "T": args.T, "points": args.points, "seed": args.seed}
        _write_csv(
            args.out,
            "rotate-series",
            params,
            ["T", "word_len", "speed", "prefix_depth"],
            rows,
        )
        return 0
    # achieve mode
    direction = EndPrefix(Word(""), Word(args.direction))
    rows = []
    for target in args.targets:
        orbits = rotation_mod.achievable_point(
            target, direction, args.depth, args.r0, speed_tol=args.tol
        )
        final = orbits[-1]
        w = final.word
        rows.append(
            (
                target,
                args.direction,
                args.depth,
                len(w) / final.duration,
                final.duration,
                len(w),
                len(orbits),
            )
        )
    params = {
        "r0": args.r0,
        "direction": args.direction,
        "depth": args.depth,
        "targets": args.targets,
        "tol": args.tol,
    }
    _write_csv(
        args.out,
        "rotate-achieve",
        params,
        ["target", "direction", "depth", "speed", "T", "word_len", "steps"],
        rows,
    )
    return 0


def _cmd_commutator(args) -> int:
    rows = []
    for r0 in args.r0_list:
        ratio, bound = rotation_mod.commutator_ceiling(args.k, r0)
        rows.append((r0, args.k, 4.0 * args.k / ratio, ratio, bound))
    params = {"r0_list": args.r0_list, "k": args.k}
    _write_csv(
        args.out,
        "commutator",
        params,
        ["r0", "k", "T", "ratio", "bound"],
        rows,
    )
    return 0


def _cmd_entropy(args) -> int:
    if args.mode == "visits":
        rows = parallel_map(_VisitTask(args.r0, args.T, args.eps0), range(args.seeds))
        params = {"r0": args.r0, "T": args.T, "eps0": args.eps0, "seeds": args.seeds}
        _write_csv(
            args.out,
            "entropy-visits",
            params,
            ["seed", "T", "eps0", "visits", "bound", "slack", "bulk_visits", "ok"],
            rows,
        )
        return 0
    if args.mode == "growth":
        rows = []
        for row in entropy_mod.word_growth(args.lmax, args.r0):
            rows.append(
                (
                    row.length,
                    row.word_count,
                    row.min_T,
                    row.max_T,
                    row.max_passages,
                    row.duration_bound,
                )
            )
        params = {"r0": args.r0, "lmax": args.lmax}
        _write_csv(
            args.out,
            "entropy-growth",
            params,
            ["L", "word_count", "min_T", "max_T", "max_passages", "bound"],
            rows,
        )
        return 0
    # constants
    rows = [
        ("htop_upper_limit", entropy_mod.htop_upper_limit()),
        ("htop_upper_eps0", entropy_mod.htop_upper_constant(args.eps0)),
        ("growth_exponent", entropy_mod.growth_exponent()),
        ("lower_bound", math.log(3.0) / _SQRT2),
    ]
    params = {"eps0": args.eps0}
    _write_csv(args.out, "entropy-constants", params, ["name", "value"], rows)
    return 0


class _VisitTask:
    """Picklable per-seed task for the visit-bound sweep."""

    def __init__(self, r0: float, T: float, eps0: float):
        self.r0 = r0
        self.T = T
        self.eps0 = eps0

    def __call__(self, seed: int):
        seg = simulate(random_state(self.r0, seed), self.T, self.r0, seed=seed)
        vs = entropy_mod.visit_bound_check(seg, self.eps0)
        return (
            seed,
            self.T,
            self.eps0,
            vs.band_visits,
            vs.band_bound,
            vs.slack,
            vs.bulk_visits,
            int(vs.ok),
        )


def _cmd_check(args) -> int:
    """Quick invariant sweep across the modules; exits nonzero on failure."""
    failures = []

    def check(name: str, ok: bool) -> None:
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    check("ball counts 1,5,17,53", [ball_count(n) for n in range(4)] == [1, 5, 17, 53])
    check("block codes 6/8/8", (enumerate_codes(0), enumerate_codes(1), enumerate_codes(5)) == (6, 8, 8))

    from .geometry import Disk, hull_intersects_disk

    d = lambda c, r: Disk(LatticePoint(*c), r)
    check(
        "hull threshold brackets sqrt(5)/10",
        not hull_intersects_disk(d((-1, -1), 0.22), d((0, 1), 0.22), d((0, 0), 0.22))
        and hull_intersects_disk(d((-1, -1), 0.23), d((0, 1), 0.23), d((0, 0), 0.23)),
    )

    orb = rotation_mod.corridor_orbit(1, 0.2)
    check(
        "corridor period n=1",
        abs(orb.period_realized - orb.period_formula) < 1e-9 * orb.period_formula,
    )
    check("corridor word length", len(orb.word) == 6)

    seg = simulate(random_state(0.25, 7), 50.0, 0.25)
    check("crossing bound", seg.crossing_count() <= _SQRT2 * 50.0 + 2.0)
    vs = entropy_mod.visit_bound_check(seg, 0.05)
    check("visit bound", vs.ok)

    cw = compile_detailed("abAB", 0.2)
    check("commutator round trip", str(cw.orbit.word) == "abAB")

    check(
        "entropy constant",
        abs(entropy_mod.htop_upper_limit() - 5.8815488) < 1e-6,
    )

    if failures:
        print(f"{len(failures)} check(s) failed")
        return 4
    print("all checks passed")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="torusbilliard",
        description="Billiard on the 2-torus with one round obstacle: "
        "simulation, word coding, orbit synthesis, rotation and entropy experiments.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="run the flow from a boundary state")
    ps.add_argument("--r0", type=float, required=True)
    ps.add_argument("--T", type=float, required=True)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--angle", type=float, default=None, help="boundary point angle")
    ps.add_argument("--direction", type=float, default=None, help="outgoing direction angle")
    ps.add_argument("--out", default="-")
    ps.set_defaults(fn=_cmd_simulate)

    pw = sub.add_parser("word", help="word of a stored trajectory")
    pw.add_argument("--in", dest="input", required=True)
    pw.add_argument("--out", default="-")
    pw.set_defaults(fn=_cmd_word)

    pc = sub.add_parser("compile", help="word to admissible itinerary")
    pc.add_argument("--word", required=True)
    pc.add_argument("--r0", type=float, required=True)
    pc.add_argument("--out", default="-")
    pc.set_defaults(fn=_cmd_compile)

    pr = sub.add_parser("realize", help="itinerary to billiard orbit")
    pr.add_argument("--itinerary", required=True, help="e.g. '0,0 1,0 1,1'")
    pr.add_argument("--r0", type=float, required=True)
    pr.add_argument("--shift", default=None, help="periodic wrap 'm,n'")
    pr.add_argument("--gate", default=None)
    pr.add_argument("--out", default="-")
    pr.set_defaults(fn=_cmd_realize)

    pco = sub.add_parser("corridor", help="diagonal corridor family table")
    pco.add_argument("--r0", type=float, required=True)
    pco.add_argument("--n-max", dest="n_max", type=int, required=True)
    pco.add_argument("--out", default="-")
    pco.set_defaults(fn=_cmd_corridor)

    pro = sub.add_parser("rotate", help="rotation estimates")
    pro.add_argument("--mode", choices=["series", "achieve"], required=True)
    pro.add_argument("--r0", type=float, required=True)
    pro.add_argument("--T", type=float, default=200.0)
    pro.add_argument("--points", type=int, default=20)
    pro.add_argument("--seed", type=int, default=0)
    pro.add_argument("--direction", default="ab", help="repeating block, e.g. 'abAB'")
    pro.add_argument("--depth", type=int, default=100)
    pro.add_argument("--targets", type=float, nargs="+", default=[0.5])
    pro.add_argument("--tol", type=float, default=0.05)
    pro.add_argument("--out", default="-")
    pro.set_defaults(fn=_cmd_rotate)

    pcm = sub.add_parser("commutator", help="winding-orbit speed ceiling")
    pcm.add_argument("--r0-list", dest="r0_list", type=float, nargs="+", required=True)
    pcm.add_argument("--k", type=int, default=50)
    pcm.add_argument("--out", default="-")
    pcm.set_defaults(fn=_cmd_commutator)

    pe = sub.add_parser("entropy", help="entropy bounds and statistics")
    pe.add_argument("--mode", choices=["visits", "growth", "constants"], required=True)
    pe.add_argument("--r0", type=float, default=0.25)
    pe.add_argument("--T", type=float, default=100.0)
    pe.add_argument("--eps0", type=float, default=0.05)
    pe.add_argument("--seeds", type=int, default=100)
    pe.add_argument("--lmax", type=int, default=4)
    pe.add_argument("--out", default="-")
    pe.set_defaults(fn=_cmd_entropy)

    pk = sub.add_parser("check", help="run the quick invariant suite")
    pk.set_defaults(fn=_cmd_check)

    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (ModelError, InadmissibleItineraryError, GeometryError, DegenerateOrbitError) as e:
        print(f"regime violation: {e}", file=sys.stderr)
        return 3
    except (ConvergenceError, ConstructionError, InsertionError, OracleIncompleteError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 4
    except BilliardError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

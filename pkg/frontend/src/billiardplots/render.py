"""Render torusbilliard v1 CSV files into PNG figures.

Four figure kinds, one per experiment family:

* ``corridor``:   speed ratio against the corridor index, with the sqrt(2)
                  asymptote;
* ``achieve``:    achieved against target escape speed, with the sqrt(2)/2
                  ball boundary;
* ``commutator``: winding-orbit speed against the obstacle radius, with
                  the sqrt(2)/(2(1-2 r0)) ceiling curve and the sqrt(2)/2
                  small-radius limit;
* ``growth``:     log word count against the orbit-length budget, with the
                  ln(3)/sqrt(2) slope guide and the 6 sqrt(2) ln 2 upper
                  entropy constant.

Inputs must carry the v1 header line; the expected columns are validated
before any drawing, and an unparseable or empty file aborts without
producing output.  Axis limits are derived from the data by fixed rules,
so identical inputs render identical figures.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

SQRT2 = math.sqrt(2.0)

#: Reference constants drawn as guide lines, to seven significant digits.
GUIDES = {
    "sqrt2": 1.414214,
    "half_sqrt2": 0.7071068,
    "growth_rate": 0.7768362,  # ln(3)/sqrt(2)
    "entropy_upper": 5.881549,  # 6 sqrt(2) ln 2
}

_REQUIRED = {
    "corridor": ["n", "T_formula", "word_len", "ratio"],
    "achieve": ["target", "speed", "T", "word_len"],
    "commutator": ["r0", "k", "ratio", "bound"],
    "growth": ["L", "word_count", "max_T", "bound"],
}

KINDS = tuple(_REQUIRED)


class SchemaError(Exception):
    """Input file does not satisfy the v1 CSV contract."""


@dataclass(frozen=True)
class PlotSpec:
    input_path: str
    kind: str
    output_path: str
    reference_curves: bool = True

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")


@dataclass
class Table:
    header_line: str
    columns: Dict[str, List[float]]

    def __len__(self) -> int:
        return len(next(iter(self.columns.values())))


def load_table(path: str, kind: str) -> Table:
    """Read a v1 CSV and validate the columns the plot kind needs."""
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("# torusbilliard v1 "):
            raise SchemaError(f"{path}: missing 'torusbilliard v1' header line")
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        for col in _REQUIRED[kind]:
            if col not in names:
                raise SchemaError(f"{path}: missing column {col!r} for kind {kind!r}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    columns: Dict[str, List[float]] = {c: [] for c in _REQUIRED[kind]}
    for row in rows:
        for c in columns:
            try:
                columns[c].append(float(row[c]))
            except (TypeError, ValueError):
                raise SchemaError(f"{path}: non-numeric value in column {c!r}")
    return Table(first.strip(), columns)


def _padded_limits(values: Sequence[float], *extra: float) -> tuple:
    lo = min(list(values) + list(extra))
    hi = max(list(values) + list(extra))
    span = hi - lo or 1.0
    return lo - 0.08 * span, hi + 0.08 * span


def render(spec: PlotSpec) -> str:
    """Draw one figure; returns the output path."""
    table = load_table(spec.input_path, spec.kind)
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=120)
    draw = {
        "corridor": _draw_corridor,
        "achieve": _draw_achieve,
        "commutator": _draw_commutator,
        "growth": _draw_growth,
    }[spec.kind]
    draw(ax, table, spec.reference_curves)
    ax.set_title(f"{spec.kind} ({table.header_line.split('config=')[-1]})", fontsize=9)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.output_path, metadata={"Software": None})
    plt.close(fig)
    return spec.output_path


def _draw_corridor(ax, table: Table, refs: bool) -> None:
    n = table.columns["n"]
    ratio = table.columns["ratio"]
    ax.plot(n, ratio, "o-", ms=4, label="(4n+2)/T_n")
    if refs:
        ax.axhline(GUIDES["sqrt2"], ls="--", c="tab:red", lw=1,
                   label=f"sqrt(2) = {GUIDES['sqrt2']}")
    ax.set_xlabel("corridor index n")
    ax.set_ylabel("word length / period")
    ax.set_xlim(*_padded_limits(n))
    ax.set_ylim(*_padded_limits(ratio, GUIDES["sqrt2"]))


def _draw_achieve(ax, table: Table, refs: bool) -> None:
    target = table.columns["target"]
    speed = table.columns["speed"]
    ax.scatter(target, speed, s=24, label="achieved")
    lims = _padded_limits(target + speed, 0.0, GUIDES["half_sqrt2"])
    ax.plot(lims, lims, ls=":", c="gray", lw=1, label="target = achieved")
    if refs:
        ax.axhline(GUIDES["half_sqrt2"], ls="--", c="tab:red", lw=1,
                   label=f"ball radius sqrt(2)/2 = {GUIDES['half_sqrt2']}")
    ax.set_xlabel("target speed")
    ax.set_ylabel("achieved speed")
    ax.set_xlim(*lims)
    ax.set_ylim(*lims)


def _draw_commutator(ax, table: Table, refs: bool) -> None:
    r0 = table.columns["r0"]
    ratio = table.columns["ratio"]
    ax.plot(r0, ratio, "o", label="measured 4k/T")
    if refs:
        grid = [min(r0) + (max(r0) - min(r0)) * i / 200 for i in range(201)]
        ax.plot(
            grid,
            [SQRT2 / (2.0 * (1.0 - 2.0 * r)) for r in grid],
            ls="--",
            c="tab:orange",
            lw=1,
            label="sqrt(2)/(2(1-2r0))",
        )
        ax.axhline(GUIDES["half_sqrt2"], ls="--", c="tab:red", lw=1,
                   label=f"sqrt(2)/2 = {GUIDES['half_sqrt2']}")
    ax.set_xlabel("obstacle radius r0")
    ax.set_ylabel("winding speed")
    ax.set_xlim(*_padded_limits(r0))
    ax.set_ylim(*_padded_limits(ratio, GUIDES["half_sqrt2"]))


def _draw_growth(ax, table: Table, refs: bool) -> None:
    budgets = table.columns["bound"]
    counts = table.columns["word_count"]
    # cumulative homotopy types reachable within each budget
    cum = []
    acc = 1.0
    for c in counts:
        acc += c
        cum.append(math.log(acc))
    ax.plot(budgets, cum, "o-", ms=4, label="ln(types within budget)")
    if refs:
        x0, y0 = budgets[0], cum[0]
        ax.plot(
            [x0, budgets[-1]],
            [y0, y0 + GUIDES["growth_rate"] * (budgets[-1] - x0)],
            ls="--",
            c="tab:red",
            lw=1,
            label=f"slope ln(3)/sqrt(2) = {GUIDES['growth_rate']}",
        )
        ax.axhline(GUIDES["entropy_upper"], ls=":", c="tab:purple", lw=1,
                   label=f"upper rate 6 sqrt(2) ln 2 = {GUIDES['entropy_upper']}")
    ax.set_xlabel("orbit length budget")
    ax.set_ylabel("ln(word count)")
    ax.set_xlim(*_padded_limits(budgets))
    ax.set_ylim(*_padded_limits(cum, GUIDES["entropy_upper"]))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="billiardplots",
        description="Render torusbilliard v1 CSV outputs into figures.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    pr = sub.add_parser("render", help="render one CSV into a PNG")
    pr.add_argument("--kind", choices=KINDS, required=True)
    pr.add_argument("--in", dest="input", required=True)
    pr.add_argument("--out", required=True)
    pr.add_argument("--no-refs", action="store_true", help="omit guide lines")
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        spec = PlotSpec(args.input, args.kind, args.out, not args.no_refs)
        out = render(spec)
    except (SchemaError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Comparison and gap figures rendered from beta sweep CSVs.

Input is the CSV that `badscience sweep` writes:

    construction,n,method,beta,stderr,samples,seed,beta_expansion,jensen_upper

Nothing numerical is recomputed here: every plotted quantity (beta values,
standard errors, reference curves) is read straight from the file, so the
sweep output stays the single source of truth. Rendering is deterministic
for a fixed CSV — Agg backend, fixed style, no timestamps or software tags
embedded in the image — and repeated renders are byte-identical.
"""
from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.figure import Figure
from matplotlib.ticker import ScalarFormatter

DEFAULT_CURVES: Tuple[str, ...] = ("beta_expansion", "jensen_upper")

# columns every sweep CSV must carry before we even look at curve columns
_BASE_COLUMNS = ("construction", "n", "method", "beta", "stderr")

_FIGSIZE = (6.4, 4.2)
_DPI = 100


class SweepFormatError(Exception):
    """The CSV does not match the sweep contract (missing or garbled data)."""


@dataclass(frozen=True)
class FigureSpec:
    """What to read, where to draw it, and which reference columns to use."""

    input_csv: Path
    output_image: Path
    curves: Sequence[str] = DEFAULT_CURVES
    log_x: bool = False


@dataclass
class _Series:
    name: str
    ns: List[int] = field(default_factory=list)
    betas: List[float] = field(default_factory=list)
    errs: List[float] = field(default_factory=list)  # 2*stderr for MC rows, 0 for exact


def _read_rows(spec: FigureSpec) -> Tuple[List[dict], List[str]]:
    """Parse the sweep CSV, checking the header carries the base columns
    and every curve column the FigureSpec requests.

    Returns (rows, header). Raises SweepFormatError for contract violations
    and lets OSError propagate for I/O failures.
    """
    with open(spec.input_csv, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise SweepFormatError(f"{spec.input_csv}: empty file, no header")
        required = list(_BASE_COLUMNS) + [c for c in spec.curves if c not in _BASE_COLUMNS]
        missing = [c for c in required if c not in header]
        if missing:
            raise SweepFormatError(
                f"{spec.input_csv}: missing columns {', '.join(missing)}"
            )
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            try:
                row = {
                    "construction": raw["construction"],
                    "n": int(raw["n"]),
                    "method": raw["method"],
                    "beta": float(raw["beta"]),
                    "stderr": float(raw["stderr"]),
                }
                for c in spec.curves:
                    row[c] = float(raw[c])
            except (TypeError, ValueError) as exc:
                raise SweepFormatError(f"{spec.input_csv}:{lineno}: {exc}") from exc
            rows.append(row)
    return rows, list(header)


def _group(rows: List[dict]) -> List[_Series]:
    """Group rows into per-construction series, first-appearance order,
    each series sorted by n."""
    order: Dict[str, _Series] = {}
    for row in rows:
        s = order.setdefault(row["construction"], _Series(row["construction"]))
        s.ns.append(row["n"])
        s.betas.append(row["beta"])
        s.errs.append(2.0 * row["stderr"] if row["method"] == "monte_carlo" else 0.0)
    series = list(order.values())
    for s in series:
        idx = np.argsort(np.asarray(s.ns), kind="stable")
        s.ns = [s.ns[i] for i in idx]
        s.betas = [s.betas[i] for i in idx]
        s.errs = [s.errs[i] for i in idx]
    return series


def _new_axes(spec: FigureSpec, ylabel: str):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    if spec.log_x:
        ax.set_xscale("log", base=2)
        ax.xaxis.set_major_formatter(ScalarFormatter())
    return fig, ax


def build_comparison(spec: FigureSpec) -> Tuple[Figure, dict]:
    """Build the beta-versus-n figure: one series per construction (error
    bars of 2*stderr on Monte Carlo points) plus one dashed line per
    requested reference column.

    Returns (figure, meta); meta carries the plotted numbers for tests.
    An empty-body CSV yields an axes-only figure and a warning on stderr.
    """
    rows, _ = _read_rows(spec)
    fig, ax = _new_axes(spec, ylabel="beta")
    meta = {"series": [], "curves": [], "empty": not rows}
    if not rows:
        print(
            f"warning: {spec.input_csv} has a header but no data rows; "
            "writing an axes-only figure",
            file=sys.stderr,
        )
        return fig, meta

    for s in _group(rows):
        ax.errorbar(
            s.ns, s.betas, yerr=s.errs, marker="o", capsize=3, label=s.name
        )
        meta["series"].append(
            {"name": s.name, "ns": list(s.ns), "betas": list(s.betas), "errs": list(s.errs)}
        )

    # reference columns are constant across constructions at a given n;
    # keep the first value seen for each n
    grid: Dict[int, dict] = {}
    for row in rows:
        grid.setdefault(row["n"], row)
    ns = sorted(grid)
    for col in spec.curves:
        vals = [grid[n][col] for n in ns]
        ax.plot(ns, vals, linestyle="--", label=col)
        meta["curves"].append({"name": col, "ns": ns, "values": vals})

    ax.legend()
    if ns:
        ax.set_xticks(ns)
    return fig, meta


def build_gap(spec: FigureSpec) -> Tuple[Figure, dict]:
    """Build the construction-gap figure: beta(first) - beta(second) at the
    shared n values, with a +/- 2*combined-stderr band and a dashed zero
    line.

    The two series are the first two distinct constructions in file order.
    A CSV listing a single construction twice (every n appearing on exactly
    two rows) is treated as first-pass versus second-pass, which makes the
    gap identically zero for identical passes. Anything else — one
    construction with single rows, three or more constructions, or no shared
    n — violates the contract.
    """
    rows, _ = _read_rows(spec)
    series = _group(rows)
    if len(series) == 2:
        a, b = series
    elif len(series) == 1 and all(
        c == 2 for c in np.unique(series[0].ns, return_counts=True)[1]
    ) and series[0].ns:
        dup = series[0]
        a = _Series(dup.name, dup.ns[0::2], dup.betas[0::2], dup.errs[0::2])
        b = _Series(dup.name, dup.ns[1::2], dup.betas[1::2], dup.errs[1::2])
    else:
        raise SweepFormatError(
            f"{spec.input_csv}: gap figure needs exactly two constructions, "
            f"found {len(series)} ({', '.join(s.name for s in series)})"
        )

    amap = {n: i for i, n in enumerate(a.ns)}
    bmap = {n: i for i, n in enumerate(b.ns)}
    shared = sorted(set(amap) & set(bmap))
    if not shared:
        raise SweepFormatError(
            f"{spec.input_csv}: constructions {a.name} and {b.name} share no n values"
        )

    gap = np.array([a.betas[amap[n]] - b.betas[bmap[n]] for n in shared])
    # errs already hold 2*stderr per point; combine in quadrature
    band = np.array(
        [math.hypot(a.errs[amap[n]], b.errs[bmap[n]]) for n in shared]
    )

    fig, ax = _new_axes(spec, ylabel=f"beta({a.name}) - beta({b.name})")
    ax.axhline(0.0, linestyle="--", linewidth=1.0, color="0.3")
    ax.fill_between(shared, gap - band, gap + band, alpha=0.25, label="+/- 2 combined stderr")
    ax.plot(shared, gap, marker="o", label=f"{a.name} - {b.name}")
    ax.legend()
    ax.set_xticks(shared)
    meta = {
        "names": (a.name, b.name),
        "ns": shared,
        "gap": gap.tolist(),
        "band": band.tolist(),
    }
    return fig, meta


def _save(fig: Figure, path: Path) -> None:
    if Path(path).suffix.lower() == ".png":
        # drop the "Software: Matplotlib ..." tag so reruns are byte-identical
        fig.savefig(path, dpi=_DPI, metadata={"Software": None})
    else:
        fig.savefig(path, dpi=_DPI)


def _render(builder, spec: FigureSpec) -> int:
    try:
        fig, _ = builder(spec)
    except SweepFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        _save(fig, spec.output_image)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        plt.close(fig)
    return 0


def render_comparison(spec: FigureSpec) -> int:
    """Render the comparison figure; returns a process exit code (0/1/2)."""
    return _render(build_comparison, spec)


def render_gap(spec: FigureSpec) -> int:
    """Render the gap figure; returns a process exit code (0/1/2)."""
    return _render(build_gap, spec)

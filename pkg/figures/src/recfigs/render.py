"""Render one figure per job from a recovery CSV.

Four kinds: decay (log-scale squared power function per selection step),
scatter (selected sites, optional red cross at the evaluation point),
heatmap (a grid column such as p2 or lebesgue), and rates (log-log error
vs fill distance with a dotted theoretical-rate guide anchored at the last
data point).  Output is SVG and byte-deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "recfigs"  # stable ids inside the SVG

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("decay", "scatter", "heatmap", "rates")


class SchemaError(ValueError):
    """Input CSV does not match the documented schema for the figure kind."""


@dataclass(frozen=True)
class FigureJob:
    """One figure to render.

    kind: one of KINDS.
    csv_path / out_path: input CSV and output SVG.
    markers: decay only - step counts to highlight with red circles.
    z: scatter only - evaluation point to mark with a red cross, or None.
    column: heatmap only - which CSV column to rasterize.
    rate: rates only - exponent of the dotted guide line.
    """

    kind: str
    csv_path: str
    out_path: str
    markers: tuple[int, ...] = (1, 3, 6, 10)
    z: tuple[float, float] | None = None
    column: str = "p2"
    rate: float = 2.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _read_columns(path, required):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames
        rows = list(reader)
    if names is None:
        raise SchemaError(f"{path}: empty file, no header")
    missing = [c for c in required if c not in names]
    if missing:
        raise SchemaError(f"{path}: missing column(s): {', '.join(missing)}")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return {name: [row[name] for row in rows] for name in names}


def _floats(cells, path, name):
    out = []
    for cell in cells:
        if cell == "":
            out.append(math.nan)  # per-row degenerate marker in compare CSVs
            continue
        try:
            out.append(float(cell))
        except ValueError:
            raise SchemaError(f"{path}: non-numeric cell {cell!r} in column {name}")
    return np.asarray(out)


def _save(fig, out_path):
    # no timestamp: identical inputs give identical bytes
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _render_decay(job: FigureJob):
    cols = _read_columns(job.csv_path, ["step", "p2"])
    steps = _floats(cols["step"], job.csv_path, "step")
    p2 = _floats(cols["p2"], job.csv_path, "p2")
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.semilogy(steps, p2, color="tab:blue", lw=1.2)
    picked = [i for i, s in enumerate(steps) if int(s) in set(job.markers)]
    if picked:
        ax.semilogy(steps[picked], p2[picked], "o", color="red", ms=5, mfc="none")
    ax.set_xlabel("selected sites")
    ax.set_ylabel("squared power function")
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, job.out_path)


def _render_scatter(job: FigureJob):
    cols = _read_columns(job.csv_path, ["site_x", "site_y"])
    xs = _floats(cols["site_x"], job.csv_path, "site_x")
    ys = _floats(cols["site_y"], job.csv_path, "site_y")
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.scatter(xs, ys, s=18, color="tab:blue", zorder=2)
    if job.z is not None:
        ax.plot(*job.z, marker="x", color="red", ms=10, mew=2.0, zorder=3)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.grid(True, alpha=0.3)
    _save(fig, job.out_path)


def _render_heatmap(job: FigureJob):
    cols = _read_columns(job.csv_path, ["z_x", "z_y", job.column])
    zx = _floats(cols["z_x"], job.csv_path, "z_x")
    zy = _floats(cols["z_y"], job.csv_path, "z_y")
    val = _floats(cols[job.column], job.csv_path, job.column)
    xs = np.unique(zx)
    ys = np.unique(zy)
    if len(xs) * len(ys) != len(val):
        raise SchemaError(
            f"{job.csv_path}: rows do not tile a full {len(xs)}x{len(ys)} grid"
        )
    field = np.full((len(ys), len(xs)), math.nan)
    xi = np.searchsorted(xs, zx)
    yi = np.searchsorted(ys, zy)
    field[yi, xi] = val
    fig, ax = plt.subplots(figsize=(4.8, 4.0))
    mesh = ax.pcolormesh(xs, ys, field, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=job.column)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _save(fig, job.out_path)


def _render_rates(job: FigureJob):
    cols = _read_columns(job.csv_path, ["N", "h", "maxP"])
    h = _floats(cols["h"], job.csv_path, "h")
    maxp = _floats(cols["maxP"], job.csv_path, "maxP")
    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    ax.loglog(h, maxp, "o-", color="tab:blue", lw=1.2)
    # dotted theoretical-rate guide through the last (finest) data point
    span = np.array([h.min(), h.max()])
    guide = maxp[-1] * (span / h[-1]) ** job.rate
    ax.loglog(
        span,
        guide,
        linestyle=":",
        color="black",
        gid=f"rate-guide-slope-{job.rate:g}",
        label=f"slope {job.rate:g}",
    )
    ax.set_xlabel("fill distance")
    ax.set_ylabel("max power function")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, job.out_path)


_RENDERERS = {
    "decay": _render_decay,
    "scatter": _render_scatter,
    "heatmap": _render_heatmap,
    "rates": _render_rates,
}


def render(job: FigureJob) -> str:
    """Render the job's figure; returns the output path.  Raises SchemaError
    (and writes nothing) when the CSV does not match the kind's schema."""
    _RENDERERS[job.kind](job)
    return job.out_path

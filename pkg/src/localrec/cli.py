"""Command-line front end.

Subcommands: select, upsample, compare, converge, stability.  Each writes a
CSV (header line, UTF-8, LF, floats at 17 significant digits) and prints a
one-line summary to stdout.  Identical configuration, including the seed,
produces byte-identical CSV output; the thread count never changes bytes.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError
from .experiments import (
    compare_global_local,
    convergence_study,
    peaks,
    single_point_study,
    stability_fill_limit,
    upsample,
)
from .geometry import PointCloud, read_point_file
from .greedy import StopRule, q_and_Q
from .kernel import SobolevKernelSpec

_DEFAULT_SIZES = (100, 400, 1600, 6400)


@dataclass
class RunConfig:
    """One resolved invocation; every field is already validated / defaulted."""

    command: str
    m: float = 3.0
    d: int = 2
    scale: float = 1.0
    k_max: int | None = None
    p2_threshold: float = 0.0
    offer: int | None = None
    data: str | None = None
    random_n: int | None = None
    seed: int = 0
    grid: tuple[int, int, float, float, float, float] | None = None
    eval_file: str | None = None
    function: str = "peaks"
    out: str | None = None
    threads: int | None = None
    z: tuple[float, ...] = (0.0, 0.0)
    sizes: tuple[int, ...] = _DEFAULT_SIZES


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _coord_names(prefix, d):
    if d == 2:
        return [f"{prefix}_x", f"{prefix}_y"]
    return [f"{prefix}_{i}" for i in range(1, d + 1)]


def _build_spec(cfg: RunConfig) -> SobolevKernelSpec:
    try:
        return SobolevKernelSpec(m=cfg.m, d=cfg.d, c=cfg.scale)
    except ValueError as exc:
        raise ValueError(f"--m/--d/--scale: {exc}") from None


def _load_cloud(cfg: RunConfig, need_values: bool) -> PointCloud:
    if cfg.data is not None:
        try:
            pts, vals = read_point_file(cfg.data, cfg.d)
        except OSError as exc:
            raise ValueError(f"--data: {exc}") from None
        except ValueError as exc:
            raise ValueError(f"--data: {exc}") from None
    elif cfg.random_n is not None:
        if cfg.random_n < 1:
            raise ValueError(f"--random: must be >= 1, got {cfg.random_n}")
        pts = np.random.default_rng(cfg.seed).uniform(-1.0, 1.0, (cfg.random_n, cfg.d))
        vals = None
    else:
        raise ValueError("--data/--random: one data source is required")
    if need_values:
        if cfg.function == "column":
            if vals is None:
                raise ValueError(
                    "--function: 'column' needs a --data file with a value column"
                )
        elif cfg.function == "peaks":
            if cfg.d != 2:
                raise ValueError("--function: 'peaks' is two-dimensional; use --d 2")
            vals = peaks(pts[:, 0], pts[:, 1])
        else:
            raise ValueError(f"--function: unknown choice {cfg.function!r}")
    return PointCloud(pts, vals if need_values else None)


def _eval_points(cfg: RunConfig, default_grid):
    if cfg.eval_file is not None:
        try:
            pts, _ = read_point_file(cfg.eval_file, cfg.d)
        except (OSError, ValueError) as exc:
            raise ValueError(f"--eval: {exc}") from None
        return pts
    grid = cfg.grid if cfg.grid is not None else default_grid
    if cfg.d != 2:
        raise ValueError("--grid: grids are two-dimensional; use --eval for other d")
    nx, ny, xmin, xmax, ymin, ymax = grid
    nx, ny = int(nx), int(ny)
    if nx < 1 or ny < 1 or not (xmax > xmin and ymax > ymin):
        raise ValueError(f"--grid: bad grid {grid}")
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    return np.array([(x, y) for y in ys for x in xs])


def _stop_rule(cfg: RunConfig, default_k) -> StopRule:
    k = cfg.k_max if cfg.k_max is not None else default_k
    try:
        return StopRule(k_max=int(k), p2_threshold=cfg.p2_threshold)
    except ValueError as exc:
        raise ValueError(f"--kmax/--p2-threshold: {exc}") from None


def _offer(cfg: RunConfig, n_sites: int) -> int:
    q, big_q = q_and_Q(cfg.m, cfg.d)
    offer = cfg.offer if cfg.offer is not None else min(5 * big_q, n_sites)
    if not 1 <= offer <= n_sites:
        raise ValueError(f"--offer: must be in [1, {n_sites}], got {offer}")
    return offer


def _write_csv(path, header, rows):
    if path is None:
        raise ValueError("--out: an output file is required")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _summary(command, wall, max_p2, max_leb, extra=""):
    p2s = _fmt(max_p2) if max_p2 == max_p2 else "nan"
    lbs = _fmt(max_leb) if max_leb == max_leb else "nan"
    print(f"{command}: max_p2={p2s} max_lebesgue={lbs} wall_s={wall:.3f}{extra}")


def _cmd_select(cfg: RunConfig) -> int:
    spec = _build_spec(cfg)
    cloud = _load_cloud(cfg, need_values=False)
    z = np.asarray(cfg.z, dtype=float)
    if z.shape != (cfg.d,) or not np.isfinite(z).all():
        raise ValueError(f"--z: need {cfg.d} finite coordinates, got {cfg.z}")
    stop = _stop_rule(cfg, default_k=len(cloud))
    t0 = time.perf_counter()
    sel, lebs = single_point_study(z, cloud, spec, stop)
    wall = time.perf_counter() - t0
    header = ["step", "p2", "lebesgue", *_coord_names("site", cfg.d), "stop_reason"]
    rows = []
    for j, site in enumerate(sel.site_indices, start=1):
        coords = [_fmt(c) for c in cloud.points[site]]
        rows.append([j, _fmt(sel.p2_trace[j]), _fmt(lebs[j - 1]), *coords, sel.stop_reason])
    _write_csv(cfg.out, header, rows)
    _summary("select", wall, sel.p2_trace[1:].max() if len(sel) else np.nan,
             lebs.max() if len(sel) else np.nan)
    return 0


def _recovery_csv(cfg: RunConfig, rows, with_global: bool):
    header = [*_coord_names("z", cfg.d), "value", "p2"]
    if with_global:
        header.append("p2_global")
    header += ["lebesgue", "npoints", "stop_reason"]
    out = []
    for r in rows:
        line = [*(_fmt(c) for c in r.z), _fmt(r.value), _fmt(r.p2)]
        if with_global:
            line.append("" if r.p2_global is None else _fmt(r.p2_global))
        line += [_fmt(r.lebesgue), str(r.npoints), r.stop_reason]
        out.append(line)
    _write_csv(cfg.out, header, out)


def _cmd_upsample(cfg: RunConfig) -> int:
    spec = _build_spec(cfg)
    cloud = _load_cloud(cfg, need_values=True)
    evals = _eval_points(cfg, default_grid=(51, 51, -1.0, 1.0, -1.0, 1.0))
    stop = _stop_rule(cfg, default_k=q_and_Q(cfg.m, cfg.d)[1])
    offer = _offer(cfg, len(cloud))
    t0 = time.perf_counter()
    rows = upsample(cloud, evals, spec, stop, offer, workers=cfg.threads)
    wall = time.perf_counter() - t0
    _recovery_csv(cfg, rows, with_global=False)
    _summary("upsample", wall, max(r.p2 for r in rows), max(r.lebesgue for r in rows))
    return 0


def _cmd_compare(cfg: RunConfig) -> int:
    spec = _build_spec(cfg)
    cloud = _load_cloud(cfg, need_values=True)
    evals = _eval_points(cfg, default_grid=(51, 51, -1.0, 1.0, -1.0, 1.0))
    stop = _stop_rule(cfg, default_k=q_and_Q(cfg.m, cfg.d)[1])
    offer = _offer(cfg, len(cloud))
    t0 = time.perf_counter()
    rows = compare_global_local(cloud, evals, spec, stop, offer, workers=cfg.threads)
    wall = time.perf_counter() - t0
    with_global = any(r.p2_global is not None for r in rows)
    _recovery_csv(cfg, rows, with_global=with_global)
    extra = "" if with_global else " global=degenerate"
    _summary("compare", wall, max(r.p2 for r in rows), max(r.lebesgue for r in rows), extra)
    return 0


def _cmd_converge(cfg: RunConfig) -> int:
    spec = _build_spec(cfg)
    if cfg.data is not None:
        raise ValueError("--data: converge draws its own seeded clouds; drop --data")
    evals = _eval_points(cfg, default_grid=(21, 21, -1.0, 1.0, -1.0, 1.0))
    stop = _stop_rule(cfg, default_k=q_and_Q(cfg.m, cfg.d)[1])
    offer = cfg.offer if cfg.offer is not None else None
    if offer is not None and offer < 1:
        raise ValueError(f"--offer: must be >= 1, got {offer}")
    t0 = time.perf_counter()
    points, slope = convergence_study(
        spec, list(cfg.sizes), evals, cfg.seed, stop, offer=offer, workers=cfg.threads
    )
    wall = time.perf_counter() - t0
    _write_csv(
        cfg.out,
        ["N", "h", "maxP"],
        [[p.N, _fmt(p.h), _fmt(p.maxP)] for p in points],
    )
    slope_txt = "nan" if slope is None else _fmt(slope)
    _summary("converge", wall, max(p.maxP for p in points) ** 2,
             float("nan"), f" slope={slope_txt}")
    return 0


def _cmd_stability(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    try:
        hbar = stability_fill_limit(cfg.m, cfg.d)
    except ValueError as exc:
        raise ValueError(f"--m/--d: {exc}") from None
    wall = time.perf_counter() - t0
    _write_csv(cfg.out, ["m", "d", "hbar"], [[_fmt(cfg.m), cfg.d, _fmt(hbar)]])
    print(f"stability: hbar={_fmt(hbar)} wall_s={wall:.3f}")
    return 0


_COMMANDS = {
    "select": _cmd_select,
    "upsample": _cmd_upsample,
    "compare": _cmd_compare,
    "converge": _cmd_converge,
    "stability": _cmd_stability,
}


def _add_common(p, with_data=True, with_eval=True):
    p.add_argument("--m", type=float, default=3.0, help="smoothness order (default 3)")
    p.add_argument("--d", type=int, default=2, help="space dimension (default 2)")
    p.add_argument("--scale", type=float, default=1.0, help="kernel length scale c")
    p.add_argument("--kmax", type=int, default=None, dest="k_max",
                   help="max selected sites per point")
    p.add_argument("--p2-threshold", type=float, default=0.0,
                   help="stop a selection once P^2 <= this (0 disables)")
    p.add_argument("--offer", type=int, default=None,
                   help="offered nearest neighbors per point (default 5*Q)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for --random")
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="worker cap for per-point parallelism")
    p.add_argument("--out", required=True, help="output CSV path")
    if with_data:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--data", help="point file: d coords per line, optional value")
        src.add_argument("--random", type=int, dest="random_n", metavar="N",
                         help="uniform random cloud of N sites on [-1,1]^d")
        p.add_argument("--function", choices=("peaks", "column"), default="peaks",
                       help="value source for the sites")
    if with_eval:
        tgt = p.add_mutually_exclusive_group()
        tgt.add_argument("--grid", nargs=6, type=float, default=None,
                         metavar=("NX", "NY", "XMIN", "XMAX", "YMIN", "YMAX"),
                         help="evaluation grid (d=2)")
        tgt.add_argument("--eval", dest="eval_file", help="evaluation point file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localrec",
        description="Greedy local kernel recovery of scattered data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="greedy site selection at one point")
    _add_common(p, with_eval=False)
    p.add_argument("--z", nargs="+", type=float, default=(0.0, 0.0),
                   help="evaluation point (d coordinates, default origin)")

    p = sub.add_parser("upsample", help="recover values on a grid or point set")
    _add_common(p)

    p = sub.add_parser("compare", help="local recovery vs the full dense interpolant")
    _add_common(p)

    p = sub.add_parser("converge", help="error decay over nested random clouds")
    _add_common(p, with_data=False)
    p.add_argument("--sizes", default=",".join(str(s) for s in _DEFAULT_SIZES),
                   help="comma-separated strictly increasing cloud sizes")

    p = sub.add_parser("stability", help="roundoff-dominated fill distance limit")
    p.add_argument("--m", type=float, default=3.0)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--out", required=True)

    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in vars(cfg):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "grid") and args.grid is not None:
        cfg.grid = tuple(args.grid)
    if hasattr(args, "z"):
        cfg.z = tuple(args.z)
    if hasattr(args, "sizes"):
        try:
            cfg.sizes = tuple(int(s) for s in str(args.sizes).split(",") if s != "")
        except ValueError:
            raise ValueError(f"--sizes: not a comma-separated integer list: {args.sizes!r}")
    return cfg


def run(cfg: RunConfig) -> int:
    if cfg.command not in _COMMANDS:
        raise ValueError(f"command: unknown command {cfg.command!r}")
    return _COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(config_from_args(args))
    except (ValueError, DegeneracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""One command per figure kind; flags mirror the FigureJob fields."""

from __future__ import annotations

import argparse
import sys

from .render import FigureJob, SchemaError, render


def _base(prog, what):
    p = argparse.ArgumentParser(prog=prog, description=what)
    p.add_argument("csv", help="input CSV written by the recovery CLI")
    p.add_argument("--out", required=True, help="output SVG path")
    return p


def _run(job: FigureJob) -> int:
    try:
        render(job)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def decay_main(argv=None) -> int:
    p = _base("recfig-decay", "squared power function per selection step, log scale")
    p.add_argument("--markers", default="1,3,6,10",
                   help="comma-separated step counts to circle in red")
    args = p.parse_args(argv)
    try:
        markers = tuple(int(s) for s in str(args.markers).split(",") if s != "")
    except ValueError:
        print(f"error: --markers: not a comma-separated integer list: "
              f"{args.markers!r}", file=sys.stderr)
        return 2
    return _run(FigureJob(kind="decay", csv_path=args.csv, out_path=args.out,
                          markers=markers))


def scatter_main(argv=None) -> int:
    p = _base("recfig-scatter", "selected sites, evaluation point as a red cross")
    p.add_argument("--z", nargs=2, type=float, default=None, metavar=("X", "Y"),
                   help="evaluation point to mark (omit for no cross)")
    args = p.parse_args(argv)
    z = tuple(args.z) if args.z is not None else None
    return _run(FigureJob(kind="scatter", csv_path=args.csv, out_path=args.out, z=z))


def heatmap_main(argv=None) -> int:
    p = _base("recfig-heatmap", "grid heatmap of one CSV column")
    p.add_argument("--column", default="p2",
                   help="column to rasterize (p2, lebesgue, value, ...)")
    args = p.parse_args(argv)
    return _run(FigureJob(kind="heatmap", csv_path=args.csv, out_path=args.out,
                          column=args.column))


def rates_main(argv=None) -> int:
    p = _base("recfig-rates", "log-log error vs fill distance with a rate guide")
    p.add_argument("--rate", type=float, default=2.0,
                   help="exponent of the dotted guide line")
    args = p.parse_args(argv)
    return _run(FigureJob(kind="rates", csv_path=args.csv, out_path=args.out,
                          rate=args.rate))

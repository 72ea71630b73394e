#!/usr/bin/env python3
"""Greedy selection at one evaluation point: CSV trace plus the decay and
scatter figures.  Results land in results/."""

import sys
from pathlib import Path

from localrec.cli import main as rec
from recfigs.cli import decay_main, scatter_main

SEED = "2"
Z = ("0", "0")


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    csv = outdir / "selection_trace.csv"
    rc = rec(["select", "--random", "100", "--seed", SEED, "--kmax", "15",
              "--z", *Z, "--out", str(csv)])
    if rc:
        return rc
    rc = decay_main([str(csv), "--out", str(outdir / "selection_decay.svg")])
    if rc:
        return rc
    return scatter_main([str(csv), "--z", *Z,
                         "--out", str(outdir / "selection_sites.svg")])


if __name__ == "__main__":
    sys.exit(run(Path(__file__).resolve().parent.parent / "results"))

#!/usr/bin/env python3
"""Convergence of the greedy local recovery over nested random clouds.

Writes one CSV and one log-log figure per smoothness; the dotted guide in
each figure is the theoretical rate m - d/2.
"""

import sys
from pathlib import Path

from localrec.cli import main as rec
from recfigs.cli import rates_main

SEED = "2"
SIZES = "100,400,1600,6400"
CASES = [
    # (tag, m, k_max, offer, theoretical rate)
    ("m3", "3", "6", "30", "2"),
    ("m15", "1.5", "3", "15", "0.5"),
]


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for tag, m, kmax, offer, rate in CASES:
        csv = outdir / f"rates_{tag}.csv"
        rc = rec(["converge", "--m", m, "--sizes", SIZES, "--seed", SEED,
                  "--kmax", kmax, "--offer", offer, "--out", str(csv)])
        if rc:
            return rc
        rc = rates_main([str(csv), "--rate", rate,
                         "--out", str(outdir / f"rates_{tag}.svg")])
        if rc:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(run(Path(__file__).resolve().parent.parent / "results"))

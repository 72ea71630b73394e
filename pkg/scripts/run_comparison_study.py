#!/usr/bin/env python3
"""Local greedy recovery vs the full dense interpolant on a 51x51 grid,
for the smooth (m=3) and rough (m=1.5) kernels, with P^2 heatmaps."""

import sys
from pathlib import Path

from localrec.cli import main as rec
from recfigs.cli import heatmap_main

SEED = "2"
CASES = [
    # (tag, m, k_max, offer)
    ("m3", "3", "6", "30"),
    ("m15", "1.5", "3", "15"),
]


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    for tag, m, kmax, offer in CASES:
        csv = outdir / f"compare_{tag}.csv"
        rc = rec(["compare", "--m", m, "--random", "100", "--seed", SEED,
                  "--kmax", kmax, "--offer", offer, "--out", str(csv)])
        if rc:
            return rc
        for column in ("p2", "p2_global"):
            rc = heatmap_main([str(csv), "--column", column,
                               "--out", str(outdir / f"compare_{tag}_{column}.svg")])
            if rc:
                return rc
    return 0


if __name__ == "__main__":
    sys.exit(run(Path(__file__).resolve().parent.parent / "results"))

"""Reproduce the aperture plot of Z_0: CSV plus SVG in results/."""

import argparse
import os
import sys

from conedirac.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--outdir", default="results")
    a = ap.parse_args()
    os.makedirs(a.outdir, exist_ok=True)
    sys.exit(main([
        "figure1", "--points", str(a.points),
        "--out", os.path.join(a.outdir, "figure1.csv"),
        "--svg", os.path.join(a.outdir, "figure1.svg"),
    ]))

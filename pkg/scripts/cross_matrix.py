"""Hausdorff distance between the Ferrers-based and shooting spectra for every case."""

import math
import time

from conedirac.suite import CROSS_WINDOW, cross_cases
from conedirac.verify import cross_validate


def main():
    t0 = time.perf_counter()
    worst = 0.0
    print(f"{'k':>3} {'omega/pi':>9} {'roots':>6} {'hausdorff':>11}  ok")
    for k, w in cross_cases():
        rep = cross_validate(k, w, CROSS_WINDOW, tol=1e-5)
        worst = max(worst, rep.max_residual)
        print(f"{k:>3} {w / math.pi:>9.3f} {rep.parameters['count']:>6} {rep.max_residual:>11.3e}  {rep.passed}")
    print(f"worst {worst:.3e}, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

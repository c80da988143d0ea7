"""Smallest |lambda| in Z_k against the gap bound, as a plain-text table."""

import math

from conedirac.angular import AngularProblem, gap_report
from conedirac.suite import gap_cases

PI = math.pi


def main():
    print(f"{'k':>3} {'omega/pi':>9} {'min|lambda|':>14} {'bound':>14} {'margin':>11}")
    for k, w in gap_cases():
        rep = gap_report(AngularProblem(k, w))
        print(f"{k:>3} {w / PI:>9.3f} {rep.min_abs_lambda:>14.9f} {rep.bound:>14.9f} {rep.min_abs_lambda - rep.bound:>11.3e}")


if __name__ == "__main__":
    main()

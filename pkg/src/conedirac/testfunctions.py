"""Smooth test functions with exact derivatives.

Scalar families are real; complex combinations are built from them. All of
them are C-infinity with compact support, so Gauss-Legendre sums converge fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .angular import AngularProblem, BoundaryMatrix


class Kind(str, Enum):
    bump = "bump"
    poly_bump = "polynomial-times-bump"
    boundary_adapted = "boundary-adapted"


def _bump(x, c, w):
    """exp(-1/(1-s^2)) on |s| < 1 with s = (x-c)/w, and its x-derivative."""
    s = (np.asarray(x, dtype=float) - c) / w
    inside = np.abs(s) < 1.0
    q = np.where(inside, 1.0 - s * s, 1.0)
    b = np.where(inside, np.exp(-1.0 / q), 0.0)
    db = np.where(inside, b * (-2.0 * s / (q * q)) / w, 0.0)
    return b, db


def _phi(t):
    tt = np.where(t > 0, t, 1.0)
    e = np.where(t > 0, np.exp(-1.0 / tt), 0.0)
    return e, np.where(t > 0, e / (tt * tt), 0.0)


def smooth_step(x, a: float, b: float):
    """0 below a, 1 above b, C-infinity in between; value and derivative."""
    t = (np.asarray(x, dtype=float) - a) / (b - a)
    p, dp = _phi(t)
    q, dq = _phi(1.0 - t)
    den = p + q
    s = p / den
    ds = (dp * q + p * dq) / (den * den) / (b - a)
    return s, ds


@dataclass(frozen=True)
class TestFunction:
    """Scalar test function.

    bump: parameters (c1, w1, A1, c2, w2, A2, ...), sum of A_i * bump(c_i, w_i).
    polynomial-times-bump: parameters (c, w, a0, a1, ...), bump(c, w) * sum a_j s^j.
    ``support`` may clip the natural support, e.g. to (0, omega] for a function
    that is free at omega.
    """

    __test__ = False  # not a pytest class

    kind: Kind
    parameters: tuple
    support: tuple[float, float]

    def natural_support(self) -> tuple[float, float]:
        p = self.parameters
        if self.kind is Kind.bump:
            lo = min(p[i] - p[i + 1] for i in range(0, len(p), 3))
            hi = max(p[i] + p[i + 1] for i in range(0, len(p), 3))
            return lo, hi
        return p[0] - p[1], p[0] + p[1]

    def eval(self, x):
        """(value, derivative) at x; zero outside ``support``."""
        x = np.asarray(x, dtype=float)
        p = self.parameters
        if self.kind is Kind.bump:
            v = np.zeros_like(x)
            d = np.zeros_like(x)
            for i in range(0, len(p), 3):
                b, db = _bump(x, p[i], p[i + 1])
                v += p[i + 2] * b
                d += p[i + 2] * db
        elif self.kind is Kind.poly_bump:
            c, w, coef = p[0], p[1], np.asarray(p[2:], dtype=float)
            b, db = _bump(x, c, w)
            s = (x - c) / w
            poly = np.polynomial.polynomial.polyval(s, coef)
            dpoly = np.polynomial.polynomial.polyval(s, np.polynomial.polynomial.polyder(coef)) / w
            v, d = b * poly, db * poly + b * dpoly
        else:
            raise ValueError("scalar evaluation not defined for boundary-adapted spinors")
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        return np.where(inside, v, 0.0), np.where(inside, d, 0.0)

    def value(self, x):
        return self.eval(x)[0]

    def deriv(self, x):
        return self.eval(x)[1]

    def edges(self) -> tuple[float, float]:
        """Integration range: natural support intersected with ``support``."""
        lo, hi = self.natural_support()
        return max(lo, self.support[0]), min(hi, self.support[1])


def random_bump(rng: np.random.Generator, lo: float, hi: float, n: int = 3) -> TestFunction:
    """Sum of n bumps with supports inside [lo, hi]."""
    params = []
    for _ in range(n):
        w = rng.uniform(0.05, 0.5) * (hi - lo)
        c = rng.uniform(lo + w, hi - w) if hi - lo > 2 * w else 0.5 * (lo + hi)
        params += [c, w, rng.normal()]
    return TestFunction(Kind.bump, tuple(params), (lo, hi))


def random_poly_bump(rng: np.random.Generator, lo: float, hi: float, degree: int = 4, free_right: bool = False) -> TestFunction:
    """Polynomial times a bump inside [lo, hi]; with ``free_right`` the bump
    straddles ``hi`` so the function is cut off there with a nonzero value."""
    length = hi - lo
    if free_right:
        w = rng.uniform(0.2, 0.9) * length
        c = hi + rng.uniform(-0.5, 0.5) * w
        w = min(w, c - lo - 1e-3 * length)
    else:
        w = rng.uniform(0.1, 0.5) * length
        c = rng.uniform(lo + w, hi - w)
    coef = rng.normal(size=degree + 1)
    return TestFunction(Kind.poly_bump, (c, w, *coef), (lo, hi))


@dataclass(frozen=True)
class BoundaryAdaptedSpinor:
    """Four-component function on (0, omega] obeying (p1, p2)(omega) = A_omega (p3, p4)(omega).

    p3, p4 and the free parts g1, g2 are complex combinations of scalar test
    functions, each vanishing near 0. The upper pair is corrected by a smooth
    cutoff chi with chi(omega) = 1 so the endpoint relation holds exactly.
    """

    omega: float
    comps: tuple  # four (real part, imaginary part) TestFunction pairs
    cutoff: tuple[float, float]
    kind: Kind = field(default=Kind.boundary_adapted)

    def _raw(self, theta):
        vals, ders = [], []
        for re, im in self.comps:
            v1, d1 = re.eval(theta)
            v2, d2 = im.eval(theta)
            vals.append(v1 + 1j * v2)
            ders.append(d1 + 1j * d2)
        return np.array(vals), np.array(ders)

    def correction(self) -> np.ndarray:
        end, _ = self._raw(np.array([self.omega]))
        a = BoundaryMatrix.from_omega(self.omega).entries
        return a @ end[2:, 0] - end[:2, 0]

    def eval(self, theta):
        theta = np.asarray(theta, dtype=float)
        v, d = self._raw(theta)
        chi, dchi = smooth_step(theta, *self.cutoff)
        corr = self.correction()
        v[:2] += corr[:, None] * chi
        d[:2] += corr[:, None] * dchi
        return v, d

    def lower_edge(self) -> float:
        lo = min(min(re.edges()[0], im.edges()[0]) for re, im in self.comps)
        return min(lo, self.cutoff[0])

    def endpoint_defect(self) -> float:
        v, _ = self.eval(np.array([self.omega]))
        a = BoundaryMatrix.from_omega(self.omega).entries
        return float(np.linalg.norm(v[:2, 0] - a @ v[2:, 0]) / max(np.linalg.norm(v[:, 0]), 1e-300))


def random_boundary_adapted(rng: np.random.Generator, problem: AngularProblem | float) -> BoundaryAdaptedSpinor:
    omega = problem.omega if isinstance(problem, AngularProblem) else float(problem)
    lo = rng.uniform(0.05, 0.3) * omega
    comps = []
    for _ in range(4):
        pair = tuple(random_poly_bump(rng, lo, omega, degree=3, free_right=bool(rng.integers(2))) for _ in range(2))
        comps.append(pair)
    a = rng.uniform(0.3, 0.7) * omega
    b = a + rng.uniform(0.2, 0.9) * (omega - a)
    return BoundaryAdaptedSpinor(omega, tuple(comps), (a, b))


def zero_spinor(omega: float) -> BoundaryAdaptedSpinor:
    z = TestFunction(Kind.bump, (0.5 * omega, 0.25 * omega, 0.0), (0.0, omega))
    return BoundaryAdaptedSpinor(omega, tuple((z, z) for _ in range(4)), (0.4 * omega, 0.8 * omega))


def rng_from(seed: int | None) -> np.random.Generator:
    return np.random.default_rng(seed)


def dyadic_support_ok(tf: TestFunction) -> bool:
    lo, hi = tf.edges()
    return lo > 0 and math.isfinite(hi) and hi > lo

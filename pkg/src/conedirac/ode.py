"""Dormand-Prince 5(4) integrator for two-component linear systems

    y' = [[a1 cot t + b1 / t,  c12              ],
          [c21,                a2 cot t + b2 / t]] y

which covers the angular fibers (regular singular point at t = 0). Compiled with
numba; one adaptive trajectory per system, no dense output.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import StepUnderflow

# Butcher tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# fifth minus fourth order
_E1, _E3, _E4, _E5, _E6, _E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

UNDERFLOW = -1
BUDGET = -2


@njit(cache=True)
def _rhs(t, y0, y1, a1, b1, c12, c21, a2, b2):
    cot = np.cos(t) / np.sin(t)
    return (a1 * cot + b1 / t) * y0 + c12 * y1, c21 * y0 + (a2 * cot + b2 / t) * y1


@njit(cache=True)
def _dopri(a1, b1, c12, c21, a2, b2, t0, t1, y0, y1, rtol, atol, max_step, h, max_steps):
    t = t0
    k10, k11 = _rhs(t, y0, y1, a1, b1, c12, c21, a2, b2)
    steps = 0
    while t < t1:
        steps += 1
        if steps > max_steps:
            return y0, y1, BUDGET
        h = min(h, max_step, t1 - t)
        if h <= 1e-15 * max(1.0, abs(t1)):
            return y0, y1, UNDERFLOW
        k20, k21 = _rhs(t + _C2 * h, y0 + h * _A21 * k10, y1 + h * _A21 * k11, a1, b1, c12, c21, a2, b2)
        k30, k31 = _rhs(
            t + _C3 * h,
            y0 + h * (_A31 * k10 + _A32 * k20),
            y1 + h * (_A31 * k11 + _A32 * k21),
            a1, b1, c12, c21, a2, b2,
        )
        k40, k41 = _rhs(
            t + _C4 * h,
            y0 + h * (_A41 * k10 + _A42 * k20 + _A43 * k30),
            y1 + h * (_A41 * k11 + _A42 * k21 + _A43 * k31),
            a1, b1, c12, c21, a2, b2,
        )
        k50, k51 = _rhs(
            t + _C5 * h,
            y0 + h * (_A51 * k10 + _A52 * k20 + _A53 * k30 + _A54 * k40),
            y1 + h * (_A51 * k11 + _A52 * k21 + _A53 * k31 + _A54 * k41),
            a1, b1, c12, c21, a2, b2,
        )
        k60, k61 = _rhs(
            t + h,
            y0 + h * (_A61 * k10 + _A62 * k20 + _A63 * k30 + _A64 * k40 + _A65 * k50),
            y1 + h * (_A61 * k11 + _A62 * k21 + _A63 * k31 + _A64 * k41 + _A65 * k51),
            a1, b1, c12, c21, a2, b2,
        )
        n0 = y0 + h * (_B1 * k10 + _B3 * k30 + _B4 * k40 + _B5 * k50 + _B6 * k60)
        n1 = y1 + h * (_B1 * k11 + _B3 * k31 + _B4 * k41 + _B5 * k51 + _B6 * k61)
        k70, k71 = _rhs(t + h, n0, n1, a1, b1, c12, c21, a2, b2)
        e0 = h * (_E1 * k10 + _E3 * k30 + _E4 * k40 + _E5 * k50 + _E6 * k60 + _E7 * k70)
        e1 = h * (_E1 * k11 + _E3 * k31 + _E4 * k41 + _E5 * k51 + _E6 * k61 + _E7 * k71)
        s0 = atol + rtol * max(abs(y0), abs(n0))
        s1 = atol + rtol * max(abs(y1), abs(n1))
        err = max(abs(e0) / s0, abs(e1) / s1)
        fac = min(5.0, max(0.2, 0.9 * max(err, 1e-10) ** -0.2))
        if err <= 1.0:
            t = t1 if h == t1 - t else t + h
            y0, y1 = n0, n1
            k10, k11 = k70, k71  # first same as last
        else:
            fac = min(fac, 1.0)
        h *= fac
    return y0, y1, steps


@njit(cache=True)
def _dopri_many(a1, b1, c12, c21, a2, b2, t0, t1, y0, y1, rtol, atol, max_step, h0, max_steps):
    n = c12.shape[0]
    out = np.empty((2, n))
    status = np.empty(n, dtype=np.int64)
    for i in range(n):
        r0, r1, st = _dopri(a1, b1, c12[i], c21[i], a2, b2, t0, t1, y0[i], y1[i], rtol, atol, max_step, h0, max_steps)
        out[0, i] = r0
        out[1, i] = r1
        status[i] = st
    return out, status


def dopri45_cot(
    a1: float,
    b1: float,
    c12,
    c21,
    a2: float,
    b2: float,
    t0: float,
    t1: float,
    y0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_step: float = np.inf,
    h0: float | None = None,
    max_steps: int = 1_000_000,
) -> np.ndarray:
    """Endpoint values y(t1), shape (2, n), for n systems differing in c12, c21.

    ``y0`` has shape (2, n) or (2,). Each system gets its own step sequence, so
    the result for one system does not depend on the rest of the batch.
    """
    c12, c21 = np.broadcast_arrays(
        np.atleast_1d(np.asarray(c12, dtype=float)), np.atleast_1d(np.asarray(c21, dtype=float))
    )
    n = c12.shape[0]
    y0 = np.asarray(y0, dtype=float)
    y0 = np.broadcast_to(y0.reshape(2, -1), (2, n))
    if h0 is None:
        h0 = 1e-3 * (t1 - t0)
    out, status = _dopri_many(
        float(a1), float(b1), np.ascontiguousarray(c12), np.ascontiguousarray(c21), float(a2), float(b2),
        float(t0), float(t1), np.ascontiguousarray(y0[0]), np.ascontiguousarray(y0[1]),
        float(rtol), float(atol), float(max_step), float(h0), int(max_steps),
    )
    if np.any(status == UNDERFLOW):
        raise StepUnderflow("step size underflow; raise theta_start or loosen tolerances")
    if np.any(status == BUDGET):
        raise StepUnderflow("step budget exhausted")
    return out

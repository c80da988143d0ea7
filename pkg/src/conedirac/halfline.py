"""Half-line Dirac operators with Coulomb-type coupling.

Two differential expressions appear, acting on f = (f1, f2):

    tau_alpha f = ( f2' + alpha f2 / x,  -f1' + alpha f1 / x)
    d_lam f     = (-f2' - lam f2 / x,    f1' - lam f1 / x)

Conversion map: d_lam = -tau_alpha with alpha = lam. Every statement about
tau_alpha transfers to d_lam by that substitution and an overall sign. In
particular tau_alpha f^{+-} = +-i f^{+-} becomes d_lam f^{+-} = -+i f^{+-}.

For the angular comparison operator alpha = k + 1/2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .angular import Sign
from .errors import InvalidInput
from .quadrature import dyadic_edges, gauss_legendre, panel_nodes
from .specfun import bessel_k
from .testfunctions import TestFunction

HALF_LINE_NODES = 64


class UnclassifiedCase(InvalidInput):
    """Small coupling on a finite interval: not covered by the classification."""


class UnderResolved(UserWarning):
    pass


@dataclass(frozen=True)
class HalflineProblem:
    alpha: float
    endpoint_b: float = math.inf

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise InvalidInput("alpha must be finite")
        if not (self.endpoint_b > 0):
            raise InvalidInput("endpoint b must be positive or infinite")


@dataclass(frozen=True)
class DeficiencyReport:
    indices: tuple[int, int]
    essentially_self_adjoint: bool
    domain_note: str

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "essentially_self_adjoint": self.essentially_self_adjoint,
            "domain_note": self.domain_note,
        }


def classify(problem: HalflineProblem) -> DeficiencyReport:
    a = abs(problem.alpha)
    finite = math.isfinite(problem.endpoint_b)
    if a >= 0.5 and finite:
        return DeficiencyReport((1, 1), False, "limit point at 0, regular endpoint b")
    if a >= 0.5:
        note = "H¹₀ half-line" if a > 0.5 else "limit point at 0 and at infinity"
        return DeficiencyReport((0, 0), True, note)
    if not finite:
        return DeficiencyReport((1, 1), False, "limit circle at 0; extensions form a one-angle family")
    raise UnclassifiedCase(f"|alpha| = {a} < 1/2 with finite endpoint b = {problem.endpoint_b} is not classified")


def _check_small_alpha(alpha: float):
    if not -0.5 < alpha < 0.5:
        raise InvalidInput(f"alpha = {alpha} outside (-1/2, 1/2)")


def deficiency_function(alpha: float, sign: Sign, x) -> np.ndarray:
    """(sqrt(x) K_{1/2-alpha}(x), -+i sqrt(x) K_{1/2+alpha}(x)), shape (2, n).

    tau_alpha f^{+-} = +-i f^{+-}, and f^{+-} is square integrable on (0, inf).
    """
    _check_small_alpha(alpha)
    sign = Sign(sign)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise InvalidInput("x must be positive")
    r = np.sqrt(x)
    f1 = r * bessel_k(0.5 - alpha, x)
    f2 = -sign.value_int * 1j * r * bessel_k(0.5 + alpha, x)
    return np.array([f1 + 0j, f2])


def tau_apply_exact(alpha: float, fn, x, h: float = 1e-3) -> np.ndarray:
    """tau_alpha applied to a callable fn(x) -> (2, n) with 4th-order central differences."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h = np.minimum(h, 0.25 * x)
    d = (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)
    f = fn(x)
    return np.array([d[1] + alpha * f[1] / x, -d[0] + alpha * f[0] / x])


def deficiency_residual(alpha: float, sign: Sign, x, h: float = 1e-3) -> float:
    """max |tau_alpha f -+ i f| / max |f| over the sample points."""
    sign = Sign(sign)
    f = deficiency_function(alpha, sign, x)
    tf = tau_apply_exact(alpha, lambda t: deficiency_function(alpha, sign, t), x, h)
    res = tf - sign.value_int * 1j * f
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


def deficiency_norm_sq(alpha: float, sign: Sign, upper: float = 30.0, panels: int = 48) -> tuple[float, float]:
    """Squared L2 norm over (0, upper) and the tail estimate beyond ``upper``.

    Panels are geometric in x so the x^{-|alpha|} type behaviour near 0 is resolved.
    """
    edges = np.concatenate([[0.0], np.geomspace(1e-12, upper, panels)])
    nodes, weights = gauss_legendre(32)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        x = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        f = deficiency_function(alpha, sign, x)
        total += 0.5 * (hi - lo) * float(np.sum(weights * np.sum(np.abs(f) ** 2, axis=0)))
    # beyond upper both components are about sqrt(pi/2) e^{-x}, so |f|^2 ~ pi e^{-2x}
    f_end = deficiency_function(alpha, sign, np.array([upper]))
    tail = float(np.sum(np.abs(f_end) ** 2)) / 2.0
    return total, tail


def _halfline_nodes(tf: TestFunction, nodes: int):
    lo, hi = tf.edges()
    if not 0 < lo < hi:
        raise InvalidInput("test function must be supported in (0, inf) away from 0")
    return panel_nodes(dyadic_edges(lo, hi, min_panels=4), nodes)


def fiber_hardy_terms(lam: float, sign: Sign, psi: TestFunction, nodes: int = HALF_LINE_NODES) -> tuple[float, float]:
    """(int |psi' -+ lam psi / x|^2, (lam -+ 1/2)^2 int |psi|^2 / x^2)."""
    s = Sign(sign).value_int
    x, w = _halfline_nodes(psi, nodes)
    v, d = psi.eval(x)
    lhs = float(np.sum(w * np.abs(d - s * lam * v / x) ** 2))
    rhs = (lam - s * 0.5) ** 2 * float(np.sum(w * np.abs(v) ** 2 / x**2))
    return lhs, rhs


def fiber_hardy_residual(lam: float, sign: Sign, psi: TestFunction, nodes: int = HALF_LINE_NODES) -> float:
    """int |psi' -+ lam psi/x|^2 - (lam -+ 1/2)^2 int |psi|^2/x^2.

    Non-negative for every smooth psi supported in (0, inf). Warns when
    halving the node count moves the result by more than 1e-10 of its scale.
    """
    lhs, rhs = fiber_hardy_terms(lam, sign, psi, nodes)
    lhs2, rhs2 = fiber_hardy_terms(lam, sign, psi, max(2, nodes // 2))
    scale = max(lhs, rhs, 1e-300)
    if abs((lhs - rhs) - (lhs2 - rhs2)) > 1e-10 * scale:
        warnings.warn("fiber Hardy integrand under-resolved", UnderResolved, stacklevel=2)
    return lhs - rhs


def dirac_fiber_apply(lam: float, psi, grid) -> np.ndarray:
    """d_lam psi = (-psi2' - lam psi2/x, psi1' - lam psi1/x) on a sampled grid.

    ``psi`` has shape (2, n); derivatives are second-order central differences
    (one-sided at the ends), valid on graded grids. Equivalently -tau_alpha psi
    with alpha = lam.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InvalidInput("grid must be positive and strictly increasing")
    psi = np.asarray(psi)
    if psi.shape != (2, grid.size):
        raise InvalidInput(f"psi must have shape (2, {grid.size})")
    d = np.gradient(psi, grid, axis=1, edge_order=2)
    return np.array([-d[1] - lam * psi[1] / grid, d[0] - lam * psi[0] / grid])

"""Real special functions: gamma, Gauss 2F1, Ferrers P, modified Bessel K and I.

Ferrers functions of non-positive order are evaluated from

    P_nu^{-m}(x) = ((1-x)/(1+x))^{m/2} / m! * 2F1(-nu, nu+1; 1+m; (1-x)/2)

but only for a base degree in [-1/2, 3/2). Larger degrees are reached by the
upward three-term recurrence in the degree, which is stable for x in (-1, 1),
while the raw series cancels catastrophically once |nu| reaches ~20. Negative
degrees are first folded with P_nu = P_{-nu-1}.

Every routine accepts numpy arrays and is elementwise: the value computed for
one element never depends on the other elements of the batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConvergenceError, InvalidInput, PoleError, SpecialOverflow

SERIES_TOL = 1e-16
SERIES_CAP = 10_000
_CHUNK = 256

# Lanczos g=7, n=9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Gamma function for real x (Lanczos, reflection below 1/2)."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    # split the power to keep t**(x+0.5) finite up to x ~ 170
    half = t ** (0.5 * (x + 0.5))
    return math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * acc


def _series_2f1(a, b, c, z) -> np.ndarray:
    """Gauss series summed in chunks, vectorised over broadcast parameters."""
    a, b, c, z = (np.asarray(v, dtype=float) for v in np.broadcast_arrays(a, b, c, z))
    shape = a.shape
    a, b, c, z = a.ravel(), b.ravel(), c.ravel(), z.ravel()
    if np.any((c <= 0) & (c == np.floor(c))):
        raise PoleError("2F1 lower parameter c is a non-positive integer")
    if np.any((z < 0) | (z >= 1)):
        raise InvalidInput("2F1 series needs z in [0, 1)")

    total = np.ones_like(z)
    term = np.ones_like(z)
    active = z != 0.0
    # past this index the terms no longer change sign or grow
    settle = np.maximum(np.abs(a), np.abs(b)) + np.abs(c) + 2.0
    tail = 1.0 + z / (1.0 - z)
    start = 0
    while np.any(active):
        if start >= SERIES_CAP:
            raise ConvergenceError(f"2F1 series did not converge in {SERIES_CAP} terms")
        idx = np.nonzero(active)[0]
        n = np.arange(start, start + _CHUNK, dtype=float)
        ratio = ((a[idx, None] + n) * (b[idx, None] + n)) / ((c[idx, None] + n) * (n + 1.0))
        ratio *= z[idx, None]
        terms = term[idx, None] * np.cumprod(ratio, axis=1)
        total[idx] += terms.sum(axis=1)
        term[idx] = terms[:, -1]
        start += _CHUNK
        last = np.abs(terms[:, -1])
        done = (last == 0.0) | (
            (start > settle[idx]) & (last * tail[idx] <= SERIES_TOL * np.abs(total[idx]))
        )
        if not np.all(np.isfinite(terms)):
            raise ConvergenceError("2F1 series overflowed")
        active[idx[done]] = False
    return total.reshape(shape)


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function for z in [0, 1) by direct summation."""
    return float(_series_2f1(a, b, c, z))


def _check_x(x: np.ndarray) -> None:
    if np.any(~((x > -1.0) & (x < 1.0))):
        raise InvalidInput("Ferrers argument must lie strictly inside (-1, 1)")


def ferrers_p_neg(nu, m: int, x) -> np.ndarray:
    """P_nu^{-m}(x) for integer m >= 0, broadcasting over nu and x."""
    if m < 0:
        raise InvalidInput("ferrers_p_neg takes the magnitude m >= 0 of the order")
    nu, x = np.broadcast_arrays(np.asarray(nu, dtype=float), np.asarray(x, dtype=float))
    _check_x(x)
    deg = np.where(nu < -0.5, -nu - 1.0, nu)
    steps = np.floor(deg + 0.5)
    base = deg - steps
    z = 0.5 * (1.0 - x)
    pref = ((1.0 - x) / (1.0 + x)) ** (0.5 * m) / math.factorial(m)
    prev = pref * _series_2f1(-base, base + 1.0, 1.0 + m, z)
    cur = pref * _series_2f1(-base - 1.0, base + 2.0, 1.0 + m, z)
    out = np.where(steps == 0, prev, cur)
    nmax = int(steps.max()) if steps.size else 0
    for j in range(1, nmax):
        v = base + j
        prev, cur = cur, ((2.0 * v + 1.0) * x * cur - (v - m) * prev) / (v + m + 1.0)
        out = np.where(steps == j + 1, cur, out)
    return out


def ferrers_p_ladder(base, m: int, x: float, nsteps: int) -> np.ndarray:
    """Table T[i, j] = P_{base_i + j}^{-m}(x), j = 0..nsteps, base_i in [-1/2, 1/2).

    One series pair per base, then the degree recurrence; this is the cheap way
    to sample a whole lambda window whose points share few fractional parts.
    """
    base = np.asarray(base, dtype=float)
    if np.any((base < -0.5) | (base >= 0.5)):
        raise InvalidInput("ladder bases must lie in [-1/2, 1/2)")
    _check_x(np.asarray(x))
    z = 0.5 * (1.0 - x)
    pref = ((1.0 - x) / (1.0 + x)) ** (0.5 * m) / math.factorial(m)
    out = np.empty((base.size, nsteps + 1))
    out[:, 0] = pref * _series_2f1(-base, base + 1.0, 1.0 + m, z)
    if nsteps >= 1:
        out[:, 1] = pref * _series_2f1(-base - 1.0, base + 2.0, 1.0 + m, z)
    for j in range(1, nsteps):
        v = base + j
        out[:, j + 1] = ((2.0 * v + 1.0) * x * out[:, j] - (v - m) * out[:, j - 1]) / (v + m + 1.0)
    return out


def order_connection(nu, m: int):
    """Factor c with P_nu^m = c * P_nu^{-m} for integer m >= 0.

    Equals (-1)^m Gamma(nu+m+1)/Gamma(nu-m+1), written as a finite product so
    the removable singularity at integer nu < m gives 0 instead of a pole.
    """
    nu = np.asarray(nu, dtype=float)
    fac = np.ones_like(nu)
    for j in range(m):
        fac = fac * (j - nu) * (nu + 1.0 + j)
    return fac


def ferrers_p(nu, mu: int, x):
    """Ferrers function of the first kind P_nu^mu(x), real degree, integer order."""
    mu = int(mu)
    val = ferrers_p_neg(nu, abs(mu), x)
    if mu > 0:
        val = order_connection(nu, mu) * val
    return val if np.ndim(val) else float(val)


@dataclass(frozen=True)
class FerrersArgs:
    degree: float
    order: int
    x: float

    def __post_init__(self):
        if not (-1.0 < self.x < 1.0):
            raise InvalidInput(f"x={self.x} outside (-1, 1)")
        if int(self.order) != self.order:
            raise InvalidInput("order must be an integer")

    def canonical(self) -> "FerrersArgs":
        """Same value, degree folded to >= -1/2."""
        d = self.degree if self.degree >= -0.5 else -self.degree - 1.0
        return FerrersArgs(d, self.order, self.x)

    def evaluate(self) -> float:
        return ferrers_p(self.degree, self.order, self.x)


class Identity(str, Enum):
    GR8733_5 = "GR8733_5"
    GR8735_1 = "GR8735_1"
    GR8735_2 = "GR8735_2"
    GR8735_3 = "GR8735_3"
    GR8735_4 = "GR8735_4"
    DLMF14_10_2 = "DLMF14_10_2"
    DLMF14_10_4 = "DLMF14_10_4"


def _dx(nu, mu, x, h=None):
    # central differences with two Richardson steps (sixth order); the step
    # shrinks near x = +-1 where derivatives of P grow
    if h is None:
        h = 0.02 * (1.0 - abs(x))
    d = [(ferrers_p(nu, mu, x + t) - ferrers_p(nu, mu, x - t)) / (2 * t) for t in (h, h / 2, h / 4)]
    r1 = (4 * d[1] - d[0]) / 3
    r2 = (4 * d[2] - d[1]) / 3
    return (16 * r2 - r1) / 15


def identity_sides(identity, nu: float, mu: int, x: float) -> tuple[float, float]:
    """(LHS, RHS) of a named Ferrers identity."""
    ident = Identity(identity)
    P = lambda n, m: ferrers_p(n, m, x)  # noqa: E731
    s = math.sqrt(1.0 - x * x)
    if ident is Identity.GR8733_5:
        return P(-nu - 1.0, mu), P(nu, mu)
    if ident is Identity.GR8735_1:
        return (nu - mu + 1) * P(nu + 1, mu), s * P(nu, mu + 1) + (nu + mu + 1) * x * P(nu, mu)
    if ident is Identity.GR8735_2:
        return (nu + mu) * P(nu - 1, mu), (nu - mu) * x * P(nu, mu) - s * P(nu, mu + 1)
    if ident is Identity.GR8735_3:
        return P(nu - 1, mu), x * P(nu, mu) + (nu - mu + 1) * s * P(nu, mu - 1)
    if ident is Identity.GR8735_4:
        return P(nu + 1, mu), x * P(nu, mu) - (nu + mu) * s * P(nu, mu - 1)
    if ident is Identity.DLMF14_10_2:
        return s * P(nu, mu + 1) + (nu + mu + 1) * x * P(nu, mu), (nu - mu + 1) * P(nu + 1, mu)
    # DLMF14_10_4
    return (1 - x * x) * _dx(nu, mu, x), (mu - nu - 1) * P(nu + 1, mu) + (nu + 1) * x * P(nu, mu)


def ferrers_identity_residual(identity, degree: float, order: int, x: float) -> float:
    lhs, rhs = identity_sides(identity, degree, order, x)
    return abs(lhs - rhs)


# --- modified Bessel functions ------------------------------------------------

BESSEL_STEP = 0.05


def _bessel_k_scalar(nu: float, x: float, step: float) -> float:
    # integrand exp(-x cosh t) cosh(nu t); work with g(t) = -x cosh t + nu t
    tpk = math.asinh(nu / x) if nu > 0 else 0.0
    gpk = -x * math.cosh(tpk) + nu * tpk
    if gpk > 700.0:
        raise SpecialOverflow(f"K_{nu}({x}) overflows")
    tmax = tpk + 0.5
    while -x * math.cosh(tmax) + nu * tmax > gpk - 45.0:
        tmax += 0.5
    n = int(math.ceil(tmax / step))
    t = np.linspace(0.0, n * step, n + 1)
    w = np.full(n + 1, step)
    w[0] = 0.5 * step
    ch = np.cosh(t)
    f = 0.5 * (np.exp(-x * ch + nu * t) + np.exp(-x * ch - nu * t))
    return float(np.dot(w, f))


def bessel_k(order, x, step: float = BESSEL_STEP):
    """K_nu(x) by the trapezoid rule on int_0^inf exp(-x cosh t) cosh(nu t) dt.

    The integrand is entire and decays double-exponentially, so the trapezoid
    rule converges geometrically in 1/step.
    """
    nu = abs(float(order))
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise InvalidInput("bessel_k needs x > 0")
    out = np.array([_bessel_k_scalar(nu, float(v), step) for v in xs.ravel()]).reshape(xs.shape)
    return out if out.ndim else float(out)


def _bessel_i_scalar(nu: float, x: float) -> float:
    q = 0.25 * x * x
    term = (0.5 * x) ** nu / gamma(nu + 1.0)
    total = term
    k = 0
    while True:
        term *= q / ((k + 1.0) * (nu + k + 1.0))
        total += term
        k += 1
        if term <= SERIES_TOL * total or k > SERIES_CAP:
            break
    if k > SERIES_CAP:
        raise ConvergenceError("bessel_i series did not converge")
    if not math.isfinite(total):
        raise SpecialOverflow(f"I_{nu}({x}) overflows")
    return total


def bessel_i(order, x):
    """I_nu(x) from the ascending series, nu >= 0."""
    nu = float(order)
    if nu < 0:
        raise InvalidInput("bessel_i implemented for order >= 0")
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise InvalidInput("bessel_i needs x > 0")
    out = np.array([_bessel_i_scalar(nu, float(v)) for v in xs.ravel()]).reshape(xs.shape)
    return out if out.ndim else float(out)

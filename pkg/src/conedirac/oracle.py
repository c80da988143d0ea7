"""Shooting oracle for the angular fibers, independent of Ferrers functions.

The flat-measure fiber T_k acts on (u, v) as

    u' = a cot(t) u + (k + lam) v
    v' = (k + 1 - lam) u - a cot(t) v,        a = k + 1/2.

Near the axis the solution that is square integrable behaves like t^{|a|}.
Leading-order Frobenius balance gives

    k >= 0:   u ~ t^a,          v ~ (k + 1 - lam) / (2k + 2) * t^{a+1}
    k <= -1:  v ~ t^{-a},       u ~ (lam + k) / (2|k|)   * t^{1-a}

We integrate w = t^{-|a|} (u, v), which is smooth at the axis, so the adaptive
integrator does not have to resolve the power law. The prefactor is a common
scalar and drops out of the (scale-free) miss functions.

Eigenvalues of branch Eq1 (resp. Eq2) are the lam for which (u, v)(omega) is
parallel to the +i (resp. -i) eigenvector of the boundary matrix A_omega.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .angular import AngularProblem, AngularSpectrum, Branch, BoundaryMatrix, EigenvalueRecord, check_omega
from .config import ShootingConfig
from .errors import InvalidInput
from .ode import dopri45_cot
from .roots import UnresolvedBracket, illinois, sign_change_brackets


@dataclass(frozen=True)
class MissValue:
    lam: float
    miss_plus: float
    miss_minus: float


def regular_initial_data(k: int, lam: float, theta_start: float) -> np.ndarray:
    """Leading-order data of the regular solution at theta_start (larger entry 1)."""
    if not 0 < theta_start <= 1e-3:
        raise InvalidInput("theta_start must lie in (0, 1e-3]")
    if k >= 0:
        return np.array([1.0, (k + 1 - lam) * theta_start / (2 * k + 2)], dtype=complex)
    return np.array([(lam + k) * theta_start / (-2 * k), 1.0], dtype=complex)


def _endpoint(k: int, lam, omega: float, cfg: ShootingConfig) -> np.ndarray:
    """Stripped solution w(omega) for every lam, shape (2, n)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    a = k + 0.5
    p = abs(a)
    t0 = cfg.theta_start
    if k >= 0:
        w0 = np.array([np.ones_like(lam), (k + 1 - lam) * t0 / (2 * k + 2)])
    else:
        w0 = np.array([(lam + k) * t0 / (-2 * k), np.ones_like(lam)])
    return dopri45_cot(
        a, -p, k + lam, k + 1 - lam, -a, -p,
        t0, omega, w0,
        rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.max_step, h0=0.05 * t0,
    )


def integrate_fiber(k: int, lam: float, omega: float, config: ShootingConfig | None = None) -> np.ndarray:
    """(u, v)(omega) of the regular solution, complex 2-vector."""
    cfg = config or ShootingConfig()
    omega = check_omega(omega)
    w = _endpoint(k, lam, omega, cfg)[:, 0]
    return (omega ** abs(k + 0.5) * w).astype(complex)


def _signed_miss(k: int, lam, omega: float, cfg: ShootingConfig) -> tuple[np.ndarray, np.ndarray]:
    w = _endpoint(k, lam, omega, cfg)
    bm = BoundaryMatrix.from_omega(omega)
    norm = np.hypot(w[0], w[1])
    out = []
    for xi in (bm.xi_plus.real, bm.xi_minus.real):
        out.append((w[0] * xi[1] - w[1] * xi[0]) / norm)
    return out[0], out[1]


def boundary_miss(k: int, lam: float, omega: float, config: ShootingConfig | None = None) -> MissValue:
    cfg = config or ShootingConfig()
    omega = check_omega(omega)
    mp, mm = _signed_miss(k, lam, omega, cfg)
    return MissValue(float(lam), float(abs(mp[0])), float(abs(mm[0])))


def oracle_spectrum(
    k: int,
    omega: float,
    window: tuple[float, float] = (-25.0, 25.0),
    config: ShootingConfig | None = None,
) -> AngularSpectrum:
    """Eigenvalues located as sign changes of the signed miss functions."""
    cfg = config or ShootingConfig()
    problem = AngularProblem(k, omega)
    lo, hi = map(float, window)
    if not hi > lo:
        raise InvalidInput(f"degenerate window {window}")
    n = max(2, int(math.ceil((hi - lo) / cfg.scan_step)))
    grid = np.linspace(lo, hi, n + 1)
    scan = _signed_miss(k, grid, problem.omega, cfg)

    # both branches are refined in one batch; each integration yields both misses
    a, b, fa, fb, which, exact = [], [], [], [], [], []
    for j, vals in enumerate(scan):
        br, zeros = sign_change_brackets(grid, vals)
        exact += [(float(grid[z]), j) for z in zeros]
        a.append(grid[br])
        b.append(grid[br + 1])
        fa.append(vals[br])
        fb.append(vals[br + 1])
        which.append(np.full(br.size, j))
    a, b, fa, fb, which = map(np.concatenate, (a, b, fa, fb, which))

    def fn(x, idx):
        m = _signed_miss(k, x, problem.omega, cfg)
        return np.where(which[idx] == 0, m[0], m[1])

    roots = np.array([])
    if a.size:
        roots, ok = illinois(fn, a, b, fa, fb, xtol=cfg.xtol, indexed=True)
        if not ok.all():
            warnings.warn(f"oracle k={k}: {int((~ok).sum())} unresolved bracket(s)", UnresolvedBracket, stacklevel=2)
    lams = np.concatenate([roots, [e[0] for e in exact]])
    tags = np.concatenate([which, [e[1] for e in exact]]).astype(int)
    records = []
    if lams.size:
        res = np.abs(np.where(tags == 0, *_signed_miss(k, lams, problem.omega, cfg)))
        for lam, tag, r in zip(lams, tags, res):
            records.append(EigenvalueRecord(float(lam), Branch.Eq1 if tag == 0 else Branch.Eq2, float(r)))
    records.sort(key=lambda r: r.lam)
    return AngularSpectrum(problem, (lo, hi), records)

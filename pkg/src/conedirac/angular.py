"""Angular fibers T_k: characteristic functions, eigenvalues, eigenfunctions.

For k >= 0 the eigenvalues are the roots of

    Eq1:  (lam+k+1) P_lam^{-k-1}(cos w) - P_{lam-1}^{-k}(cos w) = 0
    Eq2:  (lam+k+1) P_lam^{-k-1}(cos w) + P_{lam-1}^{-k}(cos w) = 0

and for k <= -1 of

    Eq1:  (lam+k) P_{lam-1}^{k}(cos w) + P_lam^{k+1}(cos w) = 0
    Eq2:  (lam+k) P_{lam-1}^{k}(cos w) - P_lam^{k+1}(cos w) = 0.

Only non-positive Ferrers orders occur. An Eq1 root has the four-spinor
eigenfunction i*phi (+) phi, an Eq2 root has -i*phi (+) phi, where phi is the
two-component solution regular at the cone axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import ScanConfig
from .errors import InvalidInput, NumericalFailure, SimplicityViolation
from .quadrature import panel_nodes, uniform_edges
from .roots import find_bracketed_roots
from .specfun import ferrers_p_ladder, ferrers_p_neg

OMEGA_GUARD = 1e-9
THETA_FLOOR = 1e-8

HALF_SPACE_MESSAGE = (
    "omega = pi/2 is the flat half-space; the fiber reduction used here does not "
    "apply to it, so this aperture is excluded"
)


class Branch(str, Enum):
    Eq1 = "Eq1"
    Eq2 = "Eq2"

    @property
    def phase(self) -> int:
        """+1 for i*phi (+) phi, -1 for -i*phi (+) phi."""
        return 1 if self is Branch.Eq1 else -1


class Sign(str, Enum):
    plus = "plus"
    minus = "minus"

    @property
    def value_int(self) -> int:
        return 1 if self is Sign.plus else -1


def check_omega(omega: float) -> float:
    omega = float(omega)
    if not 0.0 < omega < math.pi:
        raise InvalidInput(f"omega={omega} must lie in (0, pi)")
    if abs(omega - 0.5 * math.pi) < OMEGA_GUARD:
        raise InvalidInput(HALF_SPACE_MESSAGE)
    return omega


@dataclass(frozen=True)
class AngularProblem:
    k: int
    omega: float

    def __post_init__(self):
        if int(self.k) != self.k:
            raise InvalidInput("k must be an integer")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "omega", check_omega(self.omega))

    @property
    def alpha(self) -> float:
        """Coupling k + 1/2 of the flat-measure operator."""
        return self.k + 0.5

    @property
    def orders(self) -> tuple[int, int]:
        """Magnitudes (m_a, m_b) of the orders in the coefficient term and the other term."""
        if self.k >= 0:
            return self.k + 1, self.k
        return -self.k, -self.k - 1


@dataclass(frozen=True)
class EigenvalueRecord:
    lam: float
    branch: Branch
    residual: float


@dataclass
class AngularSpectrum:
    problem: AngularProblem
    window: tuple[float, float]
    records: list[EigenvalueRecord] = field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        return np.array([r.lam for r in self.records])

    def branch_values(self, branch: Branch) -> np.ndarray:
        return np.array([r.lam for r in self.records if r.branch is Branch(branch)])


@dataclass(frozen=True)
class BoundaryMatrix:
    omega: float
    entries: np.ndarray
    xi_plus: np.ndarray
    xi_minus: np.ndarray

    @classmethod
    def from_omega(cls, omega: float) -> "BoundaryMatrix":
        s, c = math.sin(omega), math.cos(omega)
        a = np.array([[1j * s, -1j * c], [-1j * c, -1j * s]])
        # (1, (s-1)/c) and (1, (s+1)/c) rescaled to stay finite near pi/2
        xp = np.array([1.0 + s, -c], dtype=complex)
        xm = np.array([c, 1.0 + s], dtype=complex)
        return cls(omega, a, xp / np.linalg.norm(xp), xm / np.linalg.norm(xm))

    def xi(self, branch: Branch) -> np.ndarray:
        return self.xi_plus if Branch(branch) is Branch.Eq1 else self.xi_minus


# --- characteristic functions -------------------------------------------------


def _combine(problem: AngularProblem, lam, pa, pb):
    """Return (Eq1, Eq2) values from P^{-m_a} and P^{-m_b} at the right degrees."""
    k = problem.k
    if k >= 0:
        t = (lam + k + 1.0) * pa
        return t - pb, t + pb
    t = (lam + k) * pa
    return t + pb, t - pb


def char_values(problem: AngularProblem, lam) -> tuple[np.ndarray, np.ndarray]:
    """Both characteristic functions at an array of lambda values."""
    lam = np.asarray(lam, dtype=float)
    x = math.cos(problem.omega)
    ma, mb = problem.orders
    if problem.k >= 0:
        pa = ferrers_p_neg(lam, ma, x)
        pb = ferrers_p_neg(lam - 1.0, mb, x)
    else:
        pa = ferrers_p_neg(lam - 1.0, ma, x)
        pb = ferrers_p_neg(lam, mb, x)
    return _combine(problem, lam, pa, pb)


def char_fn(problem: AngularProblem, lam, branch: Branch | str):
    f1, f2 = char_values(problem, lam)
    out = f1 if Branch(branch) is Branch.Eq1 else f2
    return out if np.ndim(out) else float(out)


def _ladder_grid(problem: AngularProblem, lo: float, hi: float, n: int):
    """Characteristic values on lam = -1/2 + p/n inside [lo, hi] via degree ladders."""
    p = np.arange(math.ceil((lo + 0.5) * n), math.floor((hi + 0.5) * n) + 1)
    lam = -0.5 + p / n
    x = math.cos(problem.omega)

    def locate(q):
        i, j = np.mod(q, n), np.floor_divide(q, n)
        # negative degrees fold onto -nu-1, which lives in class n-i
        ii = np.where(j >= 0, i, np.where(i == 0, 0, n - i))
        jj = np.where(j >= 0, j, np.where(i == 0, -j, -j - 1))
        return ii, jj

    shift_a, shift_b = (0, -1) if problem.k >= 0 else (-1, 0)
    ia, ja = locate(p + shift_a * n)
    ib, jb = locate(p + shift_b * n)
    steps = int(max(ja.max(initial=0), jb.max(initial=0)))
    bases = -0.5 + np.arange(n) / n
    ma, mb = problem.orders
    ta = ferrers_p_ladder(bases, ma, x, steps)
    tb = ferrers_p_ladder(bases, mb, x, steps)
    f1, f2 = _combine(problem, lam, ta[ia, ja], tb[ib, jb])
    return lam, f1, f2


def _scan(problem: AngularProblem, lo: float, hi: float, step: float):
    n = round(1.0 / step)
    if n >= 1 and abs(n * step - 1.0) < 1e-9:
        lam, f1, f2 = _ladder_grid(problem, lo, hi, n)
        # include the window ends so roots near them are bracketed
        ends = [v for v in (lo, hi) if not np.any(np.isclose(lam, v, rtol=0, atol=1e-13))]
        if ends:
            e1, e2 = char_values(problem, np.array(ends))
            lam = np.concatenate([lam, ends])
            f1, f2 = np.concatenate([f1, e1]), np.concatenate([f2, e2])
            order = np.argsort(lam, kind="stable")
            lam, f1, f2 = lam[order], f1[order], f2[order]
        return lam, f1, f2
    lam = np.append(np.arange(lo, hi, step), hi)
    f1, f2 = char_values(problem, lam)
    return lam, f1, f2


def find_roots(
    problem: AngularProblem,
    branch: Branch | str,
    window: tuple[float, float] = (-25.0, 25.0),
    scan_step: float = 0.005,
    config: ScanConfig | None = None,
    _scanned=None,
) -> list[EigenvalueRecord]:
    """Roots of one characteristic function inside the window, sorted."""
    cfg = config or ScanConfig(window=tuple(window), step=scan_step)
    lo, hi = cfg.window
    branch = Branch(branch)
    lam, f1, f2 = _scanned if _scanned is not None else _scan(problem, lo, hi, cfg.step)
    vals = f1 if branch is Branch.Eq1 else f2
    fn = lambda v: char_fn(problem, np.asarray(v), branch)  # noqa: E731
    roots = find_bracketed_roots(fn, lam, vals, xtol=cfg.xtol, label=f"k={problem.k} {branch.value}")
    out = []
    for r in roots:
        res = abs(char_fn(problem, r, branch))
        if res > cfg.residual_tol:
            raise NumericalFailure(f"root {r} of {branch.value} has residual {res:.3e}")
        out.append(EigenvalueRecord(float(r), branch, float(res)))
    return out


def spectrum(
    problem: AngularProblem,
    window: tuple[float, float] = (-25.0, 25.0),
    config: ScanConfig | None = None,
) -> AngularSpectrum:
    """Eigenvalues of the fiber inside the window (both equations), with checks."""
    cfg = config or ScanConfig(window=tuple(window))
    lo, hi = cfg.window
    scanned = _scan(problem, lo, hi, cfg.step)
    r1 = find_roots(problem, Branch.Eq1, config=cfg, _scanned=scanned)
    r2 = find_roots(problem, Branch.Eq2, config=cfg, _scanned=scanned)
    recs = sorted(r1 + r2, key=lambda r: r.lam)
    for a, b in zip(recs[:-1], recs[1:]):
        if b.lam - a.lam <= cfg.dedup_radius:
            raise SimplicityViolation(
                f"k={problem.k}, omega={problem.omega}: roots {a.lam} ({a.branch.value}) "
                f"and {b.lam} ({b.branch.value}) coincide"
            )
    out = AngularSpectrum(problem, (lo, hi), recs)
    _check_structure(out, cfg)
    return out


def _check_structure(sp: AngularSpectrum, cfg: ScanConfig) -> None:
    lo, hi = sp.window
    margin = 10 * cfg.dedup_radius
    for r in sp.records:
        if r.lam == 0.0:
            raise NumericalFailure("0 reported as an eigenvalue")
    e1 = sp.branch_values(Branch.Eq1)
    e2 = sp.branch_values(Branch.Eq2)
    for v in e1:
        if lo + margin < -v < hi - margin and not np.any(np.abs(e2 + v) <= 1e-8):
            raise NumericalFailure(f"symmetry broken: {v} (Eq1) has no Eq2 partner")
    for v in e2:
        if lo + margin < -v < hi - margin and not np.any(np.abs(e1 + v) <= 1e-8):
            raise NumericalFailure(f"symmetry broken: {v} (Eq2) has no Eq1 partner")


# --- eigenfunctions ------------------------------------------------------------


@dataclass(frozen=True)
class SpinorSample:
    theta: float
    phi: float
    value: np.ndarray


def phi_values(problem: AngularProblem, lam: float, sign: Sign | str, theta) -> np.ndarray:
    """Phi^{+-}_{k,lam}(theta) at azimuth 0, shape (2, n)."""
    s = Sign(sign).value_int
    lp = s * lam
    x = np.cos(np.asarray(theta, dtype=float))
    k = problem.k
    if k >= 0:
        return np.array([ferrers_p_neg(lp - 1.0, k, x), (k - lp + 1.0) * ferrers_p_neg(lp - 1.0, k + 1, x)])
    u = (lp + k) * ferrers_p_neg(lp - 1.0, -k, x)
    v = ferrers_p_neg(lp - 1.0, -k - 1, x)
    return s * np.array([u, v])


def spinor_phase(record: EigenvalueRecord, sign: Sign | str) -> int:
    """Which of +-i multiplies the upper pair in the four-spinor of Phi^{sign}."""
    return Sign(sign).value_int * record.branch.phase


def psi_values(problem: AngularProblem, record: EigenvalueRecord, sign: Sign | str, theta) -> np.ndarray:
    """Four-spinor (p*i*Phi) (+) Phi at azimuth 0, shape (4, n)."""
    ph = phi_values(problem, record.lam, sign, theta)
    p = spinor_phase(record, sign)
    return np.concatenate([1j * p * ph, ph.astype(complex)])


def _validate_theta(problem: AngularProblem, theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float)
    if np.any(t <= 0) or np.any(t > problem.omega * (1 + 1e-14)):
        raise InvalidInput("theta must lie in (0, omega]")
    return np.maximum(t, THETA_FLOOR)


def eigenfunction(
    problem: AngularProblem,
    record: EigenvalueRecord,
    sign: Sign | str,
    theta: float,
    phi: float = 0.0,
    four: bool = False,
) -> SpinorSample:
    """Phi^{+-} (or the four-spinor when ``four``) at (theta, phi)."""
    t = float(_validate_theta(problem, theta))
    k = problem.k
    if four:
        val = psi_values(problem, record, sign, [t])[:, 0]
        ph = np.exp(1j * phi * np.array([k, k + 1, k, k + 1]))
    else:
        val = phi_values(problem, record.lam, sign, [t])[:, 0].astype(complex)
        ph = np.exp(1j * phi * np.array([k, k + 1]))
    return SpinorSample(t, float(phi), val * ph)


# --- structural checks -----------------------------------------------------------


def ode_residual(problem: AngularProblem, lam: float, theta, h: float = 1e-4) -> float:
    """Relative residual of Phi^+ in the first-order system of the weighted fiber.

        (k+1) u - v' - (k+1) cot(t) v = lam u
        u' - k cot(t) u - k v = lam v
    """
    t = np.asarray(theta, dtype=float)
    k = problem.k
    f = lambda tt: phi_values(problem, lam, Sign.plus, tt)  # noqa: E731
    u, v = f(t)
    d = (8 * (f(t + h) - f(t - h)) - (f(t + 2 * h) - f(t - 2 * h))) / (12 * h)
    cot = 1.0 / np.tan(t)
    r1 = (k + 1) * u - d[1] - (k + 1) * cot * v - lam * u
    r2 = d[0] - k * cot * u - k * v - lam * v
    scale = np.max(np.hypot(u, v)) * (1.0 + abs(lam) + abs(k))
    return float(np.max(np.hypot(r1, r2)) / scale)


def boundary_residual(problem: AngularProblem, record: EigenvalueRecord, sign: Sign | str = Sign.plus) -> float:
    """|(Psi1, Psi2) - A (Psi3, Psi4)| / |Psi| at theta = omega."""
    psi = psi_values(problem, record, sign, [problem.omega])[:, 0]
    a = BoundaryMatrix.from_omega(problem.omega).entries
    return float(np.linalg.norm(psi[:2] - a @ psi[2:]) / np.linalg.norm(psi))


def spinor_intertwine_check(problem: AngularProblem, record: EigenvalueRecord, theta_samples) -> float:
    """max |M Phi^+ - Phi^-| and |M Phi^- - Phi^+| relative to max |Phi|.

    M = [[cos t, sin t], [sin t, -cos t]] is the radial Dirac block at azimuth 0.
    """
    t = _validate_theta(problem, theta_samples)
    pp = phi_values(problem, record.lam, Sign.plus, t)
    pm = phi_values(problem, record.lam, Sign.minus, t)
    c, s = np.cos(t), np.sin(t)
    mp = np.array([c * pp[0] + s * pp[1], s * pp[0] - c * pp[1]])
    mm = np.array([c * pm[0] + s * pm[1], s * pm[0] - c * pm[1]])
    scale = max(np.max(np.hypot(*pp)), np.max(np.hypot(*pm)))
    dev = max(np.max(np.hypot(*(mp - pm))), np.max(np.hypot(*(mm - pp))))
    return float(dev / scale)


def inner_product(problem: AngularProblem, ra: EigenvalueRecord, rb: EigenvalueRecord, panels: int = 64, nodes: int = 16) -> complex:
    """<Psi_a, Psi_b> in L^2((0, omega), sin t dt; C^4) for the plus spinors."""
    t, w = panel_nodes(uniform_edges(0.0, problem.omega, panels), nodes)
    pa = psi_values(problem, ra, Sign.plus, t)
    pb = psi_values(problem, rb, Sign.plus, t)
    return complex(np.sum(pa * np.conj(pb), axis=0) @ (w * np.sin(t)))


def orthogonality_defect(problem: AngularProblem, ra: EigenvalueRecord, rb: EigenvalueRecord) -> float:
    ab = inner_product(problem, ra, rb)
    aa = inner_product(problem, ra, ra).real
    bb = inner_product(problem, rb, rb).real
    return abs(ab) / math.sqrt(aa * bb)


def normalization(problem: AngularProblem, record: EigenvalueRecord) -> float:
    """c with ||c * Psi^+|| = 1 (quadrature, no closed form)."""
    return 1.0 / math.sqrt(inner_product(problem, record, record).real)


# --- gap bounds ------------------------------------------------------------------

SQRT3_BOUND = 0.5 * (math.sqrt(3.0) + 1.0)


@dataclass(frozen=True)
class GapReport:
    min_abs_lambda: float
    bound: float
    satisfied: bool
    conjectured: bool
    censored: bool


def gap_bound(problem: AngularProblem) -> tuple[float, bool]:
    """(bound, conjectured) for the smallest |eigenvalue| of the fiber."""
    w, k = problem.omega, problem.k
    bounds = []
    if w < 0.5 * math.pi:
        bounds.append(math.pi / (4 * w) + 0.5)
    if abs(k + 0.5) >= 1.5:
        bounds.append(SQRT3_BOUND)
    if bounds:
        return max(bounds), False
    return 0.5, True


def gap_report(problem: AngularProblem, window=(-25.0, 25.0), sp: AngularSpectrum | None = None) -> GapReport:
    sp = sp or spectrum(problem, window)
    bound, conj = gap_bound(problem)
    vals = np.abs(sp.values)
    if vals.size:
        m, censored = float(vals.min()), False
    else:
        # nothing in the window: only a lower bound is known
        m, censored = float(min(abs(sp.window[0]), abs(sp.window[1]))), True
    return GapReport(m, bound, m >= bound - 1e-9, conj, censored)

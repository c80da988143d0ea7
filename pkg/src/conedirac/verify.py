"""Verification engine: quadrature-based identity checks and cross-validation.

Every check returns a VerificationReport whose ``max_residual`` is a relative,
non-negative defect; ``passed`` is max_residual <= tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .angular import AngularProblem, AngularSpectrum, Branch, spectrum
from .config import ScanConfig, ShootingConfig
from .errors import InvalidInput
from .oracle import oracle_spectrum
from .quadrature import panel_nodes, quadrature, uniform_edges  # noqa: F401  (re-exported)
from .testfunctions import BoundaryAdaptedSpinor, Kind, TestFunction

__all__ = [
    "VerificationReport",
    "angular_form_identity",
    "boundary_term_report",
    "interval_hardy_check",
    "comparison_inequality_check",
    "cross_validate",
    "hausdorff",
    "PerturbationVerdict",
    "perturbation_budget",
    "QuantumDot",
    "quantum_dot_matrix",
    "quantum_dot_residual",
    "quadrature",
]


@dataclass
class VerificationReport:
    check_id: str
    max_residual: float
    tolerance: float
    parameters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "parameters": self.parameters,
        }


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


# --- quadratic form of the angular fiber ----------------------------------------------


def _spinor_nodes(psi: BoundaryAdaptedSpinor, quad_nodes: int, panels: int):
    lo = max(psi.lower_edge(), 0.0)
    if lo <= 0:
        raise InvalidInput("boundary-adapted test function must vanish near theta = 0")
    return panel_nodes(uniform_edges(lo, psi.omega, panels), quad_nodes)


def form_sides(problem: AngularProblem, psi: BoundaryAdaptedSpinor, quad_nodes: int = 16, panels: int = 64):
    """(||(T_k - 1/2) psi||^2, energy side) by composite Gauss-Legendre."""
    t, w = _spinor_nodes(psi, quad_nodes, panels)
    a = problem.alpha
    v, d = psi.eval(t)
    cot = 1.0 / np.tan(t)
    inv_s2 = 1.0 / np.sin(t) ** 2
    lhs = 0.0
    for f, g, df, dg in ((v[0], v[1], d[0], d[1]), (v[2], v[3], d[2], d[3])):
        r1 = a * f - dg - a * cot * g
        r2 = df - a * cot * f - a * g
        lhs += float(np.sum(w * (np.abs(r1) ** 2 + np.abs(r2) ** 2)))
    upper = np.abs(v[0]) ** 2 + np.abs(v[2]) ** 2
    lower = np.abs(v[1]) ** 2 + np.abs(v[3]) ** 2
    rhs = float(np.sum(w * (np.sum(np.abs(d) ** 2, axis=0) + inv_s2 * (a * (a - 1) * upper + a * (a + 1) * lower))))
    return lhs, rhs


def boundary_term(psi: BoundaryAdaptedSpinor) -> tuple[float, float]:
    """B(p1, p2)(omega) + B(p3, p4)(omega) and |psi(omega)|^2."""
    v, _ = psi.eval(np.array([psi.omega]))
    v = v[:, 0]
    cot = 1.0 / math.tan(psi.omega)

    def b(f, g):
        return (2 * f * np.conj(g)).real + cot * abs(f) ** 2 - cot * abs(g) ** 2

    return float(b(v[0], v[1]) + b(v[2], v[3])), float(np.sum(np.abs(v) ** 2))


def _require_adapted(problem: AngularProblem, psi) -> None:
    if not isinstance(psi, BoundaryAdaptedSpinor) or psi.kind is not Kind.boundary_adapted:
        raise InvalidInput("a boundary-adapted four-component test function is required")
    if abs(psi.omega - problem.omega) > 1e-14:
        raise InvalidInput("test function built for a different aperture")
    if psi.endpoint_defect() > 1e-12:
        raise InvalidInput("test function violates the endpoint condition")


def angular_form_identity(
    problem: AngularProblem, psi: BoundaryAdaptedSpinor, quad_nodes: int = 16, tol: float = 1e-6
) -> VerificationReport:
    _require_adapted(problem, psi)
    lhs, rhs = form_sides(problem, psi, quad_nodes)
    bsum, bscale = boundary_term(psi)
    return VerificationReport(
        "form_identity",
        _rel(lhs, rhs),
        tol,
        {"k": problem.k, "omega": problem.omega, "lhs": lhs, "rhs": rhs, "boundary_sum": bsum, "boundary_scale": bscale},
    )


def boundary_term_report(problem: AngularProblem, psi: BoundaryAdaptedSpinor, tol: float = 1e-9) -> VerificationReport:
    _require_adapted(problem, psi)
    bsum, bscale = boundary_term(psi)
    res = 0.0 if bscale == 0 else abs(bsum) / bscale
    return VerificationReport("boundary_cancellation", res, tol, {"k": problem.k, "omega": problem.omega, "boundary_sum": bsum})


# --- Hardy inequality on (0, omega) ---------------------------------------------------


def hardy_interval_terms(omega: float, f: TestFunction, quad_nodes: int = 16, panels: int = 64):
    """(int |f'|^2, int |f|^2 / (4 sin^2), pi^2/(16 omega^2) int |f|^2)."""
    lo, hi = f.edges()
    if lo <= 0 or hi > omega * (1 + 1e-14):
        raise InvalidInput("test function must be supported in (0, omega]")
    t, w = panel_nodes(uniform_edges(lo, hi, panels), quad_nodes)
    v, d = f.eval(t)
    energy = float(np.sum(w * np.abs(d) ** 2))
    hardy = 0.25 * float(np.sum(w * np.abs(v) ** 2 / np.sin(t) ** 2))
    poincare = math.pi**2 / (16 * omega**2) * float(np.sum(w * np.abs(v) ** 2))
    return energy, hardy, poincare


def interval_hardy_check(omega: float, f: TestFunction, quad_nodes: int = 16, tol: float = 1e-9) -> VerificationReport:
    """int |f'|^2 - (1/4) int |f|^2/sin^2 - pi^2/(16 omega^2) int |f|^2 >= 0 for omega <= pi/2."""
    omega = float(omega)
    if not 0 < omega <= 0.5 * math.pi + 1e-15:
        raise InvalidInput("the interval Hardy inequality needs 0 < omega <= pi/2")
    energy, hardy, poincare = hardy_interval_terms(omega, f, quad_nodes)
    residual = energy - hardy - poincare
    scale = max(energy, hardy + poincare, 1e-300)
    return VerificationReport(
        "hardy_interval",
        max(0.0, -residual / scale),
        tol,
        {"omega": omega, "residual": residual, "scale": scale},
    )


def comparison_inequality_check(omega: float, samples: int = 2000, tol: float = 1e-12) -> VerificationReport:
    """(pi/(2 omega))^2 / sin^2(pi t/(2 omega)) >= 1/sin^2 t on (0, omega), omega <= pi/2."""
    t = np.linspace(0, omega, samples + 2)[1:-1]
    big = (math.pi / (2 * omega)) ** 2 / np.sin(math.pi * t / (2 * omega)) ** 2
    small = 1.0 / np.sin(t) ** 2
    viol = float(np.max(np.maximum(0.0, small - big) / small))
    return VerificationReport("comparison_inequality", viol, tol, {"omega": omega, "samples": samples})


# --- dual-solver agreement --------------------------------------------------------------


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return math.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _unmatched(a, b, tol):
    if b.size == 0:
        return [float(x) for x in a]
    return [float(x) for x in a if np.min(np.abs(b - x)) > tol]


def compare_spectra(ref: AngularSpectrum, other: AngularSpectrum, tol: float, edge: float = 1e-6) -> VerificationReport:
    """Branch-wise Hausdorff distance, ignoring roots within ``edge`` of the window ends."""
    lo, hi = ref.window
    worst, unmatched = 0.0, {}
    for br in Branch:
        a, b = ref.branch_values(br), other.branch_values(br)
        a = a[(a > lo + edge) & (a < hi - edge)]
        b = b[(b > lo + edge) & (b < hi - edge)]
        worst = max(worst, hausdorff(a, b))
        miss = _unmatched(a, b, tol) + _unmatched(b, a, tol)
        if miss:
            unmatched[br.value] = miss
    return VerificationReport(
        "cross_validate",
        worst,
        tol,
        {
            "k": ref.problem.k,
            "omega": ref.problem.omega,
            "window": list(ref.window),
            "count": int(ref.values.size),
            "unmatched": unmatched,
        },
    )


def cross_validate(
    k: int,
    omega: float,
    window: tuple[float, float] = (-10.0, 10.0),
    tol: float = 1e-5,
    scan: ScanConfig | None = None,
    shooting: ShootingConfig | None = None,
) -> VerificationReport:
    """Ferrers-based roots against shooting-oracle roots on the same window."""
    problem = AngularProblem(k, omega)
    cfg = scan or ScanConfig(window=tuple(window))
    ref = spectrum(problem, window, cfg if tuple(cfg.window) == tuple(window) else ScanConfig(window=tuple(window)))
    other = oracle_spectrum(k, problem.omega, window, shooting)
    return compare_spectra(ref, other, tol)


# --- perturbation budget and quantum dots ------------------------------------------------


class PerturbationVerdict(str, Enum):
    SelfAdjointClosure = "SelfAdjointClosure"
    EssentiallySelfAdjoint = "EssentiallySelfAdjoint"
    NoGuarantee = "NoGuarantee"


def perturbation_budget(omega: float, nu: float) -> PerturbationVerdict:
    """Classify a Hermitian potential with sup |x| |V(x)| = nu on a convex cone."""
    omega, nu = float(omega), float(nu)
    if not 0 < omega < 0.5 * math.pi:
        raise InvalidInput("the perturbation budget needs a convex cone, 0 < omega < pi/2")
    if not (nu >= 0 and math.isfinite(nu)):
        raise InvalidInput("nu must be a finite non-negative number")
    budget = math.pi / (4 * omega)
    if abs(nu - budget) <= 1e-12 * max(1.0, budget):
        return PerturbationVerdict.EssentiallySelfAdjoint
    return PerturbationVerdict.SelfAdjointClosure if nu < budget else PerturbationVerdict.NoGuarantee


ZIGZAG_MESSAGE = (
    "theta = pi/2 and 3pi/2 are the zig-zag boundary conditions; they behave "
    "differently and are excluded from the equivalence construction"
)


class QuantumDotEquivalence(str, Enum):
    MITplus = "MITplus"
    MITminus = "MITminus"


@dataclass(frozen=True)
class QuantumDot:
    theta: float
    M: np.ndarray
    equivalence: QuantumDotEquivalence

    def to_dict(self) -> dict:
        return {"theta": self.theta, "M": self.M.tolist(), "equivalence": self.equivalence.value}


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (math.isfinite(theta) and 0 <= theta < 2 * math.pi):
        raise InvalidInput("theta must lie in [0, 2 pi)")
    if min(abs(theta - 0.5 * math.pi), abs(theta - 1.5 * math.pi)) < 1e-9:
        raise InvalidInput(ZIGZAG_MESSAGE)
    return theta


def quantum_dot_matrix(theta: float) -> QuantumDot:
    """M_theta = diag(p, p, q, q), p = sqrt(|cos|/(1+sin)), q = sqrt(|cos|/(1-sin))."""
    theta = _check_theta(theta)
    s, c = math.sin(theta), math.cos(theta)
    p = math.sqrt(abs(c) / (1 + s))
    q = math.sqrt(abs(c) / (1 - s))
    m = np.diag([p, p, q, q])
    assert np.all(np.diag(m) > 0) and np.allclose(m, m.T)
    eq = QuantumDotEquivalence.MITminus if 0.5 * math.pi < theta < 1.5 * math.pi else QuantumDotEquivalence.MITplus
    return QuantumDot(theta, m, eq)


_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_Z2 = np.zeros((2, 2), dtype=complex)
DIRAC_ALPHA = tuple(np.block([[_Z2, s], [s, _Z2]]) for s in _SIGMA)
DIRAC_BETA = np.diag([1, 1, -1, -1]).astype(complex)


def quantum_dot_residual(theta: float, normal) -> float:
    """Defect of the equivalence between quantum-dot and MIT conditions at one boundary point.

    Checks M alpha_j M = alpha_j (the differential expression is preserved)
    and that M^{-1} maps the MIT(+-) boundary subspace onto the quantum-dot one.
    """
    qd = quantum_dot_matrix(theta)
    nu = np.asarray(normal, dtype=float)
    nu = nu / np.linalg.norm(nu)
    m, minv = qd.M, np.linalg.inv(qd.M)
    res = max(float(np.linalg.norm(m @ a @ m - a)) for a in DIRAC_ALPHA)
    an = sum(n * a for n, a in zip(nu, DIRAC_ALPHA))
    b = 1j * an @ DIRAC_BETA
    eta = 1.0 if qd.equivalence is QuantumDotEquivalence.MITplus else -1.0
    proj = 0.5 * (np.eye(4) + eta * b)  # MIT(+-) trace space: b v = eta v
    cond = np.eye(4) - math.sin(qd.theta) * DIRAC_BETA - math.cos(qd.theta) * b
    res = max(res, float(np.linalg.norm(cond @ minv @ proj)) / float(np.linalg.norm(minv)))
    return res

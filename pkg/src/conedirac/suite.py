"""The verification matrix, grouped so callers can run subsets.

Each group is a function (tol_override, seed) -> list[VerificationReport].
Parameter grids are fixed module constants so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .angular import (
    AngularProblem,
    Branch,
    Sign,
    boundary_residual,
    find_roots,
    gap_report,
    ode_residual,
    orthogonality_defect,
    spectrum,
    spinor_intertwine_check,
)
from .config import ScanConfig
from .halfline import (
    HalflineProblem,
    UnclassifiedCase,
    classify,
    deficiency_norm_sq,
    deficiency_residual,
    fiber_hardy_terms,
)
from .roots import illinois
from .specfun import Identity, bessel_i, bessel_k, ferrers_p, identity_sides
from .testfunctions import random_boundary_adapted, random_bump, random_poly_bump
from .verify import (
    PerturbationVerdict,
    VerificationReport,
    angular_form_identity,
    boundary_term_report,
    comparison_inequality_check,
    cross_validate,
    hausdorff,
    interval_hardy_check,
    perturbation_budget,
    quantum_dot_residual,
)

PI = math.pi
GAP_KS = tuple(range(-3, 3))
GAP_OMEGAS = tuple(f * PI for f in (0.1, 0.2, 0.3, 0.4, 0.45))
WIDE_OMEGAS = tuple(f * PI for f in (0.6, 0.8))
CROSS_EXTRA = ((0, 0.7 * PI), (-1, 0.7 * PI))
CROSS_WINDOW = (-15.0, 15.0)
FORM_OMEGAS = tuple(f * PI for f in (0.15, 0.3, 0.45, 0.6, 0.8))
REFLECTION_OMEGAS = tuple(f * PI for f in (0.2, 0.4, 0.6, 0.75, 0.9))
EIGEN_CASES = ((0, PI / 3), (-1, PI / 3), (1, 0.4 * PI), (-2, 0.6 * PI))
FIBER_LAMBDAS = (0.7, -0.7, 1.5, -1.5, 3.0, -3.0)
QD_THETAS = (0.0, PI / 3, 0.9 * PI, PI, 1.2 * PI, 1.7 * PI, 1.99 * PI)


def _t(default: float, override: float | None) -> float:
    return default if override is None else override


def _record(check_id, value, tol, **params) -> VerificationReport:
    return VerificationReport(check_id, float(value), float(tol), params)


# --- special functions ---------------------------------------------------------------------


def laplace_cone_angle() -> float:
    """Aperture where P_{1/2}(cos w) vanishes, by bracketed refinement on (0.7pi, 0.75pi)."""
    f = lambda w: np.array([ferrers_p(0.5, 0, math.cos(float(v))) for v in np.atleast_1d(w)])  # noqa: E731
    a, b = 0.7 * PI, 0.75 * PI
    root, ok = illinois(f, [a], [b], f(a), f(b), xtol=1e-13)
    return float(root[0])


BESSEL_CLOSED = {
    "K_1/2": (lambda x: bessel_k(0.5, x), lambda x: math.sqrt(PI / (2 * x)) * math.exp(-x)),
    "K_3/2": (lambda x: bessel_k(1.5, x), lambda x: math.sqrt(PI / (2 * x)) * math.exp(-x) * (1 + 1 / x)),
    "I_1/2": (lambda x: bessel_i(0.5, x), lambda x: math.sqrt(2 / (PI * x)) * math.sinh(x)),
    "I_3/2": (lambda x: bessel_i(1.5, x), lambda x: math.sqrt(2 / (PI * x)) * (math.cosh(x) - math.sinh(x) / x)),
}


def identity_points(rng: np.random.Generator, n: int = 100):
    for _ in range(n):
        yield float(rng.uniform(-6, 6)), int(rng.integers(-3, 3)), float(rng.uniform(-0.95, 0.95))


def identity_residual(identity: Identity, nu: float, mu: int, x: float) -> float:
    lhs, rhs = identity_sides(identity, nu, mu, x)
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def group_specfun(tol: float | None = None, seed: int = 7) -> list[VerificationReport]:
    out = []
    w = laplace_cone_angle()
    out.append(_record("laplace_cone_root", abs(w / PI - 0.726), _t(1e-3, tol), omega_over_pi=w / PI))
    rng = np.random.default_rng(seed)
    for ident in Identity:
        worst = max(identity_residual(ident, *p) for p in identity_points(rng))
        out.append(_record("ferrers_identity", worst, _t(1e-8, tol), identity=ident.value, points=100))
    xs = (0.05, 0.3, 1.0, 2.5, 7.0, 20.0)
    for name, (num, exact) in BESSEL_CLOSED.items():
        worst = max(abs(float(num(x)) - exact(x)) / abs(exact(x)) for x in xs)
        out.append(_record("bessel_closed_form", worst, _t(1e-10, tol), function=name))
    return out


# --- spectra -------------------------------------------------------------------------------


def _inner(vals: np.ndarray, window, margin: float = 1e-6) -> np.ndarray:
    lo, hi = window
    return vals[(vals > lo + margin) & (vals < hi - margin)]


def group_symmetry(tol: float | None = None, seed: int = 0) -> list[VerificationReport]:
    out = []
    window = (-25.0, 25.0)
    for k in GAP_KS:
        for w in GAP_OMEGAS + WIDE_OMEGAS:
            sp = spectrum(AngularProblem(k, w), window)
            e1, e2 = _inner(sp.branch_values(Branch.Eq1), window), _inner(sp.branch_values(Branch.Eq2), window)
            out.append(_record("branch_negation", hausdorff(-e1, e2), _t(1e-8, tol), k=k, omega=w, count=int(e1.size)))
    for w in REFLECTION_OMEGAS:
        z0 = _inner(spectrum(AngularProblem(0, w), window).values, window)
        zm = _inner(spectrum(AngularProblem(-1, w), window).values, window)
        out.append(_record("index_reflection", hausdorff(zm, -z0), _t(1e-9, tol), omega=w, count=int(z0.size)))
    return out


def gap_cases():
    for k in GAP_KS:
        for w in GAP_OMEGAS:
            yield k, w
    for k in GAP_KS:
        if abs(k + 0.5) >= 1.5:
            for w in WIDE_OMEGAS:
                yield k, w


def group_gap(tol: float | None = None, seed: int = 0) -> list[VerificationReport]:
    out = []
    for k, w in gap_cases():
        rep = gap_report(AngularProblem(k, w))
        out.append(
            _record(
                "gap_bound",
                max(0.0, rep.bound - rep.min_abs_lambda),
                _t(1e-9, tol),
                k=k,
                omega=w,
                min_abs_lambda=rep.min_abs_lambda,
                bound=rep.bound,
            )
        )
    return out


def cross_cases():
    yield from ((k, w) for k, w in gap_cases())
    yield from CROSS_EXTRA


def group_cross(tol: float | None = None, seed: int = 0) -> list[VerificationReport]:
    return [cross_validate(k, w, CROSS_WINDOW, _t(1e-5, tol)) for k, w in cross_cases()]


# --- quadratic form and Hardy ----------------------------------------------------------------


def group_form(tol: float | None = None, seed: int = 11, per_pair: int = 20) -> list[VerificationReport]:
    rng = np.random.default_rng(seed)
    out = []
    for k in GAP_KS:
        for w in FORM_OMEGAS:
            pr = AngularProblem(k, w)
            worst_f = worst_b = 0.0
            for _ in range(per_pair):
                psi = random_boundary_adapted(rng, pr)
                worst_f = max(worst_f, angular_form_identity(pr, psi).max_residual)
                worst_b = max(worst_b, boundary_term_report(pr, psi).max_residual)
            out.append(_record("form_identity", worst_f, _t(1e-6, tol), k=k, omega=w, samples=per_pair))
            out.append(_record("boundary_cancellation", worst_b, _t(1e-9, tol), k=k, omega=w, samples=per_pair))
    return out


def random_interval_function(rng: np.random.Generator, omega: float, i: int):
    """Alternate compactly supported bumps with functions free at omega."""
    if i % 3 == 0:
        return random_bump(rng, 1e-3 * omega, omega)
    return random_poly_bump(rng, 0.0, omega, degree=4, free_right=bool(i % 3 == 1))


def hardy_interval_worst(n: int = 500, seed: int = 13) -> tuple[float, float]:
    """(worst relative violation, worst signed relative residual) over n random cases."""
    rng = np.random.default_rng(seed)
    worst, low = 0.0, math.inf
    for i in range(n):
        w = float(rng.uniform(0.05, 0.5)) * PI
        if i % 10 == 0:
            w = 0.5 * PI
        rep = interval_hardy_check(w, random_interval_function(rng, w, i))
        worst = max(worst, rep.max_residual)
        low = min(low, rep.parameters["residual"] / rep.parameters["scale"])
    return worst, low


def fiber_hardy_worst(n: int = 200, seed: int = 17) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    worst, low = 0.0, math.inf
    for i in range(n):
        lo = float(rng.uniform(0.01, 2.0))
        hi = lo * float(rng.uniform(1.5, 50.0))
        psi = random_bump(rng, lo, hi, n=3) if i % 2 else random_poly_bump(rng, lo, hi, degree=5)
        for lam in FIBER_LAMBDAS:
            for s in Sign:
                lhs, rhs = fiber_hardy_terms(lam, s, psi)
                rel = (lhs - rhs) / max(lhs, rhs, 1e-300)
                worst = max(worst, -rel)
                low = min(low, rel)
    return max(worst, 0.0), low


def group_hardy(tol: float | None = None, seed: int = 13) -> list[VerificationReport]:
    worst, low = hardy_interval_worst(500, seed)
    out = [_record("hardy_interval", worst, _t(1e-9, tol), samples=500, smallest_relative_margin=low)]
    worst, low = fiber_hardy_worst(200, seed + 4)
    out.append(_record("hardy_fiber", worst, _t(1e-9, tol), samples=200, smallest_relative_margin=low))
    for w in (0.05 * PI, 0.25 * PI, 0.4 * PI, 0.5 * PI):
        out.append(comparison_inequality_check(w, tol=_t(1e-12, tol)))
    return out


# --- half-line fibers --------------------------------------------------------------------------

CLASSIFICATION_TABLE = (
    (0.5, 1.0, (1, 1), False),
    (-0.5, PI / 3, (1, 1), False),
    (1.5, 2.0, (1, 1), False),
    (1.5, math.inf, (0, 0), True),
    (-2.5, math.inf, (0, 0), True),
    (0.5, math.inf, (0, 0), True),
    (0.2, math.inf, (1, 1), False),
    (-0.3, math.inf, (1, 1), False),
    (0.0, math.inf, (1, 1), False),
)


def classification_mismatches() -> list[str]:
    bad = []
    for alpha, b, idx, esa in CLASSIFICATION_TABLE:
        rep = classify(HalflineProblem(alpha, b))
        if rep.indices != idx or rep.essentially_self_adjoint != esa:
            bad.append(f"alpha={alpha}, b={b}")
        if abs(alpha) > 0.5 and b == math.inf and "H¹₀" not in rep.domain_note:
            bad.append(f"alpha={alpha}: missing domain note")
    try:
        classify(HalflineProblem(0.2, 1.0))
        bad.append("alpha=0.2, b=1 should be unclassified")
    except UnclassifiedCase:
        pass
    return bad


def group_halfline(tol: float | None = None, seed: int = 0) -> list[VerificationReport]:
    bad = classification_mismatches()
    out = [_record("classification_table", len(bad), 0.0, mismatches=bad)]
    x = np.linspace(0.2, 12.0, 30)
    for alpha in (-0.45, -0.2, 0.0, 0.3, 0.45):
        for s in Sign:
            out.append(_record("deficiency_ode", deficiency_residual(alpha, s, x), _t(1e-5, tol), alpha=alpha, sign=s.value))
        norm, tail = deficiency_norm_sq(alpha, Sign.plus)
        out.append(_record("deficiency_tail", tail / norm, _t(1e-10, tol), alpha=alpha, norm_sq=norm))
    return out


# --- eigenfunctions -----------------------------------------------------------------------------


def smallest_records(problem: AngularProblem, count: int = 5, window=(-15.0, 15.0)):
    sp = spectrum(problem, window)
    return sorted(sp.records, key=lambda r: (abs(r.lam), r.lam))[:count]


def group_eigen(tol: float | None = None, seed: int = 0) -> list[VerificationReport]:
    out = []
    for k, w in EIGEN_CASES:
        pr = AngularProblem(k, w)
        recs = smallest_records(pr)
        theta = np.linspace(0.05 * w, 0.98 * w, 25)
        ode = max(ode_residual(pr, r.lam, theta) for r in recs)
        bc = max(boundary_residual(pr, r, s) for r in recs for s in Sign)
        inter = max(spinor_intertwine_check(pr, r, theta) for r in recs)
        orth = max(orthogonality_defect(pr, a, b) for a, b in combinations(recs, 2))
        params = {"k": k, "omega": w, "lambdas": [r.lam for r in recs]}
        out.append(_record("eigen_ode", ode, _t(1e-5, tol), **params))
        out.append(_record("eigen_boundary", bc, _t(1e-8, tol), **params))
        out.append(_record("eigen_intertwining", inter, _t(1e-8, tol), **params))
        out.append(_record("eigen_orthogonality", orth, _t(1e-6, tol), **params))
    return out


# --- quantum dots and perturbations ----------------------------------------------------------------

PERTURBATION_TABLE = (
    (PI / 4, 0.9, PerturbationVerdict.SelfAdjointClosure),
    (PI / 4, 1.0, PerturbationVerdict.EssentiallySelfAdjoint),
    (PI / 4, 1.1, PerturbationVerdict.NoGuarantee),
    (PI / 6, 1.5, PerturbationVerdict.EssentiallySelfAdjoint),
    (0.4 * PI, 0.3, PerturbationVerdict.SelfAdjointClosure),
)


def group_quantumdot(tol: float | None = None, seed: int = 5) -> list[VerificationReport]:
    rng = np.random.default_rng(seed)
    worst = max(quantum_dot_residual(th, rng.normal(size=3)) for th in QD_THETAS for _ in range(5))
    out = [_record("quantum_dot_equivalence", worst, _t(1e-12, tol), thetas=list(QD_THETAS))]
    bad = [f"{w},{nu}" for w, nu, v in PERTURBATION_TABLE if perturbation_budget(w, nu) is not v]
    out.append(_record("perturbation_budget", len(bad), 0.0, mismatches=bad))
    return out


# --- Z_0 against the aperture ----------------------------------------------------------------------


def figure1_grid(points: int = 200, lo: float = 0.05, hi: float = 0.95, notch: float = 0.01) -> np.ndarray:
    """Apertures (radians) spread evenly over [lo, hi] pi minus the open notch around pi/2."""
    if points < 2:
        raise ValueError("need at least two grid points")
    left, right = 0.5 - 0.5 * notch - lo, hi - (0.5 + 0.5 * notch)
    total = left + right
    s = np.linspace(0.0, total, points)
    f = np.where(s <= left, lo + s, 0.5 + 0.5 * notch + (s - left))
    return f * PI


@dataclass(frozen=True)
class Figure1Point:
    omega: float
    lam: float
    residual: float


def z0_points(omega: float, window=(-10.0, 10.0)) -> list[Figure1Point]:
    """Z_0 (the Eq1 roots for k = 0) inside the window."""
    pr = AngularProblem(0, omega)
    recs = find_roots(pr, Branch.Eq1, config=ScanConfig(window=tuple(window)))
    return [Figure1Point(omega, r.lam, r.residual) for r in recs]


GROUPS: dict[str, Callable[..., list[VerificationReport]]] = {
    "specfun": group_specfun,
    "symmetry": group_symmetry,
    "gap": group_gap,
    "cross": group_cross,
    "form": group_form,
    "hardy": group_hardy,
    "halfline": group_halfline,
    "eigen": group_eigen,
    "quantumdot": group_quantumdot,
}

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conedirac import verify
from conedirac.angular import AngularProblem, BoundaryMatrix
from conedirac.errors import InvalidInput
from conedirac.quadrature import quadrature
from conedirac.testfunctions import (
    BoundaryAdaptedSpinor,
    Kind,
    TestFunction,
    random_boundary_adapted,
    random_bump,
    random_poly_bump,
    smooth_step,
    zero_spinor,
)
from conedirac.verify import (
    PerturbationVerdict,
    QuantumDotEquivalence,
    ZIGZAG_MESSAGE,
    angular_form_identity,
    boundary_term_report,
    comparison_inequality_check,
    compare_spectra,
    cross_validate,
    hausdorff,
    interval_hardy_check,
    perturbation_budget,
    quantum_dot_matrix,
    quantum_dot_residual,
)

PI = math.pi


# --- test functions ---------------------------------------------------------------------


def test_smooth_step_values():
    x = np.array([0.0, 1.0, 1.5, 2.0, 3.0])
    v, d = smooth_step(x, 1.0, 2.0)
    np.testing.assert_allclose(v[[0, 1, 3, 4]], [0, 0, 1, 1])
    assert v[2] == pytest.approx(0.5)
    h = 1e-6
    fd = (smooth_step(1.3 + h, 1.0, 2.0)[0] - smooth_step(1.3 - h, 1.0, 2.0)[0]) / (2 * h)
    assert float(smooth_step(1.3, 1.0, 2.0)[1]) == pytest.approx(float(fd), rel=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_scalar_test_function_derivatives(seed):
    rng = np.random.default_rng(seed)
    for f in (random_bump(rng, 0.2, 2.0), random_poly_bump(rng, 0.2, 2.0)):
        lo, hi = f.edges()
        x = np.linspace(lo, hi, 13)[1:-1]
        h = 1e-6
        fd = (f.value(x + h) - f.value(x - h)) / (2 * h)
        np.testing.assert_allclose(f.deriv(x), fd, atol=1e-5 * max(1.0, np.abs(fd).max()))
        assert np.all(f.value(np.array([lo - 1e-3, hi + 1e-3])) == 0)


@pytest.mark.parametrize("seed", range(10))
def test_boundary_adapted_endpoint(seed):
    rng = np.random.default_rng(seed)
    w = float(rng.uniform(0.1, 0.95)) * PI
    psi = random_boundary_adapted(rng, w)
    assert psi.endpoint_defect() <= 1e-12
    assert psi.lower_edge() > 0


# --- quadratic form ------------------------------------------------------------------------


@pytest.mark.parametrize("k", [-2, -1, 0, 1])
@pytest.mark.parametrize("frac", [0.15, 0.45, 0.6, 0.8])
def test_form_identity(k, frac):
    rng = np.random.default_rng([k + 5, int(frac * 100)])
    pr = AngularProblem(k, frac * PI)
    for _ in range(3):
        psi = random_boundary_adapted(rng, pr)
        rep = angular_form_identity(pr, psi)
        assert rep.passed and rep.max_residual <= 1e-6
        assert boundary_term_report(pr, psi).max_residual <= 1e-9


def test_form_identity_zero_function():
    pr = AngularProblem(0, 1.0)
    rep = angular_form_identity(pr, zero_spinor(1.0))
    assert rep.max_residual == 0.0 and rep.parameters["lhs"] == 0.0


def test_form_identity_rejects_non_adapted():
    pr = AngularProblem(0, 1.0)
    rng = np.random.default_rng(0)
    with pytest.raises(InvalidInput):
        angular_form_identity(pr, random_bump(rng, 0.1, 1.0))
    psi = random_boundary_adapted(rng, 1.0)
    with pytest.raises(InvalidInput):
        angular_form_identity(AngularProblem(0, 1.1), psi)
    # break the endpoint relation by dropping the cutoff correction
    bad = BoundaryAdaptedSpinor(1.0, psi.comps, (1.0 + 1e-9, 1.0 + 2e-9))
    if bad.endpoint_defect() > 1e-12:
        with pytest.raises(InvalidInput):
            angular_form_identity(pr, bad)


@given(st.floats(0.05, 3.09), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_boundary_cancellation_property(w, a, b, c, d):
    # B(p1,p2) + B(p3,p4) = 0 whenever (p1,p2) = A (p3,p4) at omega
    lower = np.array([a + 1j * b, c + 1j * d])
    upper = BoundaryMatrix.from_omega(w).entries @ lower
    cot = 1 / math.tan(w)

    def bt(f, g):
        return (2 * f * np.conj(g)).real + cot * abs(f) ** 2 - cot * abs(g) ** 2

    total = bt(*upper) + bt(*lower)
    assert abs(total) <= 1e-9 * max(1.0, cot) * max(1.0, np.sum(np.abs(lower) ** 2))


# --- Hardy on an interval --------------------------------------------------------------------


@pytest.mark.parametrize("w", [PI / 2, PI / 4, 0.1])
def test_hardy_interval(w):
    rng = np.random.default_rng(int(100 * w))
    for i in range(30):
        if i % 2:
            f = random_bump(rng, 1e-3 * w, w)
        else:
            f = random_poly_bump(rng, 0.0, w, degree=4, free_right=True)
        assert interval_hardy_check(w, f).passed


def test_hardy_interval_concentrated_near_endpoint():
    w = PI / 2
    f = TestFunction(Kind.poly_bump, (w, 0.05, 1.0, 0.0), (0.0, w))
    rep = interval_hardy_check(w, f)
    assert rep.passed and rep.parameters["residual"] > 0


def test_hardy_interval_rejects_wide_aperture():
    f = random_bump(np.random.default_rng(0), 0.1, 1.0)
    with pytest.raises(InvalidInput):
        interval_hardy_check(2.0, f)
    with pytest.raises(InvalidInput):
        interval_hardy_check(0.5, f)  # support sticks out of (0, omega]


@pytest.mark.parametrize("w", [0.1, PI / 4, PI / 2])
def test_comparison_inequality(w):
    # equality holds identically at omega = pi/2, so allow rounding
    assert comparison_inequality_check(w).max_residual <= 1e-12


# --- cross-validation -------------------------------------------------------------------------


def test_hausdorff():
    assert hausdorff([], []) == 0.0
    assert hausdorff([1.0], []) == math.inf
    assert hausdorff([0.0, 1.0], [0.1]) == pytest.approx(0.9)


@pytest.mark.parametrize("k, w", [(0, PI / 3), (-2, 0.6 * PI), (1, 0.2 * PI)])
def test_cross_validate(k, w):
    rep = cross_validate(k, w, (-10, 10), tol=1e-5)
    assert rep.passed and rep.parameters["unmatched"] == {}
    assert rep.parameters["count"] > 0


def test_cross_validate_too_strict():
    rep = cross_validate(0, PI / 3, (-10, 10), tol=1e-14)
    assert not rep.passed


def test_compare_spectra_reports_missing():
    from conedirac.angular import spectrum

    a = spectrum(AngularProblem(0, 1.0), (-10, 10))
    b = spectrum(AngularProblem(0, 1.0), (-5, 5))
    rep = compare_spectra(a, b, 1e-5)
    assert not rep.passed and rep.parameters["unmatched"]


# --- perturbations and quantum dots ------------------------------------------------------------


@pytest.mark.parametrize(
    "w, nu, verdict",
    [
        (PI / 4, 0.9, PerturbationVerdict.SelfAdjointClosure),
        (PI / 4, 1.0, PerturbationVerdict.EssentiallySelfAdjoint),
        (PI / 4, 1.1, PerturbationVerdict.NoGuarantee),
        (PI / 6, 1.5, PerturbationVerdict.EssentiallySelfAdjoint),
        (0.4 * PI, 0.0, PerturbationVerdict.SelfAdjointClosure),
    ],
)
def test_perturbation_budget(w, nu, verdict):
    assert perturbation_budget(w, nu) is verdict


def test_perturbation_budget_validation():
    for w in (PI / 2, 2.0, 0.0):
        with pytest.raises(InvalidInput):
            perturbation_budget(w, 0.5)
    with pytest.raises(InvalidInput):
        perturbation_budget(0.5, -1.0)


@pytest.mark.parametrize("theta, eq", [(0.0, QuantumDotEquivalence.MITplus), (PI, QuantumDotEquivalence.MITminus)])
def test_quantum_dot_identity_cases(theta, eq):
    qd = quantum_dot_matrix(theta)
    np.testing.assert_allclose(qd.M, np.eye(4), atol=1e-15)
    assert qd.equivalence is eq


def test_quantum_dot_pi_over_three():
    qd = quantum_dot_matrix(PI / 3)
    s = math.sqrt(3) / 2
    np.testing.assert_allclose(np.diag(qd.M), [math.sqrt(0.5 / (1 + s))] * 2 + [math.sqrt(0.5 / (1 - s))] * 2, rtol=1e-15)
    assert qd.equivalence is QuantumDotEquivalence.MITplus
    assert qd.to_dict()["equivalence"] == "MITplus"


@pytest.mark.parametrize("theta", [PI / 2, 1.5 * PI])
def test_quantum_dot_zigzag_rejected(theta):
    with pytest.raises(InvalidInput, match="zig-zag"):
        quantum_dot_matrix(theta)
    assert "zig-zag" in ZIGZAG_MESSAGE


@given(
    st.floats(0, 2 * PI, exclude_max=True).filter(lambda t: min(abs(t - PI / 2), abs(t - 1.5 * PI)) > 1e-3),
    st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(lambda v: np.linalg.norm(v) > 1e-3),
)
def test_quantum_dot_equivalence_property(theta, normal):
    assert quantum_dot_residual(theta, normal) <= 1e-12 * max(1.0, np.linalg.norm(quantum_dot_matrix(theta).M) ** 2)


def test_quadrature_reexport():
    assert verify.quadrature is quadrature

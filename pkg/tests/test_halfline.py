import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conedirac.angular import AngularProblem, Sign, spectrum
from conedirac.errors import InvalidInput
from conedirac.halfline import (
    HalflineProblem,
    UnclassifiedCase,
    UnderResolved,
    classify,
    deficiency_function,
    deficiency_norm_sq,
    deficiency_residual,
    dirac_fiber_apply,
    fiber_hardy_residual,
    fiber_hardy_terms,
)
from conedirac.suite import CLASSIFICATION_TABLE, FIBER_LAMBDAS
from conedirac.testfunctions import Kind, TestFunction, random_bump, random_poly_bump

PI = math.pi


@pytest.mark.parametrize("alpha, b, idx, esa", CLASSIFICATION_TABLE)
def test_classification_table(alpha, b, idx, esa):
    rep = classify(HalflineProblem(alpha, b))
    assert rep.indices == idx and rep.essentially_self_adjoint == esa
    if abs(alpha) > 0.5 and b == math.inf:
        assert "H¹₀" in rep.domain_note
    assert rep.to_dict()["indices"] == list(idx)


def test_unclassified_small_alpha_finite_interval():
    with pytest.raises(UnclassifiedCase):
        classify(HalflineProblem(0.2, 1.0))
    with pytest.raises(InvalidInput):
        HalflineProblem(0.2, -1.0)
    with pytest.raises(InvalidInput):
        HalflineProblem(math.nan)


@given(st.floats(-0.49, 0.49), st.sampled_from(list(Sign)))
def test_deficiency_equation(alpha, sign):
    x = np.linspace(0.2, 12.0, 30)
    assert deficiency_residual(alpha, sign, x) <= 1e-5


def test_deficiency_alpha_zero_components_equal_modulus():
    x = np.geomspace(1e-3, 20, 50)
    f = deficiency_function(0.0, Sign.plus, x)
    np.testing.assert_allclose(np.abs(f[0]), np.abs(f[1]), rtol=1e-13)
    # K_{1/2}(x) sqrt(x) = sqrt(pi/2) e^{-x}
    np.testing.assert_allclose(f[0].real, math.sqrt(PI / 2) * np.exp(-x), rtol=1e-12)
    np.testing.assert_allclose(deficiency_function(0.0, Sign.minus, x), np.conj(f), rtol=1e-13)


@pytest.mark.parametrize("alpha", [-0.45, -0.2, 0.0, 0.3, 0.45])
def test_deficiency_square_integrable(alpha):
    norm, tail = deficiency_norm_sq(alpha, Sign.plus)
    assert math.isfinite(norm) and norm > 0
    assert tail / norm < 1e-10
    if alpha == 0.0:
        # int pi e^{-2x} over (0, inf) = pi/2
        assert norm == pytest.approx(PI / 2, rel=1e-10)


def test_deficiency_decays_exponentially():
    x = np.array([5.0, 10.0, 20.0])
    f = np.abs(deficiency_function(0.3, Sign.plus, x)).max(axis=0)
    ratios = f[1:] / f[:-1]
    assert np.all(ratios < 2 * np.exp(-np.diff(x)))


def test_deficiency_domain_errors():
    with pytest.raises(InvalidInput):
        deficiency_function(0.5, Sign.plus, [1.0])
    with pytest.raises(InvalidInput):
        deficiency_function(0.1, Sign.plus, [0.0, 1.0])


def test_hardy_examples():
    # bump on [1, 3]; lambda = 2 plus: LHS >= (3/2)^2 int |psi|^2 / x^2
    psi = TestFunction(Kind.bump, (2.0, 1.0, 1.0), (1.0, 3.0))
    lhs, rhs = fiber_hardy_terms(2.0, Sign.plus, psi)
    assert lhs >= rhs > 0
    # lambda = 1/2 plus: the constant on the right vanishes
    lhs, rhs = fiber_hardy_terms(0.5, Sign.plus, psi)
    assert rhs == 0.0 and lhs > 0


def test_hardy_random_functions():
    rng = np.random.default_rng(17)
    for i in range(200):
        lo = float(rng.uniform(0.01, 2.0))
        hi = lo * float(rng.uniform(1.5, 50.0))
        psi = random_bump(rng, lo, hi) if i % 2 else random_poly_bump(rng, lo, hi, degree=5)
        for lam in FIBER_LAMBDAS:
            for s in Sign:
                lhs, rhs = fiber_hardy_terms(lam, s, psi)
                assert lhs - rhs >= -1e-9 * max(lhs, rhs)


def test_hardy_underresolved_warning():
    # a very narrow bump far from the origin needs more than a couple of nodes
    psi = TestFunction(Kind.bump, (2.0, 1.9, 1.0, 3.0, 0.01, 5.0), (0.1, 4.0))
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        fiber_hardy_residual(1.0, Sign.plus, psi, nodes=4)
    assert any(issubclass(w.category, UnderResolved) for w in rec)


def test_hardy_rejects_support_touching_zero():
    psi = TestFunction(Kind.bump, (0.5, 1.0, 1.0), (0.0, 2.0))
    with pytest.raises(InvalidInput):
        fiber_hardy_terms(1.0, Sign.plus, psi)


def _sample(alpha, sign, x):
    return deficiency_function(alpha, sign, x)


@pytest.mark.parametrize("lam", [-0.3, 0.0, 0.25])
def test_fiber_operator_on_deficiency_functions(lam):
    # d_lam = -tau_alpha with alpha = lam, so d_lam f^{+-} = -+i f^{+-}
    x = np.geomspace(0.5, 8.0, 4000)
    for s in Sign:
        f = _sample(lam, s, x)
        df = dirac_fiber_apply(lam, f, x)
        inner = slice(10, -10)
        err = np.abs(df + s.value_int * 1j * f)[:, inner].max() / np.abs(f).max()
        assert err < 1e-4


def test_fiber_operator_zero_and_validation():
    x = np.linspace(1, 2, 11)
    assert np.all(dirac_fiber_apply(1.3, np.zeros((2, 11)), x) == 0)
    with pytest.raises(InvalidInput):
        dirac_fiber_apply(1.0, np.zeros((2, 11)), x[::-1])
    with pytest.raises(InvalidInput):
        dirac_fiber_apply(1.0, np.zeros((2, 10)), x)


@pytest.mark.parametrize("k, w", [(0, PI / 3), (-1, PI / 4), (1, 0.4 * PI)])
def test_fiber_norm_bound_on_angular_eigenvalues(k, w):
    # for lambda in Z_k the fiber operator is bounded below by pi/(4 omega) in the 1/x sense
    rng = np.random.default_rng(3)
    const = (PI / (4 * w)) ** 2
    for rec in spectrum(AngularProblem(k, w), (-8, 8)).records:
        for _ in range(5):
            p1 = random_bump(rng, 0.1, 5.0)
            p2 = random_poly_bump(rng, 0.1, 5.0)
            # ||d psi||^2 = ||psi1' - lam psi1/x||^2 + ||psi2' + lam psi2/x||^2
            l1, _ = fiber_hardy_terms(rec.lam, Sign.plus, p1)
            l2, _ = fiber_hardy_terms(rec.lam, Sign.minus, p2)
            _, q1 = fiber_hardy_terms(1.5, Sign.plus, p1)  # (1.5 - 0.5)^2 = 1
            _, q2 = fiber_hardy_terms(1.5, Sign.plus, p2)
            assert l1 + l2 >= const * (q1 + q2) * (1 - 1e-9)

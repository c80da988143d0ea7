"""Root finding, quadrature and the compiled integrator."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from conedirac.errors import StepUnderflow
from conedirac.ode import dopri45_cot
from conedirac.quadrature import dyadic_edges, gauss_legendre, quadrature
from conedirac.roots import UnresolvedBracket, find_bracketed_roots, illinois, sign_change_brackets


def test_brackets_skip_non_finite():
    grid = np.arange(6.0)
    vals = np.array([1.0, -1.0, np.nan, -1.0, 0.0, 2.0])
    br, zeros = sign_change_brackets(grid, vals)
    assert br.tolist() == [0]
    assert zeros.tolist() == [4]


@given(st.lists(st.floats(-9, 9), min_size=1, max_size=6, unique=True))
def test_polynomial_roots_recovered(roots):
    roots = sorted(r for r in roots if all(abs(r - s) > 0.05 or r == s for s in roots))
    f = lambda x: np.prod([x - r for r in roots], axis=0)  # noqa: E731
    grid = np.linspace(-10.003, 10.001, 2001)
    found = find_bracketed_roots(f, grid, f(grid), xtol=1e-13)
    assert len(found) == len(roots)
    assert np.allclose(found, roots, atol=1e-9)


def test_root_on_grid_point():
    grid = np.linspace(-1, 1, 21)
    found = find_bracketed_roots(np.sin, grid, np.sin(grid))
    assert found == [0.0]


def test_illinois_flags_non_convergence(monkeypatch):
    import functools

    import conedirac.roots as roots

    f = lambda x: np.sign(x - 0.3) * np.abs(x - 0.3) ** 0.01  # noqa: E731
    r, ok = illinois(f, [0.0], [1.0], f(np.array([0.0])), f(np.array([1.0])), xtol=1e-15, maxiter=3)
    assert not ok[0]
    monkeypatch.setattr(roots, "illinois", functools.partial(illinois, maxiter=3))
    with pytest.warns(UnresolvedBracket):
        found = find_bracketed_roots(f, np.array([0.0, 1.0]), np.array([-1.0, 1.0]), xtol=1e-15)
    assert len(found) == 1  # reported, not dropped


def test_quadrature_examples():
    assert quadrature(np.sin, (0.0, math.pi), nodes=16) == pytest.approx(2.0, abs=1e-12)
    assert quadrature(lambda x: x**2, (0.0, 1.0), nodes=2) == pytest.approx(1 / 3, abs=1e-15)


def test_singular_weight_self_convergence():
    # smooth function vanishing like t^2 near 0 against 1/sin^2: graded panels converge
    f = lambda t: np.sin(t) ** 2 * np.cos(3 * t) ** 2 / np.sin(t) ** 2 + t**3 / np.sin(t) ** 2  # noqa: E731
    edges = np.concatenate([[0.0], dyadic_edges(1e-8, 1.0, 2)])
    a = quadrature(f, (0.0, 1.0), nodes=16, edges=edges)
    b = quadrature(f, (0.0, 1.0), nodes=32, edges=edges)
    assert a == pytest.approx(b, rel=1e-12)


@given(st.integers(2, 40))
def test_gauss_exactness(n):
    x, w = gauss_legendre(n)
    deg = 2 * n - 1
    assert float(np.sum(w * x**deg)) == pytest.approx(0.0, abs=1e-13)
    assert float(np.sum(w * x ** (deg - 1))) == pytest.approx(2.0 / deg, rel=1e-12)


def _rhs(a1, b1, c12, c21, a2, b2):
    def f(t, y):
        cot = math.cos(t) / math.sin(t)
        return [(a1 * cot + b1 / t) * y[0] + c12 * y[1], c21 * y[0] + (a2 * cot + b2 / t) * y[1]]

    return f


@pytest.mark.parametrize("k, lam, omega", [(0, 1.42, 1.0), (-2, -3.7, 2.0), (1, 6.5, 0.4), (-1, 0.3, 2.9)])
def test_integrator_matches_scipy(k, lam, omega):
    a = k + 0.5
    p = abs(a)
    coeffs = (a, -p, k + lam, k + 1 - lam, -a, -p)
    y0 = np.array([1.0, 0.01])
    ours = dopri45_cot(*coeffs, 1e-5, omega, y0, rtol=1e-11, atol=1e-13, max_step=0.05)[:, 0]
    ref = solve_ivp(_rhs(*coeffs), (1e-5, omega), y0, method="DOP853", rtol=1e-12, atol=1e-14).y[:, -1]
    assert np.allclose(ours, ref, rtol=1e-8, atol=1e-10 * np.abs(ref).max())


def test_integrator_batch_independence():
    c12 = np.array([1.0, 2.0, 3.0])
    y = dopri45_cot(0.5, -0.5, c12, 1.0 - c12, -0.5, -0.5, 1e-5, 1.0, [1.0, 0.0])
    single = dopri45_cot(0.5, -0.5, [2.0], [-1.0], -0.5, -0.5, 1e-5, 1.0, [1.0, 0.0])
    assert np.array_equal(y[:, 1], single[:, 0])


def test_integrator_step_underflow():
    with pytest.raises(StepUnderflow):
        dopri45_cot(0.5, -0.5, [1.0], [1.0], -0.5, -0.5, 1e-5, 1.0, [1.0, 0.0], max_steps=3)

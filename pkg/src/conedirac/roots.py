"""Bracketing root search shared by the transcendental solver and the oracle."""

from __future__ import annotations

import warnings
from typing import Callable

import numpy as np

VecFn = Callable[[np.ndarray], np.ndarray]


class UnresolvedBracket(UserWarning):
    pass


def sign_change_brackets(grid: np.ndarray, values: np.ndarray):
    """Indices i with a sign change on [grid[i], grid[i+1]], and exact zeros.

    Non-finite samples act as barriers: no bracket may touch them.
    """
    finite = np.isfinite(values)
    zeros = np.nonzero(finite & (values == 0.0))[0]
    s = np.sign(values)
    ok = finite[:-1] & finite[1:] & (s[:-1] * s[1:] < 0)
    return np.nonzero(ok)[0], zeros


def illinois(fn, a, b, fa, fb, xtol: float = 1e-12, maxiter: int = 200, indexed: bool = False):
    """Vectorised bracketed regula falsi (Illinois variant).

    Every bracket [a_i, b_i] must carry a sign change. Returns (root, converged)
    where converged flags brackets whose width fell below ``xtol``. With
    ``indexed`` the evaluator is called as fn(x, bracket_indices).
    """
    a, b = np.array(a, dtype=float), np.array(b, dtype=float)
    fa, fb = np.array(fa, dtype=float), np.array(fb, dtype=float)
    side = np.zeros(a.shape, dtype=int)
    root = 0.5 * (a + b)
    active = np.abs(b - a) > xtol
    for _ in range(maxiter):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        ai, bi, fai, fbi = a[idx], b[idx], fa[idx], fb[idx]
        c = (ai * fbi - bi * fai) / (fbi - fai)
        # fall back to the midpoint when the secant leaves the open bracket
        bad = ~np.isfinite(c) | (c <= np.minimum(ai, bi)) | (c >= np.maximum(ai, bi))
        c[bad] = 0.5 * (ai + bi)[bad]
        fc = fn(c, idx) if indexed else fn(c)
        root[idx] = c
        hit = fc == 0.0
        left = (np.sign(fc) == np.sign(fai)) & ~hit
        # replace a; if a was also replaced last time, halve fb
        a[idx[left]] = c[left]
        fa[idx[left]] = fc[left]
        halve_b = left & (side[idx] == -1)
        fb[idx[halve_b]] *= 0.5
        side[idx[left]] = -1
        right = ~left & ~hit
        b[idx[right]] = c[right]
        fb[idx[right]] = fc[right]
        halve_a = right & (side[idx] == 1)
        fa[idx[halve_a]] *= 0.5
        side[idx[right]] = 1
        a[idx[hit]] = c[hit]
        b[idx[hit]] = c[hit]
        active[idx] = np.abs(b[idx] - a[idx]) > xtol
    # final estimate: the bracket end with the smaller |f|, or the interpolant
    fin = np.abs(b - a) <= xtol
    root = np.where(fin, np.where(np.abs(fa) <= np.abs(fb), a, b), root)
    return root, fin


def find_bracketed_roots(
    fn: VecFn,
    grid: np.ndarray,
    values: np.ndarray,
    xtol: float = 1e-12,
    label: str = "",
):
    """Refine every sign change of ``values`` sampled on ``grid``.

    ``fn`` is the accurate evaluator; endpoints are re-evaluated with it so a
    root sitting on a grid point is caught by shrinking to that point.
    """
    br, zeros = sign_change_brackets(grid, values)
    found = [float(g) for g in grid[zeros]]
    if br.size == 0:
        return sorted(found)
    a, b = grid[br], grid[br + 1]
    fa, fb = fn(a), fn(b)
    on_a, on_b = fa == 0.0, fb == 0.0
    found += [float(v) for v in a[on_a]] + [float(v) for v in b[on_b & ~on_a]]
    keep = ~on_a & ~on_b & (np.sign(fa) * np.sign(fb) < 0)
    lost = ~on_a & ~on_b & ~keep
    for lo, hi in zip(a[lost], b[lost]):
        # scan and exact evaluator disagree in sign: root within rounding of a grid point
        fl, fh = fn(np.array([lo, hi]))
        found.append(float(lo if abs(fl) <= abs(fh) else hi))
    if keep.any():
        r, ok = illinois(fn, a[keep], b[keep], fa[keep], fb[keep], xtol=xtol)
        if not ok.all():
            warnings.warn(
                f"{label}: {int((~ok).sum())} bracket(s) did not shrink below {xtol}",
                UnresolvedBracket,
                stacklevel=2,
            )
        found += [float(v) for v in r]
    return sorted(found)

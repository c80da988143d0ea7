"""Composite Gauss-Legendre quadrature on uniform or dyadic panels."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    if n < 1:
        raise ValueError("need at least one node")
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(edges: Sequence[float], nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of the composite rule over consecutive edges."""
    e = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(nodes)
    half = 0.5 * np.diff(e)
    mid = 0.5 * (e[1:] + e[:-1])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts


def uniform_edges(a: float, b: float, panels: int) -> np.ndarray:
    return np.linspace(a, b, panels + 1)


def dyadic_edges(a: float, b: float, min_panels: int = 1) -> np.ndarray:
    """Edges a, 2a, 4a, ... up to b (a > 0), each gap further split uniformly.

    Needed for weights like 1/x^2 whose scale changes with x.
    """
    if a <= 0 or b <= a:
        raise ValueError("dyadic panels need 0 < a < b")
    edges = [a]
    while edges[-1] * 2 < b:
        edges.append(edges[-1] * 2)
    edges.append(b)
    if min_panels > 1:
        fine = [np.linspace(l, r, min_panels + 1)[:-1] for l, r in zip(edges[:-1], edges[1:])]
        edges = list(np.concatenate(fine)) + [b]
    return np.asarray(edges)


def quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    interval: tuple[float, float],
    nodes: int = 16,
    panels: int = 1,
    edges: Sequence[float] | None = None,
):
    """Composite Gauss-Legendre approximation of the integral of f."""
    if nodes < 2:
        raise ValueError("nodes must be >= 2")
    if edges is None:
        edges = uniform_edges(interval[0], interval[1], panels)
    pts, wts = panel_nodes(edges, nodes)
    return np.dot(wts, f(pts))

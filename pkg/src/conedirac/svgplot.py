"""Minimal deterministic SVG writer for the aperture-eigenvalue plot."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 20, 50


class Axes:
    def __init__(self, xlim: tuple[float, float], ylim: tuple[float, float]):
        self.xlim, self.ylim = xlim, ylim
        self.w = WIDTH - MARGIN_L - MARGIN_R
        self.h = HEIGHT - MARGIN_T - MARGIN_B

    def px(self, x: float) -> float:
        a, b = self.xlim
        return MARGIN_L + (x - a) / (b - a) * self.w

    def py(self, y: float) -> float:
        a, b = self.ylim
        return MARGIN_T + (b - y) / (b - a) * self.h

    def inside(self, y: float) -> bool:
        return self.ylim[0] <= y <= self.ylim[1]


def _f(v: float) -> str:
    return f"{v:.2f}"


def polyline(ax: Axes, xs: Sequence[float], ys: Sequence[float], style: str) -> list[str]:
    """One <polyline> per run of points inside the y-range."""
    out, run = [], []
    for x, y in zip(xs, ys):
        if math.isfinite(y) and ax.inside(y):
            run.append(f"{_f(ax.px(x))},{_f(ax.py(y))}")
            continue
        if len(run) > 1:
            out.append(f'<polyline fill="none" {style} points="{" ".join(run)}"/>')
        run = []
    if len(run) > 1:
        out.append(f'<polyline fill="none" {style} points="{" ".join(run)}"/>')
    return out


def figure1_svg(
    points: Iterable[tuple[float, float]],
    bound_omegas: Sequence[float],
    ylim: tuple[float, float] = (-10.0, 10.0),
) -> str:
    """Black dots for Z_0, dotted green bound curves, dashed red lines at +-1/2."""
    ax = Axes((0.0, math.pi), ylim)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{ax.w}" height="{ax.h}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    for i in range(5):
        x = i * math.pi / 4
        label = ["0", "π/4", "π/2", "3π/4", "π"][i]
        parts.append(f'<line x1="{_f(ax.px(x))}" y1="{HEIGHT - MARGIN_B}" x2="{_f(ax.px(x))}" y2="{HEIGHT - MARGIN_B + 5}" stroke="black"/>')
        parts.append(f'<text x="{_f(ax.px(x))}" y="{HEIGHT - MARGIN_B + 20}" font-size="14" text-anchor="middle">{label}</text>')
    lo, hi = ylim
    step = 2.0 if hi - lo <= 24 else 5.0
    y = math.ceil(lo / step) * step
    while y <= hi + 1e-12:
        parts.append(f'<line x1="{MARGIN_L - 5}" y1="{_f(ax.py(y))}" x2="{MARGIN_L}" y2="{_f(ax.py(y))}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_L - 8}" y="{_f(ax.py(y) + 5)}" font-size="14" text-anchor="end">{y:g}</text>')
        y += step
    parts.append(f'<text x="{_f(MARGIN_L + ax.w / 2)}" y="{HEIGHT - 10}" font-size="16" text-anchor="middle">ω</text>')
    parts.append(f'<text x="18" y="{_f(MARGIN_T + ax.h / 2)}" font-size="16" text-anchor="middle">λ</text>')

    half = 'stroke="red" stroke-width="1.5" stroke-dasharray="8,5"'
    for v in (0.5, -0.5):
        parts += polyline(ax, [0.0, math.pi], [v, v], half)
    dotted = 'stroke="green" stroke-width="1.5" stroke-dasharray="2,4"'
    ws = list(bound_omegas)
    for s in (1.0, -1.0):
        parts += polyline(ax, ws, [s * (math.pi / (4 * w) + 0.5) for w in ws], dotted)
    for w, lam in points:
        if ax.inside(lam):
            parts.append(f'<circle cx="{_f(ax.px(w))}" cy="{_f(ax.py(lam))}" r="1.6" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

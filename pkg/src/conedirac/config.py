"""Numerical settings for the two eigenvalue solvers."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput


@dataclass(frozen=True)
class ScanConfig:
    """Scan-bracket-refine settings for the transcendental equations."""

    window: tuple[float, float] = (-25.0, 25.0)
    step: float = 0.005
    xtol: float = 1e-12
    residual_tol: float = 1e-8
    dedup_radius: float = 1e-8

    def __post_init__(self):
        lo, hi = self.window
        if not hi > lo:
            raise InvalidInput(f"degenerate window {self.window}")
        if self.step <= 0:
            raise InvalidInput("scan step must be positive")


@dataclass(frozen=True)
class ShootingConfig:
    theta_start: float = 1e-5
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = 0.05
    scan_step: float = 0.02
    xtol: float = 1e-11

    def __post_init__(self):
        if not 0 < self.theta_start <= 1e-3:
            raise InvalidInput("theta_start must lie in (0, 1e-3]")
        if self.rtol <= 0 or self.atol <= 0 or self.max_step <= 0:
            raise InvalidInput("integrator tolerances must be positive")

"""The 4-form ``|q|^3 / (1 + |q|^4)^2 d|q| Omega`` on H, integrated by product quadrature."""

from __future__ import annotations

import math

import numpy as np

MIN_GRID = 10


def radial_density(r):
    """``r^3 / (1 + r^4)^2``; vanishes at 0 and decays like ``r^-5``."""
    r = np.asarray(r, dtype=float)
    return r**3 / (1.0 + r**4) ** 2


def radial_tail(cutoff: float) -> float:
    """``int_R^inf r^3/(1+r^4)^2 dr = 1 / (4 (1 + R^4))``."""
    return 1.0 / (4.0 * (1.0 + cutoff**4))


def _gauss(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def omega_volume(grid: int) -> float:
    """Volume of S^3 under ``Omega = sin^2 a sin b da db dc`` in the hyperspherical chart."""
    a, wa = _gauss(0.0, math.pi, grid)
    b, wb = _gauss(0.0, math.pi, grid)
    c, wc = _gauss(-math.pi, math.pi, grid)
    return float((wa * np.sin(a) ** 2).sum() * (wb * np.sin(b)).sum() * wc.sum())


def radial_integral(grid: int) -> float:
    """``int_0^inf`` of the radial density with ``r = t / (1 - t)``, Gauss-Legendre in t."""
    t, w = _gauss(0.0, 1.0, grid)
    r = t / (1.0 - t)
    return float((w * radial_density(r) / (1.0 - t) ** 2).sum())


def s4_volume(grid: int, cutoff: float = 100.0) -> dict:
    """Total mass of the form over H on a ``grid^4`` product rule, with a refinement and tail estimate."""
    if grid < MIN_GRID:
        raise ValueError(f"grid must be >= {MIN_GRID}")
    value = radial_integral(grid) * omega_volume(grid)
    doubled = radial_integral(2 * grid) * omega_volume(2 * grid)
    return {
        "grid": grid,
        "value": value,
        "value_doubled_grid": doubled,
        "relative_change": abs(doubled - value) / abs(doubled),
        "cutoff": cutoff,
        "tail_estimate": radial_tail(cutoff) * omega_volume(grid),
    }

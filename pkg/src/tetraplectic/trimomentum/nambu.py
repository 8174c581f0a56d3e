"""Quaternary brackets and Nambu-type flows for the standard structure on R^{4m}."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..exterior import MultiVector

FD_STEP = 1e-5

Fn = Callable[[np.ndarray], float]


def xi_standard(m: int) -> MultiVector:
    """The 4-vector ``(1/m) sum_i d_{4i-3} ^ d_{4i-2} ^ d_{4i-1} ^ d_{4i}``.

    It satisfies ``i_xi psi^m = psi^(m-1)`` for the standard 4-form psi.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    xi = MultiVector(4 * m, 4)
    for i in range(m):
        xi = xi + MultiVector.basis(4 * m, range(4 * i, 4 * i + 4))
    return xi * (1.0 / m)


def _check_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0 or x.size % 4:
        raise ValueError(f"point must be a vector of length 4m, got shape {x.shape}")
    return x


def gradient(f: Fn, x, h: float = FD_STEP) -> np.ndarray:
    """Central-difference gradient."""
    x = _check_point(x)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def quaternary_bracket(f1: Fn, f2: Fn, f3: Fn, f4: Fn, x, h: float = FD_STEP) -> float:
    """``{f1, f2, f3, f4}(x) = <xi, df1 ^ df2 ^ df3 ^ df4>``.

    For the standard structure this is the average over the m quaternionic
    blocks of the 4x4 Jacobian determinants.
    """
    x = _check_point(x)
    m = x.size // 4
    jac = np.stack([gradient(f, x, h) for f in (f1, f2, f3, f4)])
    blocks = jac.reshape(4, m, 4).transpose(1, 0, 2)
    return float(np.linalg.det(blocks).sum() / m)


def nambu_field_from_gradients(grads: np.ndarray) -> np.ndarray:
    """Vector field Y with ``dg(Y) = <xi, df1 ^ df2 ^ df3 ^ dg>`` given the three gradients."""
    grads = np.asarray(grads, dtype=float)
    n = grads.shape[1]
    m = n // 4
    blocks = grads.reshape(3, m, 4).transpose(1, 0, 2)
    y = np.empty((m, 4))
    for c in range(4):
        e = np.zeros((m, 1, 4))
        e[:, 0, c] = 1.0
        y[:, c] = np.linalg.det(np.concatenate([blocks, e], axis=1))
    return y.reshape(n) / m


def nambu_vector_field(f1: Fn, f2: Fn, f3: Fn, x, h: float = FD_STEP) -> np.ndarray:
    x = _check_point(x)
    return nambu_field_from_gradients(np.stack([gradient(f, x, h) for f in (f1, f2, f3)]))


def nambu_flow(f1: Fn, f2: Fn, f3: Fn, x0, dt: float, steps: int, h: float = FD_STEP) -> np.ndarray:
    """RK4 integration of ``x' = Y(x)``; returns the ``(steps + 1, 4m)`` trajectory."""
    x = _check_point(x0).copy()
    if steps < 0:
        raise ValueError("steps must be >= 0")
    traj = np.empty((steps + 1, x.size))
    traj[0] = x

    def field(p):
        return nambu_vector_field(f1, f2, f3, p, h)

    for s in range(steps):
        k1 = field(x)
        k2 = field(x + 0.5 * dt * k1)
        k3 = field(x + 0.5 * dt * k2)
        k4 = field(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise FloatingPointError(f"flow left the finite range at step {s + 1}")
        traj[s + 1] = x
    return traj


"""Pointwise certificates: the momentum identity and horizontality of a 4-form."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Callable

import numpy as np

from ..exterior import AltForm, MultiVector, interior, standard_psi
from ..quat import Quaternion, hyperspherical_angles, qmul, qnorm2, random_units
from .nambu import FD_STEP, gradient

# i_{delta~} psi = c * d mu for delta~ = (i q) ^ (j q) ^ (k q) and mu = |q|^4
TRIVECTOR_NORMALIZATION = -0.25

ANGLE_STEP = 1e-6
LEVEL_TOL = 1e-8
NULL_TOL = 1e-8
CHART_MARGIN = 0.2

_IMAG_UNITS = np.eye(4)[1:]

PsiLike = AltForm | Callable[[np.ndarray], AltForm]
Field = Callable[[np.ndarray], np.ndarray]


def _psi_at(psi: PsiLike, x: np.ndarray) -> AltForm:
    return psi if isinstance(psi, AltForm) else psi(x)


def left_generators(x, blocks) -> np.ndarray:
    """Fundamental fields of ``q_b -> u q_b`` (u = i, j, k) acting on the given blocks; shape (3, 4m)."""
    x = np.asarray(x, dtype=float)
    q = x.reshape(-1, 4)
    out = np.zeros((3, q.shape[0], 4))
    for b in blocks:
        out[:, b] = qmul(_IMAG_UNITS, q[b][None, :])
    return out.reshape(3, -1)


def left_generator_fields(blocks) -> list[Field]:
    """The three fields of :func:`left_generators` as separate evaluators."""
    blocks = tuple(blocks)
    return [lambda x, r=r: left_generators(x, blocks)[r] for r in range(3)]


def _trivector(generators, x: np.ndarray) -> MultiVector:
    if len(generators) != 3:
        raise ValueError("need exactly three generator fields")
    return MultiVector.from_vectors(*[np.asarray(g(x), dtype=float) for g in generators])


def momentum_one_form(psi: PsiLike, generators, x) -> np.ndarray:
    """Coefficients of ``i_{g_1 ^ g_2 ^ g_3} psi`` at ``x``."""
    x = np.asarray(x, dtype=float)
    return interior(_trivector(generators, x), _psi_at(psi, x)).coeffs


def momentum_identity_check(mu, generators, psi: PsiLike, points, h: float = FD_STEP,
                            c: float = TRIVECTOR_NORMALIZATION) -> float:
    """Worst ``|i_{delta~} psi - c d mu|`` over the points, ``d mu`` by central differences."""
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        r = np.abs(momentum_one_form(psi, generators, x) - c * gradient(mu, x, h)).max()
        worst = max(worst, float(r))
    return worst


def calibrate_normalization(mu, generators, psi: PsiLike, points, h: float = FD_STEP) -> float:
    """Least-squares ``c`` in ``i_{delta~} psi = c d mu`` over the sample points."""
    num = den = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        a = momentum_one_form(psi, generators, x)
        g = gradient(mu, x, h)
        num += float(a @ g)
        den += float(g @ g)
    if den == 0.0:
        raise ValueError("d mu vanishes at every sample point")
    return num / den


def level_tangent_basis(level_fn, x, h: float = FD_STEP) -> np.ndarray:
    """Orthonormal basis (rows) of the kernel of the finite-difference Jacobian of ``level_fn``."""
    x = np.asarray(x, dtype=float)
    n_out = np.atleast_1d(level_fn(x)).size
    jac = np.empty((n_out, x.size))
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        jac[:, i] = (np.atleast_1d(level_fn(x + e)) - np.atleast_1d(level_fn(x - e))) / (2 * h)
    _, s, vt = np.linalg.svd(jac)
    rank = int((s > NULL_TOL * max(1.0, s[0])).sum())
    return vt[rank:]


def horizontality_residual(psi: PsiLike, level_fn, generators, x, h: float = FD_STEP) -> float:
    """``max |(i_g psi)(t_a, t_b, t_c)|`` over generators g and triples of a level-set tangent basis."""
    x = np.asarray(x, dtype=float)
    form = _psi_at(psi, x)
    tangent = level_tangent_basis(level_fn, x, h)
    triples = [MultiVector.from_vectors(*tangent[list(t)]).coeffs for t in combinations(range(tangent.shape[0]), 3)]
    if not triples:
        return 0.0
    tri = np.array(triples)
    worst = 0.0
    for field in generators:
        beta = interior(MultiVector.from_vectors(np.asarray(field(x), dtype=float)), form).coeffs
        worst = max(worst, float(np.abs(tri @ beta).max()))
    return worst


def horizontality_check(psi: PsiLike, level_fn, generators, points, target=None, h: float = FD_STEP) -> float:
    """Maximum horizontality residual over points that must lie on ``level_fn = target``."""
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        if target is not None:
            off = np.abs(np.atleast_1d(level_fn(x)) - np.atleast_1d(target)).max()
            if off > LEVEL_TOL:
                raise ValueError(f"sample point is off the level set by {off:.3g}")
        worst = max(worst, horizontality_residual(psi, level_fn, generators, x, h))
    return worst


# --- the modified structure dF ^ rho on H^2 -------------------------------------

def level_pair(x) -> np.ndarray:
    """``(|q1|^4 - |q2|^4, |q1|^4 + |q2|^4)`` on H^2."""
    n2 = qnorm2(np.asarray(x, dtype=float).reshape(2, 4))
    return np.array([n2[0] ** 2 - n2[1] ** 2, n2[0] ** 2 + n2[1] ** 2])


def level_difference(x) -> float:
    return float(level_pair(x)[0])


def _angles(x: np.ndarray) -> np.ndarray:
    q = x.reshape(2, 4)
    a = np.array([hyperspherical_angles(Quaternion.from_array(qi)) for qi in q])
    return a[0] - a[1]


def _wrap(d: np.ndarray) -> np.ndarray:
    return (d + math.pi) % (2 * math.pi) - math.pi


def angle_difference_differentials(x, h: float = ANGLE_STEP) -> np.ndarray:
    """Rows ``d(a1 - a2), d(b1 - b2), d(c1 - c2)`` of the hyperspherical chart angles."""
    x = np.asarray(x, dtype=float)
    out = np.empty((3, 8))
    for i in range(8):
        e = np.zeros(8)
        e[i] = h
        out[:, i] = _wrap(_angles(x + e) - _angles(x - e)) / (2 * h)
    return out


def modified_psi(x) -> AltForm:
    """``dF ^ d(a1-a2) ^ d(b1-b2) ^ d(c1-c2)`` with ``F = |q1|^4 - |q2|^4``.

    ``dF`` is exact; the angle differentials use central differences.
    """
    x = np.asarray(x, dtype=float)
    q = x.reshape(2, 4)
    n2 = qnorm2(q)
    df = np.concatenate([4 * n2[0] * q[0], -4 * n2[1] * q[1]])
    return AltForm.from_covectors(df, *angle_difference_differentials(x))


def _chart_ok(u: np.ndarray) -> bool:
    # sin a sin b = |(y, z)| for a unit quaternion
    return math.hypot(u[2], u[3]) >= CHART_MARGIN


def sample_level_points(f0: float, g0: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Points of H^2 with ``level_pair = (f0, g0)``, kept away from the chart singularity."""
    if not g0 > abs(f0):
        raise ValueError("need g0 > |f0| for a non-empty level set")
    r1 = ((g0 + f0) / 2) ** 0.25
    r2 = ((g0 - f0) / 2) ** 0.25
    pts = []
    while len(pts) < count:
        u = random_units(rng, 2)
        if _chart_ok(u[0]) and _chart_ok(u[1]):
            pts.append(np.concatenate([r1 * u[0], r2 * u[1]]))
    return np.array(pts)


def horizontality_negative_control(points) -> float:
    """Standard psi on H^2 with the diagonal action on ``|q1|^4 + |q2|^4 = const``; expected far from 0."""
    psi = standard_psi(2)
    return horizontality_check(psi, lambda x: level_pair(x)[1], left_generator_fields((0, 1)), points)

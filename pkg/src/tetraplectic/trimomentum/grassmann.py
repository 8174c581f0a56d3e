"""Tri-momentum maps on H^n and on quaternionic Grassmannians."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qlinalg import QMatrix, as_qmatrix, dieudonne_det, qr_gram_schmidt, row_subsets, submatrix
from ..quat import Quaternion, UnitQuaternion, qmul, qnorm2, random_units

D4_UNDERFLOW = 1e-40
MINOR_TOL = 1e-10


@dataclass(frozen=True)
class SpheroidElement:
    """Element ``(a_1, ..., a_n)`` of Sp(1)^n."""

    units: tuple[UnitQuaternion, ...]

    @classmethod
    def identity(cls, n: int) -> "SpheroidElement":
        return cls(tuple(UnitQuaternion(1.0) for _ in range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "SpheroidElement":
        return cls(tuple(UnitQuaternion(*row) for row in random_units(rng, n)))

    def as_array(self) -> np.ndarray:
        return np.array([u.to_list() for u in self.units])

    def __len__(self) -> int:
        return len(self.units)


class GrassmannPoint:
    """A quaternionic p-plane in H^n, stored as an ``n x p`` matrix of rank p (columns span the plane)."""

    __slots__ = ("M",)

    def __init__(self, m):
        m = as_qmatrix(m)
        _, rank = qr_gram_schmidt(m)
        if rank != m.cols:
            raise ValueError(f"matrix has rank {rank}, expected {m.cols}")
        self.M = m

    @property
    def n(self) -> int:
        return self.M.rows

    @property
    def p(self) -> int:
        return self.M.cols

    @classmethod
    def coordinate(cls, n: int, subset) -> "GrassmannPoint":
        """The plane spanned by ``e_j`` for ``j`` in the 0-based subset."""
        subset = sorted(subset)
        a = np.zeros((n, len(subset), 4))
        for col, j in enumerate(subset):
            a[j, col, 0] = 1.0
        return cls(a)

    def __repr__(self) -> str:
        return f"GrassmannPoint(n={self.n}, p={self.p})"


def _as_quat_array(qs) -> np.ndarray:
    if isinstance(qs, np.ndarray):
        return qs.reshape(-1, 4).astype(float)
    return np.array([q.to_list() if isinstance(q, Quaternion) else list(q) for q in qs], dtype=float)


def mu_standard(qs) -> np.ndarray:
    """``(|q_1|^4, ..., |q_n|^4)`` for the standard Sp(1)^n action on H^n."""
    n2 = qnorm2(_as_quat_array(qs))
    return n2 * n2


def mu_diagonal(q1, q2) -> float:
    """``|q_1|^4 + |q_2|^4`` for the diagonal Sp(1) action on H^2."""
    return float(mu_standard([q1, q2]).sum())


def act_on_vector(a: SpheroidElement, qs) -> np.ndarray:
    """Left action ``q_i -> a_i q_i``."""
    arr = _as_quat_array(qs)
    if arr.shape[0] != len(a):
        raise ValueError("spheroid size does not match the vector length")
    return qmul(a.as_array(), arr)


def minor_determinants(plane: GrassmannPoint) -> dict[tuple[int, ...], float]:
    """``J -> D(M(J))`` over all p-subsets, computed on ``M`` rescaled to unit max entry."""
    m = plane.M
    scaled = QMatrix(m.data / m.max_abs())
    return {J: dieudonne_det(submatrix(scaled, J)) for J in row_subsets(plane.n, plane.p)}


def grassmann_coords(plane: GrassmannPoint) -> np.ndarray:
    """``x_i = sum_{J containing i} D^4(M(J)) / sum_J D^4(M(J))``; lands in the hypersimplex Z^n_p."""
    minors = minor_determinants(plane)
    d4 = {J: d**4 for J, d in minors.items()}
    best = max(d4.values())
    if best < D4_UNDERFLOW:
        raise ValueError("degenerate plane representation")
    total = sum(d4.values())
    x = np.zeros(plane.n)
    for J, w in d4.items():
        x[list(J)] += w
    return x / total


def nonvanishing_minors(plane: GrassmannPoint, tol: float = MINOR_TOL) -> list[tuple[int, ...]]:
    """Subsets ``J`` with ``D(M(J)) > tol * max_J D(M(J))``."""
    minors = minor_determinants(plane)
    best = max(minors.values())
    return [J for J, d in minors.items() if d > tol * best]


def spheroid_act(a: SpheroidElement, plane: GrassmannPoint) -> GrassmannPoint:
    """Left-multiply row i of ``M`` by ``a_i``."""
    if len(a) != plane.n:
        raise ValueError("spheroid size does not match n")
    return GrassmannPoint(qmul(a.as_array()[:, None, :], plane.M.data))


def basis_change(plane: GrassmannPoint, g) -> GrassmannPoint:
    """Right-multiply ``M`` by an invertible ``p x p`` matrix (same plane, new basis)."""
    g = as_qmatrix(g)
    if g.shape != (plane.p, plane.p):
        raise ValueError(f"basis change must be {plane.p}x{plane.p}")
    if dieudonne_det(g) == 0.0:
        raise ValueError("basis change matrix is singular")
    return GrassmannPoint(plane.M @ g)


def row_scale(plane: GrassmannPoint, t) -> QMatrix:
    """``diag(t) M`` rescaled to unit max entry (may be rank deficient)."""
    data = plane.M.data * np.asarray(t, dtype=float)[:, None, None]
    peak = np.sqrt(qnorm2(data)).max()
    return QMatrix(data / peak if peak > 0 else data)

"""Dense quaternionic matrices, Sp(n), and the Dieudonne determinant.

Conventions: H^n is a right H-module, matrices act on the left and scalars
multiply vectors on the right.  The hermitian pairing is
``<u, v> = sum_i conj(u_i) v_i`` so that ``Q*Q = I`` means orthonormal columns.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from ._backend import kernels
from .quat import Quaternion, qconj, qmul, qnorm2

HERMITIAN_TOL = 1e-12
SP_TOL = 1e-10
DEFAULT_DET_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-10


class QMatrix:
    """Immutable dense ``rows x cols`` quaternionic matrix backed by a ``(rows, cols, 4)`` array."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a (rows, cols, 4) array, got shape {arr.shape}")
        arr.flags.writeable = False
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = 1.0
        return cls(a)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def from_quaternions(cls, rows) -> "QMatrix":
        return cls([[q.to_list() for q in row] for row in rows])

    @classmethod
    def real_diag(cls, values) -> "QMatrix":
        n = len(values)
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = values
        return cls(a)

    @classmethod
    def from_json(cls, obj: dict) -> "QMatrix":
        try:
            rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix object: {exc}") from None
        arr = np.array(entries, dtype=float)
        if arr.shape != (rows, cols, 4):
            raise ValueError(f"entries have shape {arr.shape}, header says ({rows}, {cols}, 4)")
        return cls(arr)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.data.tolist()}

    def __getitem__(self, idx) -> Quaternion:
        i, j = idx
        return Quaternion.from_array(self.data[i, j])

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        return qmatmul(self, other)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data - other.data)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def __mul__(self, s: float) -> "QMatrix":
        return QMatrix(self.data * float(s))

    __rmul__ = __mul__

    def adjoint(self) -> "QMatrix":
        return adjoint(self)

    @property
    def H(self) -> "QMatrix":
        return adjoint(self)

    def max_abs(self) -> float:
        return float(np.sqrt(qnorm2(self.data)).max())

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


class HermitianQ(QMatrix):
    """Square quaternionic matrix with ``A = A*``."""

    __slots__ = ()

    def __init__(self, data):
        super().__init__(data.data if isinstance(data, QMatrix) else data)
        if self.rows != self.cols:
            raise ValueError("hermitian matrix must be square")
        scale = max(1.0, self.max_abs())
        dev = np.abs(self.data - adjoint(self).data).max()
        if dev > HERMITIAN_TOL * scale:
            raise ValueError(f"matrix is not hermitian (deviation {dev:.3g})")


class SpNElement(QMatrix):
    """Element of the compact symplectic group Sp(n): ``U U* = I``."""

    __slots__ = ()

    def __init__(self, data):
        super().__init__(data.data if isinstance(data, QMatrix) else data)
        if self.rows != self.cols:
            raise ValueError("Sp(n) element must be square")
        dev = np.abs((self @ self.H).data - QMatrix.identity(self.rows).data).max()
        if dev > SP_TOL:
            raise ValueError(f"matrix is not in Sp(n) (deviation {dev:.3g})")


def as_qmatrix(a) -> QMatrix:
    return a if isinstance(a, QMatrix) else QMatrix(a)


def qmatmul(a, b) -> QMatrix:
    a, b = as_qmatrix(a), as_qmatrix(b)
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    return QMatrix(kernels.qmatmul(a.data, b.data))


def adjoint(a) -> QMatrix:
    a = as_qmatrix(a)
    return QMatrix(qconj(a.data.transpose(1, 0, 2)))


def complex_embedding(a) -> np.ndarray:
    """Study embedding ``A = Z + W j  ->  [[Z, W], [-conj(W), conj(Z)]]``."""
    a = as_qmatrix(a)
    if a.rows != a.cols:
        raise ValueError("complex embedding needs a square matrix")
    z = a.data[..., 0] + 1j * a.data[..., 1]
    w = a.data[..., 2] + 1j * a.data[..., 3]
    return np.block([[z, w], [-w.conj(), z.conj()]])


def complex_det(m: np.ndarray) -> complex:
    """Determinant by LU with partial pivoting (independent of the quaternionic code)."""
    u = np.array(m, dtype=complex)
    n = u.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(u[k:, k])))
        if u[p, k] == 0:
            return 0.0j
        if p != k:
            u[[k, p]] = u[[p, k]]
            det = -det
        det *= u[k, k]
        f = u[k + 1:, k] / u[k, k]
        u[k + 1:, k:] -= np.outer(f, u[k, k:])
    return det


def study_determinant(a) -> float:
    """``sqrt(|det chi(A)|)``, which equals the Dieudonne determinant."""
    return math.sqrt(abs(complex_det(complex_embedding(a))))


def dieudonne_det(a, tol: float = DEFAULT_DET_TOL) -> float:
    """Dieudonne determinant, a non-negative real.

    Triangularizes with quaternionic row operations and partial pivoting
    (largest ``|entry|`` in the column, lowest row index on ties) and returns
    the product of the pivot norms.  A pivot column whose largest entry is
    below ``tol * max|a_ij|`` makes the matrix singular and the result 0.
    """
    a = as_qmatrix(a)
    if a.rows != a.cols:
        raise ValueError("Dieudonne determinant needs a square matrix")
    if tol < 0:
        raise ValueError("tol must be non-negative")
    scale = a.max_abs()
    if scale == 0.0:
        return 0.0
    return float(kernels.dieudonne_det(a.data, tol * scale))


def _col_inner(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return qmul(qconj(u), v).sum(axis=0)


def qr_gram_schmidt(a, tol: float = DEFAULT_RANK_TOL) -> tuple[QMatrix | None, int]:
    """Orthonormalize the columns of ``a`` (modified Gram-Schmidt, two passes).

    Columns whose residual norm falls below ``tol`` times the largest input
    column norm are dropped.  Returns ``(Q, rank)`` with ``Q`` of shape
    ``rows x rank`` (``None`` when the rank is 0).
    """
    a = as_qmatrix(a)
    cols = [a.data[:, j].copy() for j in range(a.cols)]
    ref = max(math.sqrt(qnorm2(c).sum()) for c in cols)
    kept: list[np.ndarray] = []
    if ref == 0.0:
        return None, 0
    for v in cols:
        for _ in range(2):
            for u in kept:
                v = v - qmul(u, _col_inner(u, v)[None, :])
        nv = math.sqrt(qnorm2(v).sum())
        if nv > tol * ref:
            kept.append(v / nv)
    if not kept:
        return None, 0
    return QMatrix(np.stack(kept, axis=1)), len(kept)


def random_qmatrix(rows: int, cols: int, rng: np.random.Generator) -> QMatrix:
    return QMatrix(rng.standard_normal((rows, cols, 4)))


def random_hermitian(n: int, rng: np.random.Generator) -> HermitianQ:
    g = random_qmatrix(n, n, rng)
    return HermitianQ(0.5 * (g.data + adjoint(g).data))


def random_sp_n(n: int, rng: np.random.Generator) -> SpNElement:
    """Haar-random element of Sp(n): Gram-Schmidt of a gaussian matrix."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        q, rank = qr_gram_schmidt(random_qmatrix(n, n, rng))
        if rank == n:
            return SpNElement(q)


def random_sp_lie(n: int, rng: np.random.Generator) -> QMatrix:
    """Gaussian element ``W`` of sp(n), i.e. ``W + W* = 0``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = random_qmatrix(n, n, rng)
    return QMatrix(0.5 * (g.data - adjoint(g).data))


def submatrix(m, rows_subset) -> QMatrix:
    """Rows of ``m`` indexed by the sorted 0-based subset, order preserved."""
    m = as_qmatrix(m)
    idx = tuple(int(i) for i in rows_subset)
    if len(idx) != m.cols:
        raise ValueError(f"subset must have {m.cols} elements, got {len(idx)}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("subset must be strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= m.rows):
        raise ValueError(f"subset {idx} out of range for {m.rows} rows")
    return QMatrix(m.data[list(idx)])


def row_subsets(n: int, p: int):
    """All sorted p-subsets of range(n), lexicographic."""
    return list(combinations(range(n), p))

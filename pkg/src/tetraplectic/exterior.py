"""Alternating forms and multivectors on R^d with dense subset-indexed storage.

Coefficients are stored for sorted index subsets in the order produced by
``itertools.combinations(range(d), k)``.  Interior products contract the
multivector's leftmost factor first, so ``i_{u^v} = i_v o i_u`` and the
pairing of ``e_S`` with ``e^S`` is 1.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial

import numpy as np

from ._backend import kernels

MAX_DIM = 16
BRACKET_TOL = 1e-12


@lru_cache(maxsize=None)
def _subsets(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(dim), k))


@lru_cache(maxsize=None)
def _masks(dim: int, k: int) -> np.ndarray:
    return np.array([sum(1 << i for i in s) for s in _subsets(dim, k)], dtype=np.int64)


@lru_cache(maxsize=None)
def _rank_of_mask(dim: int) -> np.ndarray:
    # every subset of range(dim) -> its position within its own degree
    table = np.zeros(1 << dim, dtype=np.int64)
    for k in range(dim + 1):
        table[_masks(dim, k)] = np.arange(comb(dim, k))
    return table


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


class _Alternating:
    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs=None):
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {dim}")
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        # degree > dim is the zero space (no coefficients)
        n = comb(dim, degree)
        if coeffs is None:
            c = np.zeros(n)
        else:
            c = np.array(coeffs, dtype=float).reshape(-1)
            if c.shape[0] != n:
                raise ValueError(f"expected {n} coefficients, got {c.shape[0]}")
        c.flags.writeable = False
        self.dim = dim
        self.degree = degree
        self.coeffs = c

    @classmethod
    def basis(cls, dim: int, subset):
        """Basis element for an index subset (any order; sign of the sort applied)."""
        idx = list(subset)
        if len(set(idx)) != len(idx):
            return cls(dim, len(idx))
        sign = 1.0
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if idx[a] > idx[b]:
                    sign = -sign
        out = np.zeros(comb(dim, len(idx)))
        out[cls.index(dim, sorted(idx))] = sign
        return cls(dim, len(idx), out)

    @classmethod
    def from_dict(cls, dim: int, degree: int, entries: dict):
        c = np.zeros(comb(dim, degree))
        for subset, value in entries.items():
            c += value * cls.basis(dim, subset).coeffs
        return cls(dim, degree, c)

    @staticmethod
    def index(dim: int, subset) -> int:
        return int(_rank_of_mask(dim)[sum(1 << i for i in subset)])

    def subsets(self):
        return _subsets(self.dim, self.degree)

    def __getitem__(self, subset) -> float:
        return float((self.basis(self.dim, subset).coeffs * self.coeffs).sum())

    def _same_shape(self, other) -> None:
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._same_shape(other)
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degree")
        return type(self)(self.dim, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.dim, self.degree, -self.coeffs)

    def __mul__(self, s: float):
        return type(self)(self.dim, self.degree, self.coeffs * float(s))

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def nonzero(self):
        """``(subset, value)`` pairs with nonzero value."""
        subs = self.subsets()
        return [(subs[i], float(self.coeffs[i])) for i in np.flatnonzero(self.coeffs)]

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max()) if self.coeffs.size else 0.0

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "coeffs": [[list(s), v] for s, v in self.nonzero()],
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, degree={self.degree}, nnz={np.count_nonzero(self.coeffs)})"


class AltForm(_Alternating):
    """Alternating k-form on R^d."""

    __slots__ = ()

    @classmethod
    def from_covectors(cls, *covectors) -> "AltForm":
        return cls(*_decomposable(covectors))


class MultiVector(_Alternating):
    """k-vector on R^d."""

    __slots__ = ()

    @classmethod
    def from_vectors(cls, *vectors) -> "MultiVector":
        return cls(*_decomposable(vectors))


def _decomposable(vectors):
    v = np.array(vectors, dtype=float)
    if v.ndim != 2:
        raise ValueError("expected a sequence of equal-length vectors")
    k, dim = v.shape
    subs = np.array(_subsets(dim, k), dtype=np.int64).reshape(-1, k)
    # coefficient on e_S is det of the k x k block of rows S
    blocks = v[:, subs].transpose(1, 0, 2)
    c = np.linalg.det(blocks) if k else np.ones(1)
    return dim, k, c


def wedge(a: _Alternating, b: _Alternating):
    """Exterior product with shuffle signs."""
    a._same_shape(b)
    k, l, dim = a.degree, b.degree, a.dim
    if k + l > dim:
        raise ValueError(f"degree {k}+{l} exceeds dimension {dim}")
    out = np.zeros(comb(dim, k + l))
    ia, ib = np.flatnonzero(a.coeffs), np.flatnonzero(b.coeffs)
    if ia.size and ib.size:
        ma = _masks(dim, k)[ia][:, None]
        mb = _masks(dim, l)[ib][None, :]
        inv = np.zeros((ia.size, ib.size), dtype=np.int64)
        for j in range(dim):
            inv += ((mb >> j) & 1) * _popcount(ma >> (j + 1))
        vals = a.coeffs[ia][:, None] * b.coeffs[ib][None, :] * np.where(inv % 2, -1.0, 1.0)
        ok = (ma & mb) == 0
        target = _rank_of_mask(dim)[(ma | mb)[ok]]
        np.add.at(out, target, vals[ok])
    return type(a)(dim, k + l, out)


def interior(v: MultiVector, a: AltForm) -> AltForm:
    """Contraction ``i_v a`` of a j-vector into a k-form, leftmost factor first."""
    if not isinstance(v, MultiVector) or not isinstance(a, AltForm):
        raise TypeError("interior expects (MultiVector, AltForm)")
    if v.dim != a.dim:
        raise ValueError(f"dimension mismatch: {v.dim} vs {a.dim}")
    j, k, dim = v.degree, a.degree, a.dim
    if j > k:
        raise ValueError(f"cannot contract a {j}-vector into a {k}-form")
    out = np.zeros(comb(dim, k - j))
    iv, ia = np.flatnonzero(v.coeffs), np.flatnonzero(a.coeffs)
    if iv.size and ia.size:
        ms = _masks(dim, j)[iv][:, None]
        mt = _masks(dim, k)[ia][None, :]
        rest = mt & ~ms
        expo = np.zeros((iv.size, ia.size), dtype=np.int64)
        for s in range(dim):
            expo += ((ms >> s) & 1) * _popcount(rest & ((1 << s) - 1))
        vals = v.coeffs[iv][:, None] * a.coeffs[ia][None, :] * np.where(expo % 2, -1.0, 1.0)
        ok = (ms & mt) == ms
        target = _rank_of_mask(dim)[rest[ok]]
        np.add.at(out, target, vals[ok])
    return AltForm(dim, k - j, out)


def pair(v: MultiVector, a: AltForm) -> float:
    """Full pairing of a k-vector with a k-form."""
    if v.degree != a.degree:
        raise ValueError("pairing needs equal degrees")
    return float(interior(v, a).coeffs[0])


def form_power(a: AltForm, m: int) -> AltForm:
    """m-fold wedge power; ``m = 0`` gives the constant 1."""
    if m < 0:
        raise ValueError("power must be non-negative")
    if a.degree * m > a.dim:
        raise ValueError(f"power {m} of a {a.degree}-form exceeds dimension {a.dim}")
    out = AltForm(a.dim, 0, [1.0])
    for _ in range(m):
        out = wedge(out, a)
    return out


def kernel_matrix(a: AltForm) -> np.ndarray:
    """Matrix of ``v -> i_v a``: row r holds the coefficients of ``i_{e_r} a``."""
    if a.degree < 1:
        raise ValueError("kernel matrix needs a form of positive degree")
    rows = [interior(MultiVector.basis(a.dim, [r]), a).coeffs for r in range(a.dim)]
    return np.array(rows)


def sigma_min(a: AltForm) -> float:
    """Smallest singular value of :func:`kernel_matrix`; positive iff non-degenerate."""
    return float(np.linalg.svd(kernel_matrix(a), compute_uv=False)[-1])


def volume_form(dim: int) -> AltForm:
    return AltForm(dim, dim, [1.0])


def standard_psi(m: int) -> AltForm:
    """``sum_i dx_{4i-3} ^ dx_{4i-2} ^ dx_{4i-1} ^ dx_{4i}`` on R^{4m}."""
    psi = AltForm(4 * m, 4)
    for i in range(m):
        psi = psi + AltForm.basis(4 * m, range(4 * i, 4 * i + 4))
    return psi


def check_bracket(bracket: np.ndarray, tol: float = BRACKET_TOL) -> np.ndarray:
    c = np.asarray(bracket, dtype=float)
    if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2]:
        raise ValueError(f"bracket table must have shape (d, d, d), got {c.shape}")
    scale = max(1.0, float(np.abs(c).max()))
    if np.abs(c + c.transpose(1, 0, 2)).max() > tol * scale:
        raise ValueError("bracket table is not antisymmetric")
    return c


def ce_differential_coeffs(dim: int, degree: int, coeffs, bracket) -> np.ndarray:
    """Coefficient-level Chevalley-Eilenberg differential with no dimension cap.

    Used for Lie algebras larger than :data:`MAX_DIM` (e.g. sp(3), d = 21) where
    only the degree-k and degree-(k+1) layers are materialized.
    """
    c = check_bracket(bracket)
    if c.shape[0] != dim:
        raise ValueError(f"bracket table is for dimension {c.shape[0]}, cochain for {dim}")
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (comb(dim, degree),):
        raise ValueError("coefficient vector has the wrong length")
    return kernels.ce_differential(dim, degree, np.ascontiguousarray(coeffs), np.ascontiguousarray(c))


def ce_differential(phi: AltForm, bracket) -> AltForm:
    """``dphi(X_1..X_{k+1}) = 1/(k+1) sum_{i<j} (-1)^(i+j+1) phi([X_i, X_j], X_1, ..^i..^j.., X_{k+1})``.

    ``bracket[a, b, c]`` holds the structure constants ``[X_a, X_b] = sum_c C_abc X_c``.
    """
    out = ce_differential_coeffs(phi.dim, phi.degree, phi.coeffs, bracket)
    return AltForm(phi.dim, phi.degree + 1, out)


def factorial_volume(m: int) -> AltForm:
    """``m! * vol`` on R^{4m}, the expected value of ``standard_psi(m)**m``."""
    return volume_form(4 * m) * factorial(m)

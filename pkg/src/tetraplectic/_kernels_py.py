"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_kernels`` extension; used
when the extension is missing or ``TETRAPLECTIC_PURE_PYTHON`` is set.
"""

from itertools import combinations
from math import comb

import numpy as np

from .quat import HAMILTON, qinv, qmul

NAME = "python"


def qmatmul(a, b):
    return np.einsum("ikp,kjq,pqr->ijr", a, b, HAMILTON, optimize=True)


def dieudonne_det(a, abs_tol):
    """Product of pivot norms after quaternionic elimination with partial pivoting.

    Row operations are ``row_j -= (a_jk a_kk^-1) row_k`` (left scalar
    multiplication), i.e. left multiplication by unipotent elementary matrices.
    """
    m = np.array(a, dtype=float, copy=True)
    n = m.shape[0]
    det = 1.0
    for k in range(n):
        mags = np.sqrt(np.einsum("ij,ij->i", m[k:, k], m[k:, k]))
        p = k + int(np.argmax(mags))
        if mags[p - k] < abs_tol:
            return 0.0
        if p != k:
            m[[k, p]] = m[[p, k]]
        det *= float(mags[p - k])
        if k == n - 1:
            break
        pinv = qinv(m[k, k])
        mult = qmul(m[k + 1:, k], pinv)
        m[k + 1:, k:] -= qmul(mult[:, None, :], m[k, k:][None, :, :])
    return det


def _lex_rank(subsets, dim, k):
    # rank in itertools.combinations(range(dim), k) order
    total = comb(dim, k) - 1
    binom = np.array([[comb(a, b) for b in range(k + 1)] for a in range(dim + 1)], dtype=np.int64)
    r = np.full(subsets.shape[0], total, dtype=np.int64)
    for t in range(k):
        r -= binom[dim - 1 - subsets[:, t], k - t]
    return r


def ce_differential(dim, degree, coeffs, bracket):
    """Chevalley-Eilenberg differential of a degree-k cochain (trivial coefficients).

    ``dphi(X_1..X_{k+1}) = 1/(k+1) sum_{i<j} (-1)^(i+j+1) phi([X_i, X_j], ..., ^i, ..., ^j, ...)``
    evaluated on every sorted (k+1)-subset of basis indices, with 1-based i, j.
    """
    k = degree
    coeffs = np.asarray(coeffs, dtype=float)
    bracket = np.asarray(bracket, dtype=float)
    subsets = np.array(list(combinations(range(dim), k + 1)), dtype=np.int64).reshape(-1, k + 1)
    out = np.zeros(subsets.shape[0])
    if subsets.shape[0] == 0 or k == 0:
        return out
    for i, j in combinations(range(k + 1), 2):
        sign = 1.0 if (i + j) % 2 else -1.0  # (-1)^(i+j+1) with 1-based indices
        others = [t for t in range(k + 1) if t not in (i, j)]
        rest = subsets[:, others]
        cij = bracket[subsets[:, i], subsets[:, j]]  # (Ns, dim)
        for ell in range(dim):
            c = cij[:, ell]
            live = (c != 0.0) & ~np.any(rest == ell, axis=1)
            if not live.any():
                continue
            r = rest[live]
            below = np.count_nonzero(r < ell, axis=1)
            merged = np.sort(np.concatenate([r, np.full((r.shape[0], 1), ell)], axis=1), axis=1)
            vals = coeffs[_lex_rank(merged, dim, k)]
            out[live] += sign * c[live] * np.where(below % 2, -1.0, 1.0) * vals
    return out / (k + 1)

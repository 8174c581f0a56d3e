"""The orbit 4-form ``psi_y(A1..A4) = Re Tr(y [A1, A2, A3, A4])`` on Sp(n)-orbits in hermitian matrices.

Tangent vectors to the orbit through ``y`` are ``[W, y]`` for ``W`` in sp(n).
Closedness is checked by pulling the form back to sp(n),
``Phi(W1..W4) = psi_y([W1, y], ..., [W4, y])``, and applying the
Chevalley-Eilenberg differential with the sp(n) structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .exterior import AltForm, ce_differential_coeffs, sigma_min
from .qlinalg import (
    HermitianQ,
    QMatrix,
    adjoint,
    as_qmatrix,
    random_hermitian,
    random_sp_n,
)
from .quat import HAMILTON, Quaternion, qmul, qnorm2

TANGENT_RANK_TOL = 1e-9
HP1_NORM_TOL = 1e-10

_RE_SIGN = np.array([1.0, -1.0, -1.0, -1.0])


def _perm_sign(p) -> int:
    s = 1
    for a, b in combinations(range(len(p)), 2):
        if p[a] > p[b]:
            s = -s
    return s


PERMS4 = [(p, _perm_sign(p)) for p in permutations(range(4))]
_PERM_IDX = np.array([p for p, _ in PERMS4])
_PERM_SIGN = np.array([float(s) for _, s in PERMS4])


def _bmm_small(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # batched product by broadcasting; cheaper than einsum planning for n <= 3
    return qmul(x[..., :, :, None, :], y[..., None, :, :, :]).sum(axis=-3)


@dataclass(frozen=True)
class HermitianPoint:
    y: HermitianQ
    spectrum_label: tuple[float, ...] | None = None

    @classmethod
    def diag(cls, values) -> "HermitianPoint":
        vals = tuple(float(v) for v in values)
        return cls(HermitianQ(QMatrix.real_diag(vals)), vals)

    @property
    def n(self) -> int:
        return self.y.rows


@dataclass
class OrbitTangentBasis:
    base: HermitianPoint
    lie_basis: list[QMatrix]
    tangent_vectors: list[HermitianQ]
    dim: int = field(init=False)

    def __post_init__(self):
        self.dim = len(self.tangent_vectors)


def _same_size(*mats) -> list[QMatrix]:
    mats = [as_qmatrix(m) for m in mats]
    shape = mats[0].shape
    if shape[0] != shape[1]:
        raise ValueError("expected square matrices")
    for m in mats[1:]:
        if m.shape != shape:
            raise ValueError(f"size mismatch: {m.shape} vs {shape}")
    return mats


def re_trace_pairing(a, b) -> float:
    """``Re Tr(AB)``."""
    a, b = _same_size(a, b)
    return float(np.einsum("ikp,kip,p->", a.data, b.data, _RE_SIGN))


def commutator(a, b) -> QMatrix:
    a, b = _same_size(a, b)
    return a @ b - b @ a


def four_commutator(a1, a2, a3, a4) -> QMatrix:
    """``sum_{tau in S4} sign(tau) A_tau(1) A_tau(2) A_tau(3) A_tau(4)``."""
    m = np.stack([a.data for a in _same_size(a1, a2, a3, a4)])
    pairs = _bmm_small(m[:, None], m[None, :])
    prod = _bmm_small(pairs[_PERM_IDX[:, 0], _PERM_IDX[:, 1]], pairs[_PERM_IDX[:, 2], _PERM_IDX[:, 3]])
    return QMatrix(np.tensordot(_PERM_SIGN, prod, axes=1))


def jacobi5_residual(a1, a2, a3, a4, a5) -> float:
    """Largest entry norm of ``sum_{i<j} (-1)^(i+j) [[A_i, A_j], A_1..^i..^j..A_5]``."""
    mats = _same_size(a1, a2, a3, a4, a5)
    total = np.zeros_like(mats[0].data)
    for i, j in combinations(range(5), 2):
        rest = [mats[t] for t in range(5) if t not in (i, j)]
        sign = -1.0 if (i + j) % 2 else 1.0
        total += sign * four_commutator(commutator(mats[i], mats[j]), *rest).data
    return float(np.sqrt(qnorm2(total)).max())


def psi_y(y, a1, a2, a3, a4) -> float:
    y = as_qmatrix(y.y if isinstance(y, HermitianPoint) else y)
    _same_size(y, a1, a2, a3, a4)
    return re_trace_pairing(y, four_commutator(a1, a2, a3, a4))


@lru_cache(maxsize=None)
def _sp_basis_arrays(n: int) -> np.ndarray:
    out = []
    for a in range(n):
        for u in (1, 2, 3):
            w = np.zeros((n, n, 4))
            w[a, a, u] = 1.0
            out.append(w)
    for a, b in combinations(range(n), 2):
        w = np.zeros((n, n, 4))
        w[a, b, 0], w[b, a, 0] = 1.0, -1.0
        out.append(w)
        for u in (1, 2, 3):
            w = np.zeros((n, n, 4))
            w[a, b, u] = w[b, a, u] = 1.0
            out.append(w)
    arr = np.array(out)
    arr.flags.writeable = False
    return arr


def sp_basis(n: int) -> list[QMatrix]:
    """Standard basis of sp(n): i, j, k on diagonal slots; E_ab - E_ba and u(E_ab + E_ba) off it."""
    return [QMatrix(w) for w in _sp_basis_arrays(n)]


def _bmm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("...ikp,...kjq,pqr->...ijr", x, y, HAMILTON, optimize=True)


@lru_cache(maxsize=None)
def sp_bracket_table(n: int) -> np.ndarray:
    """Structure constants ``[W_a, W_b] = sum_c C[a, b, c] W_c`` of sp(n)."""
    basis = _sp_basis_arrays(n)
    prod = _bmm(basis[:, None], basis[None, :])
    comm = prod - prod.transpose(1, 0, 2, 3, 4)
    norms = np.einsum("cijp,cijp->c", basis, basis)
    table = np.einsum("abijp,cijp->abc", comm, basis) / norms
    recon = np.einsum("abc,cijp->abijp", table, basis)
    if np.abs(recon - comm).max() > 1e-12:
        raise RuntimeError("sp(n) is not closed under the bracket; basis is wrong")
    table.flags.writeable = False
    return table


def _tangent_arrays(y: np.ndarray, lie: np.ndarray) -> np.ndarray:
    return _bmm(lie, y[None]) - _bmm(y[None], lie)


def _antisym_coeffs(y: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """``psi_y`` on every sorted 4-subset of the stacked matrices ``vecs``."""
    m = vecs.shape[0]
    subsets = np.array(list(combinations(range(m), 4)), dtype=np.int64).reshape(-1, 4)
    if subsets.shape[0] == 0:
        return np.zeros(0)
    prod = _bmm(vecs[:, None], vecs[None, :])
    yprod = _bmm(y[None, None], prod)
    g = np.einsum("abikp,cdkip,p->abcd", yprod, prod, _RE_SIGN, optimize=True)
    out = np.zeros(subsets.shape[0])
    for p, s in PERMS4:
        q = subsets[:, p]
        out += s * g[q[:, 0], q[:, 1], q[:, 2], q[:, 3]]
    return out


def orbit_tangent_basis(point: HermitianPoint) -> OrbitTangentBasis:
    """Orthonormal (under ``Re Tr(AB)``) basis of the orbit tangent space at ``y``.

    Gram-Schmidt over ``[W, y]`` for the standard sp(n) basis; the orbit
    dimension is whatever rank survives the cutoff.
    """
    y = point.y.data
    lie = _sp_basis_arrays(point.n)
    raw = _tangent_arrays(y, lie)
    ref = max(np.sqrt(np.einsum("ijp,ijp->", t, t)) for t in raw)
    kept: list[np.ndarray] = []
    if ref > 0.0:
        for t in raw:
            v = t.copy()
            for _ in range(2):
                for u in kept:
                    v -= np.einsum("ijp,jip,p->", u, v, _RE_SIGN) * u
            nv = np.sqrt(np.einsum("ijp,jip,p->", v, v, _RE_SIGN))
            if nv > TANGENT_RANK_TOL * ref:
                kept.append(v / nv)
    return OrbitTangentBasis(point, [QMatrix(w) for w in lie], [HermitianQ(v) for v in kept])


def orbit_form_as_altform(basis: OrbitTangentBasis) -> AltForm:
    """``psi_y`` expressed in the orthonormal tangent basis, as a 4-form on R^dim."""
    if basis.dim < 4:
        raise ValueError("orbit too small")
    vecs = np.array([t.data for t in basis.tangent_vectors])
    return AltForm(basis.dim, 4, _antisym_coeffs(basis.base.y.data, vecs))


def pulled_back_cochain(point: HermitianPoint) -> np.ndarray:
    """Coefficients of ``Phi(W1..W4) = psi_y([W1,y],..,[W4,y])`` on sorted 4-subsets of the sp(n) basis."""
    y = point.y.data
    return _antisym_coeffs(y, _tangent_arrays(y, _sp_basis_arrays(point.n)))


def check_closed_ce(point: HermitianPoint) -> float:
    """Largest coefficient of ``d Phi``; zero iff the orbit form is closed."""
    d = 2 * point.n * point.n + point.n
    if d < 5:
        return 0.0
    dphi = ce_differential_coeffs(d, 4, pulled_back_cochain(point), sp_bracket_table(point.n))
    return float(np.abs(dphi).max())


def lie_cochain_diagnostics(point: HermitianPoint) -> tuple[float, float]:
    """Closedness and stabilizer leakage of ``W -> Re Tr(y [W1, W2, W3, W4])`` on sp(n).

    Returns ``(max |d cochain|, max |cochain| on 4-subsets meeting the stabilizer)``.
    The first is zero by the five-term commutator identity; the second decides
    whether the cochain descends to the orbit at all.
    """
    n = point.n
    d = 2 * n * n + n
    lie = _sp_basis_arrays(n)
    coeffs = _antisym_coeffs(point.y.data, lie)
    closed = 0.0
    if d >= 5:
        closed = float(np.abs(ce_differential_coeffs(d, 4, coeffs, sp_bracket_table(n))).max())
    tang = _tangent_arrays(point.y.data, lie)
    stab = {a for a in range(d) if np.abs(tang[a]).max() < 1e-12}
    touching = [i for i, s in enumerate(combinations(range(d), 4)) if stab.intersection(s)]
    leak = float(np.abs(coeffs[touching]).max()) if touching else 0.0
    return closed, leak


def _frob(a: np.ndarray) -> float:
    return float(np.sqrt(np.einsum("ijp,ijp->", a, a)))


def check_invariance(point: HermitianPoint, trials: int, rng: np.random.Generator, u=None) -> float:
    """Max of ``|psi_{uyu*}(uA_iu*) - psi_y(A_i)| / (|y| prod |A_i|)`` over random trials.

    A fixed ``u`` may be passed; otherwise a Haar-random Sp(n) element is drawn per trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = point.n
    y = point.y
    worst = 0.0
    for _ in range(trials):
        uu = as_qmatrix(u) if u is not None else random_sp_n(n, rng)
        uh = adjoint(uu)
        mats = [random_hermitian(n, rng) for _ in range(4)]
        before = psi_y(y, *mats)
        after = psi_y(uu @ y @ uh, *[uu @ m @ uh for m in mats])
        scale = _frob(y.data) * np.prod([_frob(m.data) for m in mats])
        worst = max(worst, abs(after - before) / scale)
    return worst


def diag_moment(y) -> np.ndarray:
    """Real parts of the diagonal; the momentum map on the orbit side."""
    y = as_qmatrix(y.y if isinstance(y, HermitianPoint) else y)
    return np.array(np.diagonal(y.data[..., 0]))


def hp1_orbit_point(s2: Quaternion, s4: Quaternion) -> HermitianQ:
    """``[[|s2|^2, s2 conj(s4)], [s4 conj(s2), |s4|^2]]``, the orbit point of ``[s2 : s4]``."""
    if abs(s2.norm2() + s4.norm2() - 1.0) > HP1_NORM_TOL:
        raise ValueError("(s2, s4) must be a unit vector: |s2|^2 + |s4|^2 = 1")
    off = s2 * s4.conj()
    return HermitianQ(
        QMatrix.from_quaternions([[Quaternion(s2.norm2()), off], [off.conj(), Quaternion(s4.norm2())]])
    )


def orbit_report(point: HermitianPoint, rng: np.random.Generator, invariance_trials: int = 20) -> dict:
    """One JSON-ready record of the non-degeneracy/closedness/invariance certificate."""
    basis = orbit_tangent_basis(point)
    smin = sigma_min(orbit_form_as_altform(basis)) if basis.dim >= 4 else 0.0
    n = point.n
    quint = [random_hermitian(n, rng) for _ in range(5)]
    return {
        "spectrum": list(point.spectrum_label) if point.spectrum_label is not None else None,
        "dim": basis.dim,
        "nondegeneracy_sigma_min": smin,
        "ce_residual": check_closed_ce(point),
        "invariance_discrepancy": float(check_invariance(point, invariance_trials, rng)),
        "jacobi5_residual": jacobi5_residual(*quint),
    }

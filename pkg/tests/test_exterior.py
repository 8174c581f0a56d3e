from itertools import combinations, permutations
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tetraplectic.exterior import (
    AltForm,
    MultiVector,
    ce_differential,
    ce_differential_coeffs,
    check_bracket,
    factorial_volume,
    form_power,
    interior,
    kernel_matrix,
    pair,
    sigma_min,
    standard_psi,
    volume_form,
    wedge,
)
from tetraplectic.orbit_forms import sp_bracket_table


def _perm_sign(p):
    s = 1
    for a, b in combinations(range(len(p)), 2):
        if p[a] > p[b]:
            s = -s
    return s


def _rand(cls, dim, k, rng):
    return cls(dim, k, rng.standard_normal(comb(dim, k)))


def test_basis_signs():
    e12 = AltForm.basis(3, [0, 1])
    assert AltForm.basis(3, [1, 0]).coeffs.tolist() == (-e12).coeffs.tolist()
    assert not AltForm.basis(3, [1, 1]).coeffs.any()
    e1, e2 = AltForm.basis(3, [0]), AltForm.basis(3, [1])
    assert (e1 ^ e2)[(0, 1)] == 1.0
    assert (e2 ^ e1)[(0, 1)] == -1.0


def test_hand_contractions():
    e12 = AltForm.basis(2, [0, 1])
    v1, v2 = MultiVector.basis(2, [0]), MultiVector.basis(2, [1])
    assert interior(v1, e12)[(1,)] == 1.0
    assert interior(v2, e12)[(0,)] == -1.0
    assert pair(MultiVector.basis(2, [0, 1]), e12) == 1.0
    # dx1 ^ dx2 ^ dx3 ^ dx4 contracted with d2 ^ d3 ^ d4 leaves -dx1
    out = interior(MultiVector.basis(4, [1, 2, 3]), volume_form(4))
    assert out.coeffs.tolist() == [-1.0, 0.0, 0.0, 0.0]


def test_decomposable_wedge_oracle(rng):
    for dim, k, l in [(5, 2, 2), (6, 1, 3), (6, 3, 3), (4, 0, 2)]:
        a = rng.standard_normal((k, dim))
        b = rng.standard_normal((l, dim))
        lhs = wedge(AltForm(dim, k, AltForm.from_covectors(*a).coeffs if k else [1.0]), AltForm.from_covectors(*b))
        rhs = AltForm.from_covectors(*a, *b)
        np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, atol=1e-12)


def test_pairing_is_gram_determinant(rng):
    for dim, k in [(4, 2), (6, 3), (5, 5)]:
        vs = rng.standard_normal((k, dim))
        fs = rng.standard_normal((k, dim))
        expected = np.linalg.det(fs @ vs.T)
        assert np.isclose(pair(MultiVector.from_vectors(*vs), AltForm.from_covectors(*fs)), expected, rtol=1e-10)


def test_single_vector_contraction_oracle(rng):
    dim, k = 6, 3
    fs = rng.standard_normal((k, dim))
    v = rng.standard_normal(dim)
    expected = AltForm(dim, k - 1)
    for r in range(k):
        rest = [fs[s] for s in range(k) if s != r]
        expected = expected + AltForm.from_covectors(*rest) * ((-1) ** r * float(fs[r] @ v))
    got = interior(MultiVector.from_vectors(v), AltForm.from_covectors(*fs))
    np.testing.assert_allclose(got.coeffs, expected.coeffs, atol=1e-12)


def test_multivector_contracts_leftmost_first(rng):
    dim = 5
    a = _rand(AltForm, dim, 4, rng)
    u, w = rng.standard_normal(dim), rng.standard_normal(dim)
    uv = MultiVector.from_vectors(u, w)
    step = interior(MultiVector.from_vectors(w), interior(MultiVector.from_vectors(u), a))
    np.testing.assert_allclose(interior(uv, a).coeffs, step.coeffs, atol=1e-12)


degrees = st.integers(0, 3)


@given(st.integers(3, 8), degrees, degrees, degrees, st.integers(0, 2**32 - 1))
def test_wedge_associative_and_graded(dim, k, l, m, seed):
    if k + l + m > dim:
        return
    rng = np.random.default_rng(seed)
    a, b, c = _rand(AltForm, dim, k, rng), _rand(AltForm, dim, l, rng), _rand(AltForm, dim, m, rng)
    np.testing.assert_allclose(((a ^ b) ^ c).coeffs, (a ^ (b ^ c)).coeffs, atol=1e-12)
    np.testing.assert_allclose((a ^ b).coeffs, (-1) ** (k * l) * (b ^ a).coeffs, atol=1e-12)


@given(st.integers(2, 8), st.integers(0, 3), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_contraction_adjunction(dim, j, extra, seed):
    k = j + extra
    if k > dim:
        return
    rng = np.random.default_rng(seed)
    v, u, a = _rand(MultiVector, dim, j, rng), _rand(MultiVector, dim, extra, rng), _rand(AltForm, dim, k, rng)
    assert abs(pair(u, interior(v, a)) - pair(wedge(v, u), a)) <= 1e-12 * max(1.0, np.abs(a.coeffs).sum() * 10)


def test_standard_psi_powers_and_kernel():
    for m in (1, 2, 3):
        psi = standard_psi(m)
        np.testing.assert_array_equal(form_power(psi, m).coeffs, factorial_volume(m).coeffs)
        assert np.linalg.matrix_rank(kernel_matrix(psi)) == 4 * m
        assert sigma_min(psi) > 0.5
    assert form_power(standard_psi(2), 2)[tuple(range(8))] == 2.0
    assert sigma_min(AltForm.basis(5, [0, 1, 2, 3])) < 1e-12


def test_errors():
    with pytest.raises(ValueError):
        wedge(AltForm(3, 2), AltForm(3, 2))
    with pytest.raises(ValueError):
        wedge(AltForm(3, 1), AltForm(4, 1))
    with pytest.raises(ValueError):
        interior(MultiVector(4, 3), AltForm(4, 2))
    with pytest.raises(TypeError):
        interior(AltForm(4, 1), AltForm(4, 2))
    with pytest.raises(ValueError):
        form_power(standard_psi(1), 2)
    with pytest.raises(ValueError):
        AltForm(17, 1)
    with pytest.raises(ValueError, match="not antisymmetric"):
        check_bracket(np.ones((3, 3, 3)))


# ---------- Chevalley-Eilenberg differential against a dense-tensor oracle ----------

def _dense(dim, k, coeffs):
    t = np.zeros((dim,) * k)
    for c, s in zip(coeffs, combinations(range(dim), k)):
        for p in permutations(range(k)):
            t[tuple(s[i] for i in p)] = _perm_sign(p) * c
    return t


def _ce_oracle(dim, k, coeffs, bracket):
    t = _dense(dim, k, coeffs)
    out = []
    for xs in combinations(range(dim), k + 1):
        total = 0.0
        for i, j in combinations(range(k + 1), 2):
            rest = [xs[r] for r in range(k + 1) if r not in (i, j)]
            # 1-based (-1)^(i+j+1) equals 0-based (-1)^(i+j+1) since the shift is even
            sign = (-1) ** (i + j + 1)
            total += sign * sum(bracket[xs[i], xs[j], c] * t[(c, *rest)] for c in range(dim))
        out.append(total / (k + 1))
    return np.array(out)


def _random_bracket(dim, rng):
    c = rng.standard_normal((dim, dim, dim))
    return c - c.transpose(1, 0, 2)


@pytest.mark.parametrize("dim,k", [(3, 1), (4, 2), (5, 2), (6, 3), (5, 4)])
def test_ce_matches_dense_oracle(dim, k, rng):
    br = _random_bracket(dim, rng)
    coeffs = rng.standard_normal(comb(dim, k))
    np.testing.assert_allclose(ce_differential_coeffs(dim, k, coeffs, br), _ce_oracle(dim, k, coeffs, br), atol=1e-12)


def test_ce_on_sp1():
    # sp(1) = span(i, j, k) with [i, j] = 2k; sign (-1)^(1+2+1) = +1, so d(e^k) = (1/2) * 2 e^{ij}
    br = sp_bracket_table(1)
    assert br[0, 1, 2] == 2.0
    d = ce_differential(AltForm.basis(3, [2]), br)
    assert d.coeffs.tolist() == [1.0, 0.0, 0.0]
    assert ce_differential(volume_form(3), br).coeffs.size == 0


def test_ce_squares_to_zero_on_sp2(rng):
    br = sp_bracket_table(2)
    for k in (1, 2):
        phi = _rand(AltForm, 10, k, rng)
        dd = ce_differential(ce_differential(phi, br), br)
        assert np.abs(dd.coeffs).max() < 1e-12

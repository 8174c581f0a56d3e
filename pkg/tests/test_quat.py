import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tetraplectic.quat import (
    HAMILTON,
    I,
    J,
    K,
    ONE,
    ImQuaternion,
    Quaternion,
    UnitQuaternion,
    angles_to_unit,
    exp_im,
    hyperspherical_angles,
    log_unit,
    polar,
    qconj,
    qinv,
    qmul,
    qnorm2,
    random_unit,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)
ims = st.builds(ImQuaternion, finite, finite, finite)


def _arr(q):
    return np.array(q.to_list())


def test_unit_products():
    assert I * J == K and J * K == I and K * I == J
    assert J * I == -K and K * J == -I and I * K == -J
    assert I * I == -ONE and J * J == -ONE and K * K == -ONE


def test_hand_product():
    # (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
    assert Quaternion(1, 1) * Quaternion(1, 0, 1) == Quaternion(1, 1, 1, 1)
    assert Quaternion(1, 0, 1) * Quaternion(1, 1) == Quaternion(1, 1, 1, -1)


def test_hamilton_tensor_matches_scalar_product(rng):
    for _ in range(20):
        a, b = rng.standard_normal(4), rng.standard_normal(4)
        scalar = Quaternion.from_array(a) * Quaternion.from_array(b)
        np.testing.assert_allclose(np.einsum("a,b,abc->c", a, b, HAMILTON), _arr(scalar), atol=1e-14)
        np.testing.assert_allclose(qmul(a, b), _arr(scalar), atol=1e-14)


@given(quats, quats)
def test_norm_multiplicative(a, b):
    na, nb = abs(a), abs(b)
    assert abs(abs(a * b) - na * nb) <= 1e-13 * max(na * nb, 1e-300)


@given(quats, quats)
def test_conj_reverses_products(a, b):
    lhs, rhs = _arr((a * b).conj()), _arr(b.conj() * a.conj())
    assert np.abs(lhs - rhs).max() <= 4 * np.finfo(float).eps * max(abs(a) * abs(b), 1e-300)


@given(ims, ims)
def test_im_commutator_is_twice_cross(u, v):
    c = u.as_quaternion() * v.as_quaternion() - v.as_quaternion() * u.as_quaternion()
    assert abs(c.w) <= 1e-15 * max(1.0, u.norm() * v.norm())
    cr = u.cross(v)
    np.testing.assert_allclose([c.x, c.y, c.z], [2 * cr.x, 2 * cr.y, 2 * cr.z], atol=1e-12 * max(1, u.norm() * v.norm()))
    b = u.bracket(v)
    np.testing.assert_allclose([b.x, b.y, b.z], [c.x, c.y, c.z], atol=1e-12 * max(1, u.norm() * v.norm()))


def test_inverse_and_division():
    q = Quaternion(1, 2, -1, 0.5)
    np.testing.assert_allclose(_arr(q * q.inverse()), [1, 0, 0, 0], atol=1e-15)
    with pytest.raises(ZeroDivisionError):
        Quaternion().inverse()


def test_unit_quaternion_normalizes_and_rejects_zero():
    u = UnitQuaternion(3, 0, 4, 0)
    assert math.isclose(abs(u), 1.0, abs_tol=1e-15)
    with pytest.raises(ValueError):
        UnitQuaternion(0, 0, 0, 0)


def test_polar():
    r, u = polar(Quaternion(0, 3, 0, 4))
    assert r == 5.0
    assert math.isclose(u.x, 0.6) and math.isclose(u.z, 0.8)
    with pytest.raises(ValueError, match="polar undefined at 0"):
        polar(Quaternion())


def test_exp_known_values():
    e = exp_im(ImQuaternion(math.pi / 2, 0, 0))
    np.testing.assert_allclose(_arr(e), [0, 1, 0, 0], atol=1e-15)
    e = exp_im(ImQuaternion(0, 0, math.pi))
    np.testing.assert_allclose(_arr(e), [-1, 0, 0, 0], atol=1e-15)


@given(st.floats(0, 3.0), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_exp_log_roundtrip(r, a, b, c):
    n = math.sqrt(a * a + b * b + c * c)
    if n < 1e-3:
        return
    v = ImQuaternion(r * a / n, r * b / n, r * c / n)
    back = log_unit(exp_im(v))
    assert max(abs(back.x - v.x), abs(back.y - v.y), abs(back.z - v.z)) <= 1e-12


def test_log_cut_locus():
    with pytest.raises(ValueError, match="cut locus"):
        log_unit(Quaternion(-1.0))


def test_hyperspherical_chart(rng):
    assert hyperspherical_angles(ONE) == (0.0, 0.0, 0.0)
    with pytest.raises(ValueError, match="chart singular"):
        hyperspherical_angles(Quaternion(0.0, 1.0))
    for _ in range(50):
        u = random_unit(rng)
        a, b, c = hyperspherical_angles(u)
        np.testing.assert_allclose(_arr(angles_to_unit(a, b, c)), _arr(u), atol=1e-13)


def test_array_helpers(rng):
    a = rng.standard_normal((5, 4))
    np.testing.assert_allclose(qmul(a, qinv(a)), np.tile([1.0, 0, 0, 0], (5, 1)), atol=1e-13)
    np.testing.assert_allclose(qnorm2(a), (a * a).sum(axis=1))
    np.testing.assert_allclose(qconj(qconj(a)), a)

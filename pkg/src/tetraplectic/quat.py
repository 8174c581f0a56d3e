"""Quaternions, the unit group Sp(1) and its Lie algebra.

Scalar quaternions are small immutable value objects.  Array code elsewhere
in the package stores quaternions as trailing axes of length 4 in the order
``[w, x, y, z]``; the helpers at the bottom of this module operate on that
layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-12
CHART_TOL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(c) for c in arr)
        return cls(w, x, y, z)

    def to_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.to_list(), dtype=dtype or float)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        s = float(other)
        return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)

    def __rmul__(self, other):
        s = float(other)
        return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)

    def __truediv__(self, s: float) -> "Quaternion":
        return Quaternion(self.w / s, self.x / s, self.y / s, self.z / s)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion inverse undefined at 0")
        return self.conj() / n2

    def real(self) -> float:
        return self.w

    def imag(self) -> "ImQuaternion":
        return ImQuaternion(self.x, self.y, self.z)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a*b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


class UnitQuaternion(Quaternion):
    """Element of Sp(1).  Any nonzero input is renormalized onto S^3."""

    def __init__(self, w: float = 1.0, x: float = 0.0, y: float = 0.0, z: float = 0.0):
        n = math.sqrt(w * w + x * x + y * y + z * z)
        if n == 0.0:
            raise ValueError("cannot normalize the zero quaternion")
        if abs(n - 1.0) > UNIT_TOL:
            w, x, y, z = w / n, x / n, y / n, z / n
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def of(cls, q: Quaternion) -> "UnitQuaternion":
        return cls(q.w, q.x, q.y, q.z)


@dataclass(frozen=True)
class ImQuaternion:
    """Purely imaginary quaternion, i.e. an element of sp(1) = R^3."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def cross(self, other: "ImQuaternion") -> "ImQuaternion":
        return ImQuaternion(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def bracket(self, other: "ImQuaternion") -> "ImQuaternion":
        """Commutator uv - vu; equals twice the cross product."""
        u, v = self.as_quaternion(), other.as_quaternion()
        c = u * v - v * u
        return ImQuaternion(c.x, c.y, c.z)


def polar(q: Quaternion) -> tuple[float, UnitQuaternion]:
    r = abs(q)
    if r == 0.0:
        raise ValueError("polar undefined at 0")
    return r, UnitQuaternion(q.w / r, q.x / r, q.y / r, q.z / r)


def exp_im(v: ImQuaternion) -> UnitQuaternion:
    theta = v.norm()
    if theta == 0.0:
        return UnitQuaternion(1.0)
    s = math.sin(theta) / theta
    return UnitQuaternion(math.cos(theta), v.x * s, v.y * s, v.z * s)


def log_unit(u: Quaternion) -> ImQuaternion:
    """Inverse of :func:`exp_im` on the open ball of radius pi."""
    s = math.sqrt(u.x * u.x + u.y * u.y + u.z * u.z)
    if s <= UNIT_TOL and u.w < 0.0:
        raise ValueError("cut locus: log undefined at -1")
    if s == 0.0:
        return ImQuaternion()
    theta = math.atan2(s, u.w)
    f = theta / s
    return ImQuaternion(u.x * f, u.y * f, u.z * f)


def hyperspherical_angles(u: Quaternion) -> tuple[float, float, float]:
    """Chart on S^3: w = cos a, x = sin a cos b, y = sin a sin b cos c, z = sin a sin b sin c.

    Angles lie in a in [0, pi], b in [0, pi], c in (-pi, pi].  The chart is
    singular where sin(a) sin(b) = 0; such points raise, except the identity,
    which is accepted as the chart origin and maps to (0, 0, 0).
    """
    w, x, y, z = u.w, u.x, u.y, u.z
    n = math.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / n, x / n, y / n, z / n
    ryz = math.hypot(y, z)
    rxyz = math.hypot(x, ryz)
    if rxyz <= CHART_TOL and w > 0.0:
        return 0.0, 0.0, 0.0
    # rxyz = sin a, ryz = sin a sin b
    if ryz <= CHART_TOL:
        raise ValueError("chart singular")
    return math.atan2(rxyz, w), math.atan2(ryz, x), math.atan2(z, y)


def angles_to_unit(a: float, b: float, c: float) -> UnitQuaternion:
    sa, sb = math.sin(a), math.sin(b)
    return UnitQuaternion(math.cos(a), sa * math.cos(b), sa * sb * math.cos(c), sa * sb * math.sin(c))


def random_unit(rng: np.random.Generator) -> UnitQuaternion:
    """Haar-distributed element of Sp(1) (normalized 4D gaussian)."""
    while True:
        g = rng.standard_normal(4)
        if np.dot(g, g) > 0.0:
            return UnitQuaternion(*(float(c) for c in g))


# ---------------------------------------------------------------------------
# array helpers: trailing axis of length 4 holds [w, x, y, z]

def _hamilton_tensor() -> np.ndarray:
    t = np.zeros((4, 4, 4))
    basis = [ONE, I, J, K]
    for a, qa in enumerate(basis):
        for b, qb in enumerate(basis):
            t[a, b] = qa * qb
    return t


# (p q)_c = sum_ab p_a q_b HAMILTON[a, b, c]
HAMILTON = _hamilton_tensor()
_CONJ_SIGN = np.array([1.0, -1.0, -1.0, -1.0])


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting Hamilton product of quaternion arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ_SIGN


def qnorm2(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return np.einsum("...i,...i->...", a, a)


def qinv(a: np.ndarray) -> np.ndarray:
    return qconj(a) / qnorm2(a)[..., None]


def random_units(rng: np.random.Generator, shape) -> np.ndarray:
    """Array of Haar-random unit quaternions with the given leading shape."""
    shape = (shape,) if isinstance(shape, int) else tuple(shape)
    g = rng.standard_normal(shape + (4,))
    return g / np.sqrt(qnorm2(g))[..., None]

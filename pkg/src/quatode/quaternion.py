"""Quaternion arithmetic and the embedding of H into R^4 column vectors.

Component order is fixed once and for all as (scalar, i, j, k); the constant
translation tables and the stacked-vector convention all assume it.
"""

import math

import numpy as np

from .errors import DomainError


class Quaternion:
    """Element of the quaternion algebra, stored as four real components."""

    __slots__ = ("q0", "q1", "q2", "q3")

    def __init__(self, q0=0.0, q1=0.0, q2=0.0, q3=0.0):
        self.q0 = float(q0)
        self.q1 = float(q1)
        self.q2 = float(q2)
        self.q3 = float(q3)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.q0 + other.q0, self.q1 + other.q1,
                          self.q2 + other.q2, self.q3 + other.q3)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.q0 - other.q0, self.q1 - other.q1,
                          self.q2 - other.q2, self.q3 - other.q3)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __mul__(self, other):
        """Hamilton product (non-commutative); scalars act componentwise."""
        if isinstance(other, (int, float)):
            return Quaternion(self.q0 * other, self.q1 * other,
                              self.q2 * other, self.q3 * other)
        a, b = self, other
        return Quaternion(
            a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return _coerce(other) * self

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def conj(self):
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def norm(self):
        return math.sqrt(self.q0 ** 2 + self.q1 ** 2
                         + self.q2 ** 2 + self.q3 ** 2)

    def inverse(self):
        n2 = self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2
        if n2 == 0.0:
            raise DomainError("zero quaternion has no inverse")
        return Quaternion(self.q0 / n2, -self.q1 / n2,
                          -self.q2 / n2, -self.q3 / n2)

    def exp(self):
        """Quaternion exponential e^q = e^{q0} (cos|v| + (v/|v|) sin|v|)."""
        vnorm = math.sqrt(self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2)
        scale = math.exp(self.q0)
        if vnorm == 0.0:
            return Quaternion(scale)
        s = scale * math.sin(vnorm) / vnorm
        return Quaternion(scale * math.cos(vnorm),
                          s * self.q1, s * self.q2, s * self.q3)

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.q0 == other.q0 and self.q1 == other.q1
                and self.q2 == other.q2 and self.q3 == other.q3)

    def __hash__(self):
        return hash((self.q0, self.q1, self.q2, self.q3))

    def isclose(self, other, atol=1e-12):
        other = _coerce(other)
        return (self - other).norm() <= atol

    # -- conversions ------------------------------------------------------

    def components(self):
        return (self.q0, self.q1, self.q2, self.q3)

    def to_json(self):
        return {"q0": self.q0, "q1": self.q1, "q2": self.q2, "q3": self.q3}

    @classmethod
    def from_json(cls, obj):
        return cls(obj.get("q0", 0.0), obj.get("q1", 0.0),
                   obj.get("q2", 0.0), obj.get("q3", 0.0))

    def __repr__(self):
        return "Quaternion(%r, %r, %r, %r)" % self.components()

    def __str__(self):
        from .parser import format_quaternion
        return format_quaternion(self)


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(value)
    raise TypeError("cannot interpret %r as a quaternion" % (value,))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)

#: basis in the fixed component order
BASIS = (ONE, I, J, K)


def to_column(q):
    """Embed a quaternion as the column vector (q0, q1, q2, q3)^T."""
    return np.array([q.q0, q.q1, q.q2, q.q3])


def from_column(col):
    col = np.asarray(col, dtype=float).reshape(4)
    return Quaternion(col[0], col[1], col[2], col[3])


def stack_columns(quats):
    """Stack quaternions into one real vector, component r at rows 4r..4r+3."""
    return np.concatenate([to_column(q) for q in quats])


def unstack_columns(vec):
    vec = np.asarray(vec, dtype=float).reshape(-1)
    if vec.size % 4:
        raise DomainError("stacked quaternion vector length must be 4n")
    return [from_column(vec[4 * r:4 * r + 4]) for r in range(vec.size // 4)]

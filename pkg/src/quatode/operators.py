"""The 16-dimensional real algebra of left/right quaternion multiplications.

A real-linear map on the quaternions is a combination sum a[mu][nu] L_mu R_nu
where L_mu multiplies by the basis quaternion e_mu from the left and R_nu by
e_nu from the right.  Left and right multiplications commute with each other;
composition is resolved through the Hamilton structure constants, never
through the 4x4 matrix representation (that equivalence is a theorem the
translation module tests, not an implementation shortcut).
"""

import enum

import numpy as np

from .errors import DomainError
from .quaternion import BASIS, Quaternion

def _hamilton_table():
    table = []
    for a in range(4):
        row = []
        for b in range(4):
            prod = BASIS[a] * BASIS[b]
            comps = prod.components()
            idx = max(range(4), key=lambda c: abs(comps[c]))
            row.append((int(round(comps[idx])), idx))
        table.append(tuple(row))
    return tuple(table)


#: Hamilton table for basis products: _BASIS_MUL[a][b] = (sign, index) with
#: e_a * e_b = sign * e_index.
_BASIS_MUL = _hamilton_table()


class LinearityClass(enum.Enum):
    """Strictest linearity-from-the-right an operator satisfies."""

    H_linear = "H"
    C_linear = "C"
    R_linear = "R"


class RealLinearOperator:
    """Dense 4x4 coefficient array over the L_mu R_nu basis."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.coeffs = np.zeros((4, 4))
        else:
            arr = np.array(coeffs, dtype=float)
            if arr.shape != (4, 4):
                raise DomainError("operator coefficients must be 4x4")
            self.coeffs = arr

    @classmethod
    def basis(cls, mu, nu):
        op = cls()
        op.coeffs[mu, nu] = 1.0
        return op

    @classmethod
    def identity(cls):
        return cls.basis(0, 0)

    @classmethod
    def zero(cls):
        return cls()

    # -- vector-space structure --------------------------------------------

    def __add__(self, other):
        other = _coerce_op(other)
        return RealLinearOperator(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_op(other)
        return RealLinearOperator(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return _coerce_op(other) - self

    def __neg__(self):
        return RealLinearOperator(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return RealLinearOperator(self.coeffs * other)
        if isinstance(other, RealLinearOperator):
            return compose(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return RealLinearOperator(self.coeffs * other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, RealLinearOperator):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def isclose(self, other, atol=1e-12):
        other = _coerce_op(other)
        return float(np.max(np.abs(self.coeffs - other.coeffs))) <= atol

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    # -- algebra -----------------------------------------------------------

    def apply(self, q):
        return apply(self, q)

    def compose(self, other):
        return compose(self, other)

    def classify(self, zero_tol=0.0):
        return classify(self, zero_tol)

    def __repr__(self):
        from .parser import format_operator
        return "<RealLinearOperator %s>" % format_operator(self)


def _coerce_op(value):
    if isinstance(value, RealLinearOperator):
        return value
    if isinstance(value, (int, float)):
        return RealLinearOperator.identity() * value
    raise TypeError("cannot interpret %r as an operator" % (value,))


def apply(op, q):
    """Act on a quaternion: sum a[mu][nu] e_mu q e_nu."""
    out = Quaternion()
    c = op.coeffs
    for mu in range(4):
        for nu in range(4):
            a = c[mu, nu]
            if a != 0.0:
                out = out + (BASIS[mu] * q * BASIS[nu]) * a
    return out


def compose(a, b):
    """Operator product: apply(compose(a, b), q) == apply(a, apply(b, q)).

    Left factors multiply as e_muA * e_muB.  Right factors act
    contravariantly: applying R_nuB first and R_nuA second multiplies from
    the right by e_nuB * e_nuA, in that order.
    """
    out = np.zeros((4, 4))
    ca, cb = a.coeffs, b.coeffs
    for mua in range(4):
        for nua in range(4):
            f = ca[mua, nua]
            if f == 0.0:
                continue
            for mub in range(4):
                for nub in range(4):
                    g = cb[mub, nub]
                    if g == 0.0:
                        continue
                    sl, ml = _BASIS_MUL[mua][mub]
                    sr, mr = _BASIS_MUL[nub][nua]
                    out[ml, mr] += f * g * sl * sr
    return RealLinearOperator(out)


def classify(op, zero_tol=0.0):
    """Strictest linearity class the coefficient support allows.

    ``zero_tol`` = 0 tests exact zeros (coefficients as parsed); pass a small
    threshold for operators recovered from numeric back-translation.
    """
    c = np.abs(op.coeffs)
    if np.all(c[:, 1:] <= zero_tol):
        return LinearityClass.H_linear
    if np.all(c[:, 2:] <= zero_tol):
        return LinearityClass.C_linear
    return LinearityClass.R_linear


#: the named basis operators
IDENTITY = RealLinearOperator.identity()
L_i = RealLinearOperator.basis(1, 0)
L_j = RealLinearOperator.basis(2, 0)
L_k = RealLinearOperator.basis(3, 0)
R_i = RealLinearOperator.basis(0, 1)
R_j = RealLinearOperator.basis(0, 2)
R_k = RealLinearOperator.basis(0, 3)


def basis_operator(mu, nu):
    return RealLinearOperator.basis(mu, nu)


class OperatorMatrix:
    """Square array of real-linear operators acting on quaternion vectors."""

    def __init__(self, entries):
        n = len(entries)
        for row in entries:
            if len(row) != n:
                raise DomainError("operator matrix must be square")
        self.n = n
        self.entries = [list(row) for row in entries]

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def apply(self, quats):
        """Matrix action on a vector of quaternions."""
        if len(quats) != self.n:
            raise DomainError("vector length does not match matrix size")
        out = []
        for r in range(self.n):
            acc = Quaternion()
            for c in range(self.n):
                acc = acc + apply(self.entries[r][c], quats[c])
            out.append(acc)
        return out

    def classify(self, zero_tol=0.0):
        """Loosest class among the entries (H < C < R)."""
        order = [LinearityClass.H_linear, LinearityClass.C_linear,
                 LinearityClass.R_linear]
        worst = LinearityClass.H_linear
        for row in self.entries:
            for op in row:
                cls = classify(op, zero_tol)
                if order.index(cls) > order.index(worst):
                    worst = cls
        return worst

    def isclose(self, other, atol=1e-12):
        if self.n != other.n:
            return False
        return all(self.entries[r][c].isclose(other.entries[r][c], atol)
                   for r in range(self.n) for c in range(self.n))

"""Translation between quaternionic operators and real matrices.

The two constant tables below are transcribed from their published form: one
maps each basis operator L_mu R_nu to its 4x4 real matrix over the column
embedding, the other reconstructs the sixteen operator coefficients from the
sixteen matrix entries with +-1/4 weights.  Neither transcription is trusted
on its own: ``_self_test`` regenerates the first table from Hamilton
products, derives the inverse map from orthogonality, and compares both
against the transcriptions.  A mismatch anywhere raises at import time.

``real_to_op`` uses the derived inverse (exact +-1/4 entries), so the
forward/backward pair is an exact linear bijection in floating point.
"""

import numpy as np

from .errors import DomainError, StructureError
from .operators import OperatorMatrix, RealLinearOperator
from .quaternion import BASIS, to_column

# 4x4 matrices of the basis operators, indexed [mu][nu]; transcription of
# the published table, verified below against the Hamilton product.
_T = {
    (0, 0): [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    (0, 1): [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    (0, 2): [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    (0, 3): [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    (1, 0): [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    (1, 1): [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    (1, 2): [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    (1, 3): [[0, 0, -1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, -1, 0, 0]],
    (2, 0): [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    (2, 1): [[0, 0, 0, -1], [0, 0, -1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    (2, 2): [[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
    (2, 3): [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]],
    (3, 0): [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    (3, 1): [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]],
    (3, 2): [[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]],
    (3, 3): [[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
}

TABLE1 = np.zeros((4, 4, 4, 4))
for (_mu, _nu), _m in _T.items():
    TABLE1[_mu, _nu] = np.array(_m, dtype=float)

# Reconstruction weights: coefficient a[mu][nu] collects +-1/4 times four
# matrix entries.  Transcribed row by row; each row is
# (matrix entry (r, c)) -> [((mu, nu), sign), ...].
_OPNAME = {
    "1": (0, 0), "Li": (1, 0), "Lj": (2, 0), "Lk": (3, 0),
    "Ri": (0, 1), "Rj": (0, 2), "Rk": (0, 3),
    "LiRi": (1, 1), "LiRj": (1, 2), "LiRk": (1, 3),
    "LjRi": (2, 1), "LjRj": (2, 2), "LjRk": (2, 3),
    "LkRi": (3, 1), "LkRj": (3, 2), "LkRk": (3, 3),
}

_T2_ROWS = {
    # diagonal entries against [1, LiRi, LjRj, LkRk]
    (0, 0): [("1", +1), ("LiRi", -1), ("LjRj", -1), ("LkRk", -1)],
    (1, 1): [("1", +1), ("LiRi", -1), ("LjRj", +1), ("LkRk", +1)],
    (2, 2): [("1", +1), ("LiRi", +1), ("LjRj", -1), ("LkRk", +1)],
    (3, 3): [("1", +1), ("LiRi", +1), ("LjRj", +1), ("LkRk", -1)],
    # (0,1)/(1,0)/(2,3)/(3,2) against [Li, Ri, LjRk, LkRj]
    (0, 1): [("Li", -1), ("Ri", -1), ("LjRk", +1), ("LkRj", -1)],
    (1, 0): [("Li", +1), ("Ri", +1), ("LjRk", +1), ("LkRj", -1)],
    (2, 3): [("Li", -1), ("Ri", +1), ("LjRk", -1), ("LkRj", -1)],
    (3, 2): [("Li", +1), ("Ri", -1), ("LjRk", -1), ("LkRj", -1)],
    # (0,2)/(2,0)/(1,3)/(3,1) against [Lj, Rj, LiRk, LkRi]
    (0, 2): [("Lj", -1), ("Rj", -1), ("LiRk", -1), ("LkRi", +1)],
    (2, 0): [("Lj", +1), ("Rj", +1), ("LiRk", -1), ("LkRi", +1)],
    (1, 3): [("Lj", +1), ("Rj", -1), ("LiRk", -1), ("LkRi", -1)],
    (3, 1): [("Lj", -1), ("Rj", +1), ("LiRk", -1), ("LkRi", -1)],
    # (0,3)/(3,0)/(1,2)/(2,1) against [Lk, Rk, LiRj, LjRi]
    (0, 3): [("Lk", -1), ("Rk", -1), ("LiRj", +1), ("LjRi", -1)],
    (3, 0): [("Lk", +1), ("Rk", +1), ("LiRj", +1), ("LjRi", -1)],
    (1, 2): [("Lk", -1), ("Rk", +1), ("LiRj", -1), ("LjRi", -1)],
    (2, 1): [("Lk", +1), ("Rk", -1), ("LiRj", -1), ("LjRi", -1)],
}


def _coeff_matrix():
    """16x16 map from operator coefficients (row-major) to matrix entries."""
    m = np.zeros((16, 16))
    for mu in range(4):
        for nu in range(4):
            m[:, 4 * mu + nu] = TABLE1[mu, nu].reshape(16)
    return m


_T1M = _coeff_matrix()
# Basis matrices are Frobenius-orthogonal with norm 2, so the inverse of the
# coefficient map is its transpose over 4; entries are exact +-0.25.
_T2M = _T1M.T / 4.0


def _table2_matrix():
    m = np.zeros((16, 16))
    for (r, c), contrib in _T2_ROWS.items():
        for name, sign in contrib:
            mu, nu = _OPNAME[name]
            m[4 * mu + nu, 4 * r + c] = sign / 4.0
    return m


def _self_test():
    for mu in range(4):
        for nu in range(4):
            computed = np.column_stack(
                [to_column(BASIS[mu] * q * BASIS[nu]) for q in BASIS])
            if not np.array_equal(TABLE1[mu, nu], computed):
                raise AssertionError(
                    "translation table entry L_%d R_%d does not match the "
                    "Hamilton product" % (mu, nu))
    if not np.array_equal(_T1M.T @ _T1M, 4.0 * np.eye(16)):
        raise AssertionError("translation basis lost orthogonality")
    if not np.array_equal(_T2M, _table2_matrix()):
        raise AssertionError(
            "transcribed reconstruction table disagrees with the computed "
            "inverse of the forward table")
    # homomorphism over all basis pairs, exact in floating point
    for a in range(16):
        ma = TABLE1[a // 4, a % 4]
        for b in range(16):
            mb = TABLE1[b // 4, b % 4]
            prod = ma @ mb
            op = real_to_op(prod)
            if not np.array_equal(op_to_real(op), prod):
                raise AssertionError("translation roundtrip broke on a "
                                     "basis product")


def op_to_real(op):
    """4x4 real matrix of an operator over the column embedding."""
    return np.einsum("mn,mnrc->rc", op.coeffs, TABLE1)


def real_to_op(m):
    """Exact inverse of ``op_to_real``; every 4x4 real matrix translates."""
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise DomainError("expected a 4x4 matrix, got shape %s" % (m.shape,))
    coeffs = (_T2M @ m.reshape(16)).reshape(4, 4)
    return RealLinearOperator(coeffs)


def opmatrix_to_real(opm):
    """Blockwise translation of an n x n operator matrix to 4n x 4n."""
    n = opm.n
    out = np.zeros((4 * n, 4 * n))
    for r in range(n):
        for c in range(n):
            out[4 * r:4 * r + 4, 4 * c:4 * c + 4] = op_to_real(opm[r, c])
    return out


def real_to_opmatrix(m):
    """Blockwise inverse of ``opmatrix_to_real``."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("expected a square matrix")
    if m.shape[0] % 4:
        raise StructureError("matrix dimension %d is not a multiple of 4"
                             % m.shape[0])
    n = m.shape[0] // 4
    rows = []
    for r in range(n):
        rows.append([real_to_op(m[4 * r:4 * r + 4, 4 * c:4 * c + 4])
                     for c in range(n)])
    return OperatorMatrix(rows)


_self_test()

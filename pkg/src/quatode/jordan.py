"""Numerical real Jordan form of small real matrices.

The pipeline is spectrum -> complex Jordan chains -> realification -> split
into commuting diagonal + antisymmetric + nilpotent parts, so that the
matrix exponential factors into closed-form pieces.

Conventions, fixed throughout:

* Jordan blocks are lower triangular: a chain ``v_1 .. v_c`` satisfies
  ``M v_l = lam v_l + v_{l+1}`` and ``v_c`` is the eigenvector, so the ones
  sit on sub-diagonal positions.
* Block order is real eigenvalues first (descending), then one block per
  conjugate pair, eigenvalues taken with positive imaginary part (descending
  real part, then descending imaginary part), then the conjugate copies in
  the same order.  Chains of one eigenvalue go longest first.
* Each chain is scaled so the first significant component of its eigenvector
  equals 1, which also fixes the complex phase.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .config import DEFAULT
from .errors import DomainError, NumericError, StructureError

_MAX_DIM = 64


# ---------------------------------------------------------------------------
# spectrum

@dataclass
class Spectrum:
    """Clustered eigenvalues: reals and conjugate pairs with multiplicity."""

    real_eigs: list          # [(value, multiplicity)], descending value
    complex_pairs: list      # [(re, im > 0, multiplicity)], conjugates implicit
    dim: int

    def total_multiplicity(self):
        return (sum(m for _, m in self.real_eigs)
                + 2 * sum(m for _, _, m in self.complex_pairs))

    def values(self):
        """Flat eigenvalue list including the implicit conjugates."""
        out = [complex(v, 0.0) for v, m in self.real_eigs for _ in range(m)]
        for a, b, m in self.complex_pairs:
            out += [complex(a, b)] * m + [complex(a, -b)] * m
        return out

    def to_json(self):
        return {
            "real": [{"value": v, "mult": m} for v, m in self.real_eigs],
            "complex": [{"re": a, "im": b, "mult": m}
                        for a, b, m in self.complex_pairs],
        }


def _check_matrix(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("expected a square matrix")
    if m.shape[0] > _MAX_DIM:
        raise DomainError("matrix dimension %d exceeds the supported desk "
                          "scale of %d" % (m.shape[0], _MAX_DIM))
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix entries must be finite")
    return m


def spectrum(m, tol=DEFAULT):
    """Eigenvalues via the real Schur form, clustered into multiplicities.

    Imaginary parts below the cluster threshold are snapped onto the real
    axis; the paper-style examples have exactly real or exactly complex
    eigenvalues and snapping prevents spurious 2x2 blocks.
    """
    m = _check_matrix(m)
    n = m.shape[0]
    if n == 0:
        return Spectrum([], [], 0)
    try:
        t, _ = scipy.linalg.schur(m, output="real")
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericError("QR iteration failed on the %dx%d matrix: %s"
                           % (n, n, exc)) from exc

    eigs = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            eigs.extend(np.linalg.eigvals(t[i:i + 2, i:i + 2]))
            i += 2
        else:
            eigs.append(complex(t[i, i]))
            i += 1

    scale = max(1.0, float(np.linalg.norm(m)))
    tau = tol.cluster * scale
    eigs = [complex(z.real, 0.0) if abs(z.imag) < tau else z for z in eigs]

    reals = sorted([z.real for z in eigs if z.imag == 0.0], reverse=True)
    uppers = sorted([z for z in eigs if z.imag > 0.0],
                    key=lambda z: (-z.real, -z.imag))
    lowers = [z for z in eigs if z.imag < 0.0]
    if len(uppers) != len(lowers):
        raise NumericError("complex eigenvalues did not pair up into "
                           "conjugates")

    real_clusters = _cluster([complex(v) for v in reals], tau)
    pair_clusters = _cluster(uppers, tau)
    real_eigs = [(z.real, mult) for z, mult in real_clusters]
    complex_pairs = [(z.real, z.imag, mult) for z, mult in pair_clusters]

    spec = Spectrum(real_eigs, complex_pairs, n)
    if spec.total_multiplicity() != n:
        raise NumericError("clustered multiplicities sum to %d, expected %d; "
                           "adjust the cluster tolerance"
                           % (spec.total_multiplicity(), n))
    return spec


def _cluster(values, tau):
    """Single-linkage clustering; returns [(mean, count)] in input order."""
    out = []
    remaining = list(values)
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for v in remaining[:]:
                if any(abs(v - w) <= tau for w in members):
                    members.append(v)
                    remaining.remove(v)
                    changed = True
        out.append((sum(members) / len(members), len(members)))
    return out


# ---------------------------------------------------------------------------
# generalized eigenvector chains

def _nullspace(a, tol):
    """Orthonormal kernel basis via SVD; threshold relative to sigma_max."""
    u, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.conj(vh.T)
    k = int(np.sum(s <= tol.rank * s[0]))
    if k == 0:
        return np.conj(vh.T[:, :0])
    return np.conj(vh.T[:, -k:])


def _extend_basis(candidates, obstruction, need, tol):
    """Pick ``need`` directions of ``candidates`` independent of the span of
    ``obstruction``.  All columns live in the same subspace, so projecting
    off the obstruction stays inside it."""
    if need == 0:
        return []
    if obstruction.shape[1]:
        q, _ = np.linalg.qr(obstruction)
        proj = candidates - q @ (np.conj(q.T) @ candidates)
    else:
        proj = candidates
    u, s, _ = np.linalg.svd(proj, full_matrices=False)
    if s.size < need or s[need - 1] <= np.sqrt(tol.rank):
        raise NumericError("could not complete a Jordan chain basis; the "
                           "rank tolerance may need adjustment")
    return [u[:, c] for c in range(need)]


def _chains_for(m, lam, mult, tol):
    """All Jordan chains of one eigenvalue, longest first.

    Returns a list of (dim x length) arrays whose columns run from the chain
    top down to the eigenvector.
    """
    n = m.shape[0]
    real_case = (lam.imag == 0.0)
    eye = np.eye(n)
    a = (m - lam.real * eye) if real_case else (m - lam * np.eye(n, dtype=complex))

    kernels = [np.zeros((n, 0), dtype=a.dtype)]
    power = np.eye(n, dtype=a.dtype)
    dims = [0]
    while dims[-1] < mult:
        if len(kernels) > mult + 1:
            raise NumericError(
                "generalized kernel of eigenvalue %s stalled at dimension "
                "%d of %d; adjust the rank tolerance" % (lam, dims[-1], mult))
        power = a @ power
        ker = _nullspace(power, tol)
        if ker.shape[1] > mult:
            raise NumericError(
                "generalized kernel of eigenvalue %s overshoots its "
                "multiplicity; eigenvalue clusters may be merged too "
                "aggressively" % (lam,))
        if ker.shape[1] <= dims[-1]:
            raise NumericError(
                "generalized kernel of eigenvalue %s stopped growing below "
                "its multiplicity; adjust the rank tolerance" % (lam,))
        kernels.append(ker)
        dims.append(ker.shape[1])

    depth = len(dims) - 1
    ge = [dims[k] - dims[k - 1] for k in range(1, depth + 1)]  # chains >= k

    tops = []  # (vector, height)
    prev_level = []
    for k in range(depth, 0, -1):
        inherited = [a @ v for v in prev_level]
        need = ge[k - 1] - (ge[k] if k < depth else 0)
        obstruction = np.column_stack([kernels[k - 1]] + [v[:, None] for v in inherited]) \
            if inherited else kernels[k - 1]
        new = _extend_basis(kernels[k], obstruction, need, tol)
        tops.extend((v, k) for v in new)
        prev_level = inherited + new

    chains = []
    for top, height in tops:
        cols = [top]
        for _ in range(height - 1):
            cols.append(a @ cols[-1])
        chains.append(np.column_stack(cols))
    chains.sort(key=lambda c: -c.shape[1])
    return [_normalize_chain(c) for c in chains]


def _normalize_chain(chain):
    """Scale so the eigenvector's first significant component is one."""
    eigvec = chain[:, -1]
    mags = np.abs(eigvec)
    peak = mags.max()
    if peak == 0.0:
        raise NumericError("degenerate (zero) Jordan chain")
    idx = int(np.argmax(mags > 1e-8 * peak))
    return chain / eigvec[idx]


def jordan_complex(m, spec, tol=DEFAULT):
    """Complex Jordan form: returns (J, S) with ``m = S J S^{-1}``.

    Block order and chain scaling follow the module conventions; columns for
    an eigenvalue with negative imaginary part are entrywise conjugates of
    the positive-imaginary columns, which is what later makes the realified
    similarity exactly real.
    """
    m = _check_matrix(m)
    if spec.total_multiplicity() != m.shape[0]:
        raise DomainError("spectrum does not match the matrix dimension")

    real_chains = []
    for lam, mult in spec.real_eigs:
        real_chains.extend((lam, c) for c in
                           _chains_for(m, complex(lam, 0.0), mult, tol))
    z_chains = []
    for a, b, mult in spec.complex_pairs:
        z_chains.extend((complex(a, b), c) for c in
                        _chains_for(m, complex(a, b), mult, tol))

    cols = []
    blocks = []  # (eigenvalue, length) in column order
    for lam, chain in real_chains:
        cols.append(chain.astype(complex))
        blocks.append((complex(lam, 0.0), chain.shape[1]))
    for z, chain in z_chains:
        cols.append(chain)
        blocks.append((z, chain.shape[1]))
    for z, chain in z_chains:
        cols.append(np.conj(chain))
        blocks.append((np.conj(z), chain.shape[1]))

    s = np.column_stack(cols) if cols else np.zeros((0, 0), dtype=complex)
    j = np.zeros((m.shape[0], m.shape[0]), dtype=complex)
    at = 0
    for lam, length in blocks:
        for l in range(length):
            j[at + l, at + l] = lam
            if l + 1 < length:
                j[at + l + 1, at + l] = 1.0
        at += length
    return j, s


# ---------------------------------------------------------------------------
# realification

@dataclass
class _Structure:
    """Chain layout parsed back out of a complex Jordan matrix."""

    real_chains: list     # [(lam, length)] in column order
    complex_chains: list  # [(a, b, length)] in column order, b > 0
    n_real: int           # real columns
    n_complex: int        # complex columns per conjugate copy

    @property
    def dim(self):
        return self.n_real + 2 * self.n_complex


def _parse_jordan(j, tol=DEFAULT):
    n = j.shape[0]
    diag = np.diag(j)
    sub = np.diag(j, -1) if n > 1 else np.array([])
    off = j - np.diag(diag)
    if n > 1:
        off = off - np.diag(sub, -1)
    if np.any(off != 0):
        raise StructureError("matrix is not in lower Jordan form")
    if not np.all((sub == 0.0) | (sub == 1.0)):
        raise StructureError("sub-diagonal of a Jordan form must be 0 or 1")

    chains = []
    start = 0
    for i in range(1, n + 1):
        if i == n or sub[i - 1] == 0.0:
            if np.any(diag[start:i] != diag[start]):
                raise StructureError("a Jordan chain mixes eigenvalues")
            chains.append((complex(diag[start]), i - start))
            start = i

    real_chains = [(z.real, ln) for z, ln in chains if z.imag == 0.0]
    upper = [(z, ln) for z, ln in chains if z.imag > 0.0]
    lower = [(z, ln) for z, ln in chains if z.imag < 0.0]
    if [(np.conj(z), ln) for z, ln in upper] != lower:
        raise StructureError("conjugate Jordan blocks are not mirrored")
    if any(z.imag != 0.0 for z, _ in chains[:len(real_chains)]):
        raise StructureError("real blocks must precede complex blocks")
    if chains[len(real_chains):len(real_chains) + len(upper)] != upper:
        raise StructureError("positive-imaginary blocks must precede their "
                             "conjugates")
    return _Structure(
        real_chains=real_chains,
        complex_chains=[(z.real, z.imag, ln) for z, ln in upper],
        n_real=sum(ln for _, ln in real_chains),
        n_complex=sum(ln for _, ln in upper),
    )


def _w_matrix(struct):
    """Block unitary turning conjugate Jordan pairs into real 2x2 form."""
    nr, nc = struct.n_real, struct.n_complex
    n = struct.dim
    w = np.zeros((n, n), dtype=complex)
    w[:nr, :nr] = np.eye(nr)
    s = 1.0 / np.sqrt(2.0)
    ic = np.eye(nc)
    w[nr:nr + nc, nr:nr + nc] = s * ic
    w[nr:nr + nc, nr + nc:] = 1j * s * ic
    w[nr + nc:, nr:nr + nc] = s * ic
    w[nr + nc:, nr + nc:] = -1j * s * ic
    return w


def _real_jordan_matrix(struct):
    """Canonical real Jordan form assembled exactly from the chain data."""
    n = struct.dim
    nr, nc = struct.n_real, struct.n_complex
    j = np.zeros((n, n))
    at = 0
    for lam, length in struct.real_chains:
        for l in range(length):
            j[at + l, at + l] = lam
            if l + 1 < length:
                j[at + l + 1, at + l] = 1.0
        at += length
    at = 0
    for a, b, length in struct.complex_chains:
        for l in range(length):
            x = nr + at + l
            y = x + nc
            j[x, x] = a
            j[y, y] = a
            j[x, y] = -b
            j[y, x] = b
            if l + 1 < length:
                j[x + 1, x] = 1.0
                j[y + 1, y] = 1.0
        at += length
    return j


def realify(j_complex, s_complex, tol=DEFAULT):
    """Turn the complex pair (J, S) into a real pair (T, J_real).

    ``T = S W`` is exactly real when the conjugate chains of ``S`` mirror
    each other; a residual imaginary part above the threshold therefore
    signals mismatched pairing and raises.  ``J_real`` is assembled in exact
    canonical form (the numerically transformed ``W^{-1} J W`` is checked
    against it, not returned).
    """
    struct = _parse_jordan(j_complex, tol)
    w = _w_matrix(struct)
    t_c = s_complex @ w
    t_scale = max(1.0, float(np.linalg.norm(t_c)))
    imag = float(np.linalg.norm(np.imag(t_c)))
    if imag > tol.imag_residual * t_scale:
        raise NumericError(
            "similarity did not become real (residual %.2e); conjugate "
            "chains are probably mismatched" % (imag / t_scale))
    t = np.real(t_c).copy()

    j_real = _real_jordan_matrix(struct)
    back = np.conj(w.T) @ j_complex @ w
    drift = float(np.linalg.norm(back - j_real))
    if drift > 1e-9 * (np.linalg.norm(j_real) + 1.0):
        raise StructureError("realified Jordan form missed its canonical "
                             "pattern (drift %.2e)" % drift)
    return t, j_real


def split_dan(j_real, tol=DEFAULT):
    """Split a real Jordan form into commuting D + A + N, exactly.

    D collects the diagonal, A the antisymmetric pair couplings, N the
    sub-diagonal ones; any entry fitting none of the patterns raises.  The
    three parts sum to the input bit for bit, and N is nilpotent by sparsity
    structure alone.
    """
    j = np.asarray(j_real, dtype=float)
    n = j.shape[0]
    d = np.diag(np.diag(j).copy())
    a = np.zeros_like(j)
    nil = np.zeros_like(j)
    for r in range(n):
        for c in range(n):
            if r == c:
                continue
            v = j[r, c]
            if v == 0.0:
                continue
            if j[c, r] == -v:
                a[r, c] = v
            elif c == r - 1 and abs(v - 1.0) <= 1e-9 and j[c, r] == 0.0:
                nil[r, c] = v
            else:
                raise StructureError(
                    "entry (%d, %d) = %g fits neither the diagonal, "
                    "antisymmetric, nor nilpotent pattern" % (r, c, v))
    if not np.array_equal(d + a + nil, j):
        raise StructureError("split parts do not reassemble the input")
    return d, a, nil


def _pairs_of(a):
    """Index pairs (i, j, theta) with a[j, i] = theta = -a[i, j], i < j."""
    pairs = []
    n = a.shape[0]
    for i in range(n):
        for jj in range(i + 1, n):
            if a[jj, i] != 0.0:
                pairs.append((i, jj, a[jj, i]))
    return pairs


def exp_jordan(d, a, n, t, tol=DEFAULT):
    """exp((D + A + N) t) through the commuting factorization.

    The diagonal factor exponentiates entrywise, the antisymmetric factor
    rotates each coupled pair by cos/sin, and the nilpotent factor is the
    terminating polynomial sum.
    """
    d = np.asarray(d, dtype=float)
    a = np.asarray(a, dtype=float)
    n = np.asarray(n, dtype=float)
    scale = float(np.linalg.norm(d + a + n)) + 1.0
    for x, y, names in ((d, a, "DA"), (d, n, "DN"), (a, n, "AN")):
        if np.linalg.norm(x @ y - y @ x) > tol.commutator * scale:
            raise DomainError("parts %s do not commute within tolerance"
                              % names)

    dim = d.shape[0]
    exp_d = np.diag(np.exp(np.diag(d) * t))
    exp_a = np.eye(dim)
    for i, j, theta in _pairs_of(a):
        c, s = np.cos(theta * t), np.sin(theta * t)
        exp_a[i, i] = c
        exp_a[j, j] = c
        exp_a[i, j] = -s
        exp_a[j, i] = s
    exp_n = np.eye(dim)
    term = np.eye(dim)
    for k in range(1, dim + 1):
        term = (term @ n) * (t / k)
        if not term.any():
            break
        exp_n = exp_n + term
    else:
        raise StructureError("nilpotent part fails to terminate")
    return exp_d @ exp_a @ exp_n


@dataclass
class JordanData:
    """Everything the decomposition produces for one matrix."""

    matrix: np.ndarray
    spectrum: Spectrum
    j_complex: np.ndarray
    s_complex: np.ndarray
    w: np.ndarray
    t_real: np.ndarray
    j_real: np.ndarray
    d: np.ndarray
    a: np.ndarray
    n: np.ndarray
    structure: _Structure = field(repr=False, default=None)

    def exp(self, t):
        return self.t_real @ exp_jordan(self.d, self.a, self.n, t) \
            @ np.linalg.inv(self.t_real)


def jordan_data(m, tol=DEFAULT):
    """Full decomposition with the reconstruction guarantee enforced."""
    m = _check_matrix(m)
    spec = spectrum(m, tol)
    j_c, s_c = jordan_complex(m, spec, tol)
    t, j_real = realify(j_c, s_c, tol)
    d, a, n = split_dan(j_real, tol)
    recon = t @ j_real @ np.linalg.inv(t)
    err = float(np.linalg.norm(m - recon))
    if err > tol.imag_residual * max(1.0, float(np.linalg.norm(m))):
        raise NumericError("Jordan reconstruction residual %.2e exceeds "
                           "tolerance; the matrix may be too ill conditioned"
                           % err)
    return JordanData(matrix=m, spectrum=spec, j_complex=j_c, s_complex=s_c,
                      w=_w_matrix(_parse_jordan(j_c, tol)), t_real=t,
                      j_real=j_real, d=d, a=a, n=n,
                      structure=_parse_jordan(j_c, tol))

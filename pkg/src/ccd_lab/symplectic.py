"""Structure-preserving eigensolver for J-skew-symmetric Hermitian matrices.

A Hermitian H of size 2l with H J = J H^T has the block form

    H = [[A, B], [-conj(B), conj(A)]],   A = A^dagger,  B = -B^T

and every eigenvalue occurs twice.  The solver reduces H to diag(T, T) with
T real symmetric tridiagonal, using only transformations of the same block
form (2x2 unitary rotations on row pairs (j, l+j) and real Householder
reflections applied as diag(S, S)), then diagonalizes T by implicit-shift QR.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DimensionError, StructureError
from .linalg import DEFAULT_TOL, dagger, require_hermitian, symplectic_form


@dataclass(frozen=True)
class SkewSymmetricHamiltonian:
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)

    @property
    def ell(self) -> int:
        return self.A.shape[0]

    def full(self) -> np.ndarray:
        return np.block([[self.A, self.B], [-self.B.conj(), self.A.conj()]])

    @classmethod
    def from_matrix(cls, h: np.ndarray, tol: float = DEFAULT_TOL.herm) -> "SkewSymmetricHamiltonian":
        h = require_hermitian(h, tol)
        if h.shape[0] % 2:
            raise DimensionError("J-skew-symmetric matrices have even dimension")
        if not is_j_skew_symmetric(h, tol):
            raise StructureError("matrix does not satisfy H J = J H^T")
        ell = h.shape[0] // 2
        a = h[:ell, :ell]
        b = h[:ell, ell:]
        return cls((a + dagger(a)) / 2, (b - b.T) / 2)


@dataclass(frozen=True)
class SymplecticEigResult:
    W: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray
    residual: float
    clusters: tuple = ()


def j_skew_defect(h: np.ndarray) -> float:
    j = symplectic_form(h.shape[0])
    return float(np.linalg.norm(h @ j - j @ h.T))


def is_j_skew_symmetric(h: np.ndarray, tol: float = DEFAULT_TOL.herm) -> bool:
    h = require_hermitian(h, tol)
    if h.shape[0] % 2:
        raise DimensionError("J-skew symmetry needs an even dimension")
    return j_skew_defect(h) <= tol * max(1.0, float(np.linalg.norm(h)))


def block_structure_defect(w: np.ndarray) -> float:
    """Distance of w from the form [[U, V], [-conj(V), conj(U)]]."""
    ell = w.shape[0] // 2
    u, v = w[:ell, :ell], w[:ell, ell:]
    return float(
        np.linalg.norm(w[ell:, :ell] + v.conj()) + np.linalg.norm(w[ell:, ell:] - u.conj())
    )


def _rotate_pair(h: np.ndarray, q: np.ndarray, j: int, ell: int, a: complex, b: complex, r: float):
    """Similarity by the structured rotation acting on rows (j, l+j)."""
    rot = np.array([[np.conj(a) / r, -b / r], [np.conj(b) / r, a / r]])
    idx = [j, ell + j]
    h[idx, :] = rot @ h[idx, :]
    h[:, idx] = h[:, idx] @ dagger(rot)
    q[idx, :] = rot @ q[idx, :]


def _reflect(h: np.ndarray, q: np.ndarray, start: int, ell: int, x: np.ndarray):
    """Apply diag(S, S) with S the Householder reflector mapping x onto -sign(x0)|x| e0."""
    norm = np.linalg.norm(x)
    if norm == 0.0 or np.all(x[1:] == 0):
        return
    v = x.copy()
    v[0] += math.copysign(norm, x[0])
    v /= np.linalg.norm(v)
    for off in (0, ell):
        idx = slice(off + start, off + ell)
        h[idx, :] -= 2.0 * np.outer(v, v @ h[idx, :])
        h[:, idx] -= 2.0 * np.outer(h[:, idx] @ v, v)
        q[idx, :] -= 2.0 * np.outer(v, v @ q[idx, :])


def reduce_to_tridiagonal(hs: SkewSymmetricHamiltonian, tol: float = DEFAULT_TOL.herm, debug: bool = False):
    """Return (Q, d, e): Q H Q^dagger = diag(T, T) with T = tridiag(e, d, e).

    ``Q`` keeps the block form of ``W`` above.  With ``debug`` the structure
    of the working matrix is asserted after every sweep.
    """
    ell = hs.ell
    h = hs.full().astype(complex)
    q = np.eye(2 * ell, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(h)))
    pivot_tol = 1e-300
    for k in range(ell - 1):
        # clear the B part of column k with rotations on (j, l+j)
        for j in range(k + 1, ell):
            a = h[j, k]
            b = h[j, ell + k]
            if b == 0:
                if a.imag != 0 and abs(a) > pivot_tol:
                    # make the A entry real so the reflector below sees real data
                    _rotate_pair(h, q, j, ell, a, 0.0, abs(a))
                continue
            r = math.hypot(abs(a), abs(b))
            if r <= pivot_tol:
                continue
            _rotate_pair(h, q, j, ell, a, b, r)
        # real Householder on the A part of column k, rows k+1..l-1
        if k + 2 < ell:
            x = h[k + 1 : ell, k].real.copy()
            _reflect(h, q, k + 1, ell, x)
        if debug:
            _assert_structure(h, tol * scale)
    d = h[np.arange(ell), np.arange(ell)].real.copy()
    e = h[np.arange(1, ell), np.arange(ell - 1)].real.copy()
    t_full = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    defect = np.linalg.norm(h - np.kron(np.eye(2), t_full))
    if defect > 1e3 * np.finfo(float).eps * scale * max(1, ell) + tol * scale:
        raise StructureError(f"tridiagonal reduction left a residual of {defect:.3e}")
    return q, d, e


def _assert_structure(h: np.ndarray, tol: float) -> None:
    if block_structure_defect(h) > tol or np.linalg.norm(h - dagger(h)) > tol:
        raise StructureError("working matrix lost its J-skew-symmetric Hermitian form")


def tridiagonal_qr(d, e, max_iter: int | None = None):
    """Eigen-decomposition of a real symmetric tridiagonal matrix.

    Implicit single-shift QR with the Wilkinson shift and deflation.  Returns
    ascending eigenvalues and the orthogonal matrix X with T X = X diag(lam).
    """
    d = np.array(d, dtype=float)
    e = np.array(e, dtype=float)
    m = d.shape[0]
    if e.shape[0] != max(m - 1, 0):
        raise DimensionError("off-diagonal must have one fewer entry than the diagonal")
    x = np.eye(m)
    if max_iter is None:
        max_iter = 30 * max(m, 1)
    eps = np.finfo(float).eps
    tiny = np.finfo(float).tiny
    hi = m - 1
    iters = 0
    while hi > 0:
        for i in range(hi):
            if abs(e[i]) <= eps * (abs(d[i]) + abs(d[i + 1])) or abs(e[i]) < tiny:
                e[i] = 0.0
        if e[hi - 1] == 0.0:
            hi -= 1
            iters = 0
            continue
        lo = hi - 1
        while lo > 0 and e[lo - 1] != 0.0:
            lo -= 1
        iters += 1
        if iters > max_iter:
            raise ConvergenceError(f"tridiagonal QR did not converge for eigenvalue {hi}")
        _implicit_qr_step(d, e, lo, hi, x)
    order = np.argsort(d, kind="stable")
    return d[order], x[:, order]


def _implicit_qr_step(d, e, lo, hi, x):
    t = (d[hi - 1] - d[hi]) / 2.0
    f = e[hi - 1]
    denom = t + math.copysign(math.hypot(t, f), t)
    mu = d[hi] - f * f / denom
    g = d[lo] - mu
    z = e[lo]
    for k in range(lo, hi):
        r = math.hypot(g, z)
        c, s = g / r, -z / r
        if k > lo:
            e[k - 1] = r
        a, b, f = d[k], d[k + 1], e[k]
        d[k] = c * c * a - 2 * c * s * f + s * s * b
        d[k + 1] = s * s * a + 2 * c * s * f + c * c * b
        e[k] = c * s * (a - b) + (c * c - s * s) * f
        col_k = x[:, k].copy()
        x[:, k] = c * col_k - s * x[:, k + 1]
        x[:, k + 1] = s * col_k + c * x[:, k + 1]
        if k + 1 < hi:
            g = e[k]
            z = -s * e[k + 1]
            e[k + 1] = c * e[k + 1]


def _cluster(values: np.ndarray, tol: float):
    groups = []
    start = 0
    span = max(1.0, float(values[-1] - values[0])) if values.size else 1.0
    for i in range(1, values.size + 1):
        if i == values.size or values[i] - values[i - 1] > tol * span:
            groups.append((start, i))
            start = i
    return tuple(groups)


def symplectic_eig(hs, tol=DEFAULT_TOL) -> SymplecticEigResult:
    """Eigenvalues (each doubled) and block-structured unitary eigenvectors.

    Accepts a :class:`SkewSymmetricHamiltonian` or a full matrix.  Column k and
    column l+k of ``W`` are eigenvectors for ``eigenvalues[k]``.
    """
    if not isinstance(hs, SkewSymmetricHamiltonian):
        hs = SkewSymmetricHamiltonian.from_matrix(np.asarray(hs, dtype=complex), tol.herm)
    ell = hs.ell
    q, d, e = reduce_to_tridiagonal(hs, tol.herm)
    lam, xt = tridiagonal_qr(d, e)
    clusters = _cluster(lam, tol.cluster)
    for lo, hi in clusters:
        if hi - lo > 1:
            # keep eigenvectors of a near-degenerate cluster exactly orthonormal
            xt[:, lo:hi], _ = np.linalg.qr(xt[:, lo:hi])
    x2 = np.zeros((2 * ell, 2 * ell))
    x2[:ell, :ell] = xt
    x2[ell:, ell:] = xt
    w = dagger(q) @ x2
    h = hs.full()
    lam2 = np.concatenate([lam, lam])
    residual = float(np.linalg.norm(h @ w - w * lam2))
    return SymplecticEigResult(w, lam, residual, clusters)


def random_j_skew_hermitian(ell: int, seed=None) -> SkewSymmetricHamiltonian:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a = rng.standard_normal((ell, ell)) + 1j * rng.standard_normal((ell, ell))
    b = rng.standard_normal((ell, ell)) + 1j * rng.standard_normal((ell, ell))
    return SkewSymmetricHamiltonian((a + dagger(a)) / 2, (b - b.T) / 2)

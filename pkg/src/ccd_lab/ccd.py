"""Concurrence canonical decomposition v = k1 a k2 and the time-reversal polar form.

Odd n runs the type-AII decomposition SU(N) = Sp(N/2) D Sp(N/2) in the
GHZ-like basis F0; even n runs the type-AI analogue SU(N) = SO(N) D SO(N) in
the magic basis E0.  In both cases k1, k2 preserve the concurrence form and
``a`` is diagonal in the similarity basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import CcdLabError, DimensionError, NotInAlgebraError, PreconditionError, StructureError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    dagger,
    log_unitary,
    num_qubits,
    phase_normalize,
    require_unitary,
    symplectic_form,
)
from .spinflip import BasisKind, build_basis, cartan_involution
from .symplectic import symplectic_eig

# largest tolerated change when forcing the log of p^2 onto the AII p-space
LOG_PROJECTION_TOL = 1e-6
BRANCH_REPHASE = 1e-6


class BranchError(CcdLabError):
    pass


@dataclass(frozen=True)
class CcdFactors:
    n: int
    k1: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    k2: np.ndarray = field(repr=False)
    inner: tuple = field(repr=False)
    residual: float
    parity: str
    phase: complex = 1.0
    basis: np.ndarray = field(default=None, repr=False)

    @property
    def d(self) -> np.ndarray:
        """Diagonal of the inner factor (SU-normalized, global phase excluded)."""
        return np.diag(self.inner[1])

    def a_squared_spectrum(self) -> np.ndarray:
        """spec(a^2) of the SU-normalized ``a``; equals the concurrence spectrum."""
        return self.d**2

    def reconstruct(self) -> np.ndarray:
        return self.k1 @ self.a @ self.k2


@dataclass(frozen=True)
class PolarFactors:
    Hp: np.ndarray = field(repr=False)
    Hk: np.ndarray = field(repr=False)
    residual: float


def symplectic_defect(w: np.ndarray) -> float:
    j = symplectic_form(w.shape[0])
    return float(np.linalg.norm(w.T @ j @ w - j))


def _require_special(v: np.ndarray, tol: Tolerances) -> np.ndarray:
    v = require_unitary(v, tol.unitary)
    if abs(np.linalg.det(v) - 1) > 1e-8:
        raise PreconditionError("expected a determinant-one unitary; phase-normalize first")
    return v


def _aii_attempt(v: np.ndarray, tol: Tolerances):
    dim = v.shape[0]
    j = symplectic_form(dim)
    p2 = -v @ j @ v.T @ j
    x = log_unitary(p2, tol)
    # generic logs are only approximately J-skew; project onto the AII p-space
    x_p = (x - j @ x.conj() @ j.T) / 2
    correction = float(np.linalg.norm(x - x_p))
    if correction > LOG_PROJECTION_TOL * max(1.0, float(np.linalg.norm(x))):
        raise BranchError(f"log of p^2 is off the structured subspace by {correction:.3e}")
    h = x_p / 2j
    h = (h + dagger(h)) / 2
    eig = symplectic_eig(h, tol)
    w1 = eig.W
    lam = np.concatenate([eig.eigenvalues, eig.eigenvalues])
    d = np.exp(1j * lam)
    w2 = d.conj()[:, None] * (dagger(w1) @ v)
    return w1, d, w2


def kak_aii(v: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    """Type-AII KAK: v = w1 diag(d) w2 with w1, w2 symplectic and d repeat-diagonal.

    Returns ``(w1, d_matrix, w2)``; ``d`` repeats on slots (j, N/2 + j).
    """
    v = _require_special(v, tol)
    if v.shape[0] % 2:
        raise DimensionError("type-AII decomposition needs an even dimension")
    try:
        w1, d, w2 = _aii_attempt(v, tol)
    except BranchError:
        # eigenvalues of p^2 straddle the -1 branch cut; rotate them off it
        shift = np.exp(1j * BRANCH_REPHASE)
        w1, d, w2 = _aii_attempt(shift * v, tol)
        d = d / shift
    scale = max(1.0, np.sqrt(v.shape[0]))
    for w in (w1, w2):
        if symplectic_defect(w) > 1e-8 * scale:
            raise StructureError(f"side factor is not symplectic (defect {symplectic_defect(w):.3e})")
    return w1, np.diag(d), w2


def _real_orthogonal_diagonalize(s: np.ndarray):
    """Real orthogonal o with o^T s o diagonal, for a symmetric unitary s.

    Re(s) and Im(s) commute; diagonalize a generic real combination and then
    re-split any near-degenerate cluster with a second combination.
    """
    mix1, mix2 = 0.6180339887498949, -1.3247179572447460
    w, o = np.linalg.eigh(s.real + mix1 * s.imag)
    i = 0
    dim = w.shape[0]
    while i < dim:
        j = i + 1
        while j < dim and w[j] - w[j - 1] < 1e-6:
            j += 1
        if j - i > 1:
            block = o[:, i:j].T @ s @ o[:, i:j]
            _, ob = np.linalg.eigh(block.real + mix2 * block.imag)
            o[:, i:j] = o[:, i:j] @ ob
        i = j
    return o


def _ai_decompose(m: np.ndarray):
    """m = o1 diag(d) o2 with o1, o2 real special orthogonal (m in SU(N))."""
    s = m @ m.T
    o1 = _real_orthogonal_diagonalize(s)
    if np.linalg.det(o1) < 0:
        o1[:, 0] *= -1
    d = np.sqrt(np.diag(o1.T @ s @ o1))
    d = d / np.abs(d)
    o2 = (d.conj()[:, None] * (o1.T @ m))
    if np.linalg.det(o2).real < 0:
        d[0] *= -1
        o2[0, :] *= -1
    return o1.astype(complex), d, o2.real.astype(complex)


def ccd(v: np.ndarray, n: int | None = None, tol: Tolerances = DEFAULT_TOL) -> CcdFactors:
    """Concurrence canonical decomposition of an n-qubit unitary."""
    v = require_unitary(v, tol.unitary)
    nq = num_qubits(v.shape[0])
    if n is not None and n != nq:
        raise DimensionError(f"matrix is {v.shape[0]}x{v.shape[0]}, not {n} qubits")
    n = nq
    v0, phase = phase_normalize(v)
    if n % 2:
        basis = build_basis(BasisKind.GHZ_F0, n).matrix
        w1, dm, w2 = kak_aii(basis.T @ v0 @ basis, tol)
        d = np.diag(dm)
        to_outer = lambda x: basis @ x @ basis.T  # noqa: E731
        parity = "odd"
    else:
        basis = build_basis(BasisKind.MAGIC_E0, n).matrix
        w1, d, w2 = _ai_decompose(dagger(basis) @ v0 @ basis)
        dm = np.diag(d)
        to_outer = lambda x: basis @ x @ dagger(basis)  # noqa: E731
        parity = "even"
    k1 = to_outer(w1)
    a = phase * to_outer(dm)
    k2 = to_outer(w2)
    residual = float(np.linalg.norm(k1 @ a @ k2 - v))
    return CcdFactors(n, k1, a, k2, (w1, dm, w2), residual, parity, phase, basis)


def a_form_defect(f: CcdFactors) -> float:
    """How far ``a`` is from (repeat-)diagonal in the similarity basis."""
    inner = dagger(f.basis) @ f.a @ f.basis
    off = inner - np.diag(np.diag(inner))
    defect = float(np.linalg.norm(off))
    if f.parity == "odd":
        half = inner.shape[0] // 2
        diag = np.diag(inner)
        defect += float(np.linalg.norm(diag[:half] - diag[half:]))
    return defect


def polar_time_reversal(v: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> PolarFactors:
    """v = exp(i Hp) exp(i Hk) with Hp time-symmetric and Hk time-antisymmetric.

    Built from the CCD as v = (k1 a k1^dagger)(k1 k2).  A non-unit global
    phase of v is carried by Hp as a multiple of the identity, which is
    itself time-symmetric.
    """
    f = ccd(v, tol=tol)
    basis = f.basis
    h_a = basis @ np.diag(np.angle(f.d)) @ dagger(basis) + np.angle(f.phase) * np.eye(basis.shape[0])
    hp = f.k1 @ h_a @ dagger(f.k1)
    hp = (hp + dagger(hp)) / 2
    kk = f.k1 @ f.k2
    x = log_unitary(kk, tol)
    tx = cartan_involution(x, check=False)
    x_k = (x + tx) / 2
    if np.linalg.norm(x - x_k) > LOG_PROJECTION_TOL * max(1.0, float(np.linalg.norm(x))):
        raise NotInAlgebraError("log(k1 k2) left the k-subspace (eigenvalue on the branch cut)")
    hk = x_k / 1j
    hk = (hk + dagger(hk)) / 2
    residual = float(np.linalg.norm(expm(1j * hp) @ expm(1j * hk) - v))
    return PolarFactors(hp, hk, residual)

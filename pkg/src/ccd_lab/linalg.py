"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays; state vectors are 1-D arrays of
length ``2**n``.  Pauli strings are written over the alphabet ``0xyz``, e.g.
``"xz0"`` is sigma^x (x) sigma^z (x) I.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotHermitianError, NotUnitaryError

MAX_QUBITS = 12


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10
    unitary: float = 1e-10
    cluster: float = 1e-8
    hull: float = 1e-9


DEFAULT_TOL = Tolerances()

SIGMA = {
    "0": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# -i sigma^y, the real one-qubit spin-flip matrix
MINUS_I_SIGMA_Y = np.array([[0, -1], [1, 0]], dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def kron(a: np.ndarray, b: np.ndarray, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    cap = 1 << max_qubits
    if rows > cap or cols > cap:
        raise DimensionError(f"kron result {rows}x{cols} exceeds the {max_qubits}-qubit cap")
    return np.kron(a, b)


def kron_all(factors, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    return reduce(lambda x, y: kron(x, y, max_qubits), factors)


def validate_pauli_string(label: str) -> str:
    label = label.lower()
    if not label or any(ch not in SIGMA for ch in label):
        raise ValueError(f"invalid Pauli string {label!r}; use letters from '0xyz'")
    return label


def pauli_weight(label: str) -> int:
    return sum(ch != "0" for ch in validate_pauli_string(label))


def pauli_matrix(label: str) -> np.ndarray:
    """Tensor product of the Pauli matrices named by ``label`` (leftmost = first qubit)."""
    label = validate_pauli_string(label)
    if len(label) > MAX_QUBITS:
        raise DimensionError(f"{len(label)} qubits exceeds the {MAX_QUBITS}-qubit cap")
    return kron_all([SIGMA[ch] for ch in label])


def spin_flip_matrix(n: int) -> np.ndarray:
    """(-i sigma^y)^{(x) n}; real orthogonal, symmetric for even n, antisymmetric for odd n."""
    if n < 1:
        raise DimensionError("need at least one qubit")
    if n > MAX_QUBITS:
        raise DimensionError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    return kron_all([MINUS_I_SIGMA_Y] * n)


def symplectic_form(dim: int) -> np.ndarray:
    """J = (-i sigma^y) (x) I_{dim/2} = [[0, -I], [I, 0]]."""
    if dim % 2:
        raise DimensionError(f"symplectic form needs an even dimension, got {dim}")
    return np.kron(MINUS_I_SIGMA_Y, np.eye(dim // 2))


def hermiticity_defect(h: np.ndarray) -> float:
    return float(np.linalg.norm(h - dagger(h)))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])))


def require_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def require_hermitian(h: np.ndarray, tol: float = DEFAULT_TOL.herm) -> np.ndarray:
    h = require_square(h)
    scale = max(1.0, float(np.linalg.norm(h)))
    if hermiticity_defect(h) > tol * scale:
        raise NotHermitianError(f"matrix is not Hermitian (defect {hermiticity_defect(h):.3e})")
    return h


def require_unitary(u: np.ndarray, tol: float = DEFAULT_TOL.unitary) -> np.ndarray:
    u = require_square(u)
    # Frobenius defect grows like sqrt(N) * eps for well-formed inputs
    if unitarity_defect(u) > tol * max(1.0, np.sqrt(u.shape[0])):
        raise NotUnitaryError(f"matrix is not unitary (defect {unitarity_defect(u):.3e})")
    return u


def eig_hermitian(h: np.ndarray, tol: float = DEFAULT_TOL.herm):
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    h = require_hermitian(h, tol)
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return w, v


def det_root(u: np.ndarray) -> complex:
    """The N-th root of det(u) with argument in (-pi/N, pi/N]."""
    dim = u.shape[0]
    det = np.linalg.det(u)
    return complex(np.exp(1j * np.angle(det) / dim))


def phase_normalize(u: np.ndarray):
    """Return (v, phase) with v in SU(N) and u = phase * v."""
    u = require_square(u)
    phase = det_root(u)
    return u / phase, phase


def log_unitary(u: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Principal logarithm of a unitary matrix as a skew-Hermitian matrix.

    Eigenphases are taken in (-pi, pi]; anything within ``tol.cluster`` of -pi
    is moved to +pi so that degenerate -1 eigenvalues share one branch.
    """
    u = require_unitary(u, tol.unitary)
    # complex Schur form of a normal matrix is diagonal up to rounding
    t, z = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t))
    phases[phases <= -np.pi + tol.cluster] = np.pi
    return (z * (1j * phases)) @ dagger(z)


def random_special_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random element of SU(dim); ``seed`` may be an int or a numpy Generator."""
    if dim < 2:
        raise DimensionError("need dimension >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return q / det_root(q)


def random_hermitian(dim: int, seed=None) -> np.ndarray:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + dagger(a)) / 2

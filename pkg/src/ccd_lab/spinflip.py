"""Spin-flip time reversal, the concurrence monotone, and the Cartan involution it induces.

The spin-flip is the antiunitary map psi -> S conj(psi) with
S = (-i sigma^y)^{(x) n}.  Antilinear operators are kept as the real matrix S
plus an implicit complex conjugation; nothing is ever expanded into a real
2N x 2N representation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import CcdLabError, DimensionError, NotInAlgebraError, ParityError
from .linalg import (
    DEFAULT_TOL,
    dagger,
    num_qubits,
    pauli_weight,
    require_hermitian,
    require_square,
    require_unitary,
    spin_flip_matrix,
    symplectic_form,
    validate_pauli_string,
)


class PauliClass(enum.Enum):
    P_SYMMETRIC = "p_symmetric"
    K_ANTISYMMETRIC = "k_antisymmetric"


class BasisKind(str, enum.Enum):
    MAGIC_E0 = "magic_E0"
    GHZ_F0 = "ghz_F0"
    STANDARD_J = "standard_J"


@dataclass(frozen=True)
class SpinFlip:
    n: int
    matrix_part: np.ndarray = field(repr=False)

    @classmethod
    def for_qubits(cls, n: int) -> "SpinFlip":
        return cls(n, spin_flip_matrix(n))

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return self.matrix_part @ np.conj(psi)


@dataclass(frozen=True)
class BasisMatrix:
    kind: BasisKind
    n: int
    matrix: np.ndarray = field(repr=False)
    iota: tuple = ()


def _as_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimensionError(f"expected a state vector, got shape {psi.shape}")
    num_qubits(psi.shape[0])
    return psi


def spin_flip(psi) -> np.ndarray:
    psi = _as_state(psi)
    return spin_flip_matrix(num_qubits(psi.shape[0])) @ psi.conj()


def concurrence(psi) -> float:
    """|<psi| spin-flip |psi>| / <psi|psi>."""
    psi = _as_state(psi)
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 == 0.0:
        raise CcdLabError("concurrence of the zero vector is undefined")
    return float(abs(np.vdot(psi, spin_flip(psi)))) / norm2


def concurrence_form(phi, psi) -> complex:
    """Complex-bilinear form conj(<phi| spin-flip |psi>) = phi^T S psi."""
    phi = _as_state(phi)
    psi = _as_state(psi)
    if phi.shape != psi.shape:
        raise DimensionError("states have different qubit counts")
    s = spin_flip_matrix(num_qubits(psi.shape[0]))
    return complex(phi @ (s @ psi))


def _mirror_signs(s: np.ndarray) -> list[int]:
    dim = s.shape[0]
    return [int(round(s[j, dim - 1 - j].real)) for j in range(dim // 2)]


def build_basis(kind, n: int) -> BasisMatrix:
    """Change-of-basis matrices relating K to SO(N) (even n) or Sp(N/2) (odd n).

    * ``magic_E0``: columns (|j> + i_j|N-1-j>)/sqrt2 for j < N/2, followed by
      i(|j> - i_j|N-1-j>)/sqrt2, where S|j> = i_j|N-1-j>.  For n = 2 this is
      exactly the usual magic basis.  Satisfies E E^T = S.
    * ``ghz_F0``: real orthogonal, columns (|j> + |N-1-j>)/sqrt2 and
      iota_j (|j> - |N-1-j>)/sqrt2 at slot N/2 + j.  Satisfies F J F^T = S.
    * ``standard_J``: the symplectic form J itself.
    """
    kind = BasisKind(kind)
    if n < 1:
        raise DimensionError("need at least one qubit")
    s = spin_flip_matrix(n).real
    dim = 1 << n
    half = dim // 2
    if kind is BasisKind.STANDARD_J:
        return BasisMatrix(kind, n, symplectic_form(dim).astype(complex))
    if kind is BasisKind.MAGIC_E0:
        if n % 2:
            raise ParityError("the magic basis needs an even qubit count")
        signs = [int(round(s[dim - 1 - j, j])) for j in range(half)]
        e = np.zeros((dim, dim), dtype=complex)
        for j, sign in enumerate(signs):
            e[j, j] = 1
            e[dim - 1 - j, j] = sign
            e[j, half + j] = 1j
            e[dim - 1 - j, half + j] = -1j * sign
        return BasisMatrix(kind, n, e / np.sqrt(2))
    if n % 2 == 0:
        raise ParityError("the GHZ-like basis needs an odd qubit count")
    # S = sum_j iota_j (|j><N-1-j| - |N-1-j><j|) with this sign reading
    iota = _mirror_signs(s)
    f = np.zeros((dim, dim), dtype=complex)
    for j, sign in enumerate(iota):
        f[j, j] = 1
        f[dim - 1 - j, j] = 1
        f[j, half + j] = sign
        f[dim - 1 - j, half + j] = -sign
    return BasisMatrix(kind, n, f / np.sqrt(2), tuple(iota))


def _in_su(x: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.linalg.norm(x)))
    if np.linalg.norm(x + dagger(x)) > tol * scale:
        raise NotInAlgebraError("matrix is not skew-Hermitian")
    if abs(np.trace(x)) > tol * scale:
        raise NotInAlgebraError("matrix is not traceless")


def cartan_involution(x: np.ndarray, tol: float = DEFAULT_TOL.herm, check: bool = True) -> np.ndarray:
    """theta(X) = S^dagger conj(X) S; equals spin-flip . X . spin-flip^{-1}."""
    x = require_square(x)
    if check:
        _in_su(x, tol)
    s = spin_flip_matrix(num_qubits(x.shape[0]))
    return s.T @ x.conj() @ s


def pk_split(x: np.ndarray, tol: float = DEFAULT_TOL.herm, check: bool = True):
    """Split X into its theta = -1 part (p) and theta = +1 part (k)."""
    tx = cartan_involution(x, tol, check)
    return (x - tx) / 2, (x + tx) / 2


def pauli_class(label: str) -> PauliClass:
    label = validate_pauli_string(label)
    weight = pauli_weight(label)
    if weight == 0:
        raise ValueError("the identity string is not in su(N)")
    return PauliClass.P_SYMMETRIC if weight % 2 == 0 else PauliClass.K_ANTISYMMETRIC


def _time_defects(h: np.ndarray, tol: float):
    h = require_hermitian(h, tol)
    scale = max(1.0, float(np.linalg.norm(h)))
    if abs(np.trace(h)) > tol * scale:
        raise NotInAlgebraError("Hamiltonian must be traceless")
    x = 1j * h
    tx = cartan_involution(x, check=False)
    return float(np.linalg.norm(tx + x)) / scale, float(np.linalg.norm(tx - x)) / scale


def is_time_symmetric(h: np.ndarray, tol: float = DEFAULT_TOL.herm) -> bool:
    """True when iH lies in p, i.e. the spin-flip commutes with H."""
    return _time_defects(h, tol)[0] <= tol


def is_time_antisymmetric(h: np.ndarray, tol: float = DEFAULT_TOL.herm) -> bool:
    return _time_defects(h, tol)[1] <= tol


def concurrence_symmetry_defect(k: np.ndarray) -> float:
    s = spin_flip_matrix(num_qubits(k.shape[0]))
    return float(np.linalg.norm(k.T @ s @ k - s))


def is_concurrence_symmetry(k: np.ndarray, tol: float = 1e-9) -> bool:
    """k^T S k = S, the matrix form of 'k preserves the concurrence form'."""
    k = require_unitary(k)
    return concurrence_symmetry_defect(k) <= tol

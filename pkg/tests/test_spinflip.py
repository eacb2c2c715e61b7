import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from ccd_lab.errors import CcdLabError, DimensionError, NotInAlgebraError, ParityError
from ccd_lab.linalg import (
    SIGMA,
    pauli_matrix,
    pauli_weight,
    random_special_unitary,
    spin_flip_matrix,
    symplectic_form,
)
from ccd_lab.spinchain import SpinChainSpec, build_hamiltonian, total_sz
from ccd_lab.spinflip import (
    BasisKind,
    PauliClass,
    SpinFlip,
    build_basis,
    cartan_involution,
    concurrence,
    concurrence_form,
    is_concurrence_symmetry,
    is_time_antisymmetric,
    is_time_symmetric,
    pauli_class,
    pk_split,
    spin_flip,
)


def random_state(n, rng):
    psi = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return psi / np.linalg.norm(psi)


def random_su_algebra(dim, rng):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    x = (a - a.conj().T) / 2
    return x - np.trace(x) / dim * np.eye(dim)


BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


def test_spin_flip_examples():
    assert np.allclose(spin_flip(np.array([1, 0])), [0, 1])
    assert np.allclose(spin_flip(BELL), BELL)
    psi = random_state(3, np.random.default_rng(0))
    assert np.allclose(spin_flip(spin_flip(psi)), -psi)


@pytest.mark.parametrize("n", range(1, 7))
def test_spin_flip_squares_to_sign(n):
    psi = random_state(n, np.random.default_rng(n))
    flip = SpinFlip.for_qubits(n)
    assert np.allclose(flip(flip(psi)), (-1) ** n * psi)
    assert np.isclose(np.linalg.norm(flip(psi)), 1)


def test_concurrence_examples():
    assert concurrence(np.array([1, 0, 0, 0])) == 0
    assert np.isclose(concurrence(BELL), 1)
    rng = np.random.default_rng(5)
    assert concurrence(random_state(3, rng)) < 1e-14


def test_concurrence_zero_vector():
    with pytest.raises(CcdLabError):
        concurrence(np.zeros(4))


@pytest.mark.parametrize("n", range(2, 7))
def test_product_states_have_zero_concurrence(n):
    rng = np.random.default_rng(10 + n)
    psi = np.ones(1)
    for _ in range(n):
        psi = np.kron(psi, random_state(1, rng))
    assert concurrence(psi) < 1e-12


def test_w4_is_entangled_but_has_zero_concurrence():
    w4 = np.zeros(16)
    w4[[1, 2, 4, 8]] = 0.5
    assert concurrence(w4) == 0
    # not a product state: the single-qubit reduced state is mixed
    rho = np.einsum("ab,cb->ac", w4.reshape(2, 8), w4.reshape(2, 8))
    assert np.trace(rho @ rho) < 1 - 1e-3


def test_concurrence_form_one_qubit():
    # phi^T (-i sigma^y) psi with phi = |0>, psi = |1> is the (0, 1) entry of -i sigma^y
    assert concurrence_form(np.array([1, 0]), np.array([0, 1])) == -1
    assert concurrence_form(np.array([0, 1]), np.array([1, 0])) == 1


def test_concurrence_form_dimension_mismatch():
    with pytest.raises(DimensionError):
        concurrence_form(np.ones(2), np.ones(4))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31))
def test_concurrence_form_symmetry_parity(n, seed):
    rng = np.random.default_rng(seed)
    phi, psi = random_state(n, rng), random_state(n, rng)
    assert np.isclose(concurrence_form(phi, psi), (-1) ** n * concurrence_form(psi, phi), atol=1e-12)


def test_magic_basis_translates_form():
    e = build_basis("magic_E0", 2).matrix
    rng = np.random.default_rng(2)
    z1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    z2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert np.isclose(concurrence_form(e @ z1, e @ z2), z1 @ z2)


def test_two_qubit_magic_basis_columns():
    e = build_basis(BasisKind.MAGIC_E0, 2).matrix * np.sqrt(2)
    expected = np.array([
        [1, 0, 0, 1],
        [0, 1, -1, 0],
        [1j, 0, 0, -1j],
        [0, 1j, 1j, 0],
    ]).T
    assert np.allclose(e, expected)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_magic_basis_invariants(n):
    e = build_basis("magic_E0", n).matrix
    dim = 2**n
    assert np.linalg.norm(e.conj().T @ e - np.eye(dim)) < 1e-13
    assert np.linalg.norm(e @ e.T - spin_flip_matrix(n)) < 1e-13
    rng = np.random.default_rng(n)
    local = np.ones((1, 1))
    for _ in range(n):
        local = np.kron(local, random_special_unitary(2, rng))
    assert np.linalg.norm((e.conj().T @ local @ e).imag) < 1e-12


@pytest.mark.parametrize("n", [1, 3, 5, 7])
def test_ghz_basis_invariants(n):
    b = build_basis("ghz_F0", n)
    f = b.matrix
    dim = 2**n
    assert np.linalg.norm(f.imag) == 0
    assert np.linalg.norm(f.T @ f - np.eye(dim)) < 1e-13
    assert np.linalg.norm(f @ symplectic_form(dim) @ f.T - spin_flip_matrix(n)) < 1e-13
    assert len(b.iota) == dim // 2 and set(b.iota) <= {-1, 1}


def test_basis_parity_errors():
    with pytest.raises(ParityError):
        build_basis("magic_E0", 3)
    with pytest.raises(ParityError):
        build_basis("ghz_F0", 2)


def test_cartan_involution_examples():
    zz = 1j * pauli_matrix("zz")
    assert np.allclose(cartan_involution(zz), -zz)
    x0 = 1j * pauli_matrix("x0")
    assert np.allclose(cartan_involution(x0), x0)
    x = random_su_algebra(8, np.random.default_rng(1))
    assert np.allclose(cartan_involution(cartan_involution(x)), x)


def test_cartan_involution_preserves_brackets():
    rng = np.random.default_rng(4)
    x, y = random_su_algebra(8, rng), random_su_algebra(8, rng)
    th = cartan_involution
    assert np.allclose(th(x @ y - y @ x), th(x) @ th(y) - th(y) @ th(x))


def test_cartan_involution_rejects_outside_algebra():
    with pytest.raises(NotInAlgebraError):
        cartan_involution(np.eye(4, dtype=complex) * 1j)
    with pytest.raises(NotInAlgebraError):
        cartan_involution(pauli_matrix("zz").astype(complex))


def test_pk_split_examples():
    x = 1j * (pauli_matrix("zz") + pauli_matrix("x0"))
    xp, xk = pk_split(x)
    assert np.allclose(xp, 1j * pauli_matrix("zz"))
    assert np.allclose(xk, 1j * pauli_matrix("x0"))
    xp, xk = pk_split(np.zeros((4, 4), dtype=complex))
    assert not xp.any() and not xk.any()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pk_split_matches_pauli_weight(n):
    rng = np.random.default_rng(100 + n)
    labels = ["".join(t) for t in itertools.product("0xyz", repeat=n)][1:]
    coeffs = rng.standard_normal(len(labels))
    x = 1j * sum(c * pauli_matrix(l) for c, l in zip(coeffs, labels))
    xp, xk = pk_split(x)
    even = 1j * sum(c * pauli_matrix(l) for c, l in zip(coeffs, labels) if pauli_weight(l) % 2 == 0)
    assert np.allclose(xp, even)
    assert np.allclose(xp + xk, x)
    assert np.allclose(cartan_involution(xp), -xp) and np.allclose(cartan_involution(xk), xk)


def test_pauli_class():
    assert pauli_class("zz0") is PauliClass.P_SYMMETRIC
    assert pauli_class("x00") is PauliClass.K_ANTISYMMETRIC
    assert pauli_class("xyz") is PauliClass.K_ANTISYMMETRIC
    with pytest.raises(ValueError):
        pauli_class("000")


def test_time_symmetry_examples():
    xyz = build_hamiltonian(SpinChainSpec(3, "xyz", 0.4, -1.1, 0.7))
    assert is_time_symmetric(xyz) and not is_time_antisymmetric(xyz)
    sz = np.diag(total_sz(3)).astype(complex)
    assert is_time_antisymmetric(sz) and not is_time_symmetric(sz)
    zero = np.zeros((4, 4))
    assert is_time_symmetric(zero) and is_time_antisymmetric(zero)


def test_concurrence_symmetry_examples():
    rng = np.random.default_rng(8)
    local = np.kron(random_special_unitary(2, rng), random_special_unitary(2, rng))
    assert is_concurrence_symmetry(local)
    assert not is_concurrence_symmetry(expm(1j * pauli_matrix("zz")))
    assert is_concurrence_symmetry(np.eye(8))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exponentials_of_k_and_p(n):
    rng = np.random.default_rng(n)
    xp, xk = pk_split(random_su_algebra(2**n, rng))
    assert is_concurrence_symmetry(expm(xk))
    assert not is_concurrence_symmetry(expm(xp))

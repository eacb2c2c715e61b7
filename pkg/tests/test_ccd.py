import numpy as np
import pytest
from scipy.linalg import expm

from ccd_lab.ccd import (
    a_form_defect,
    ccd,
    kak_aii,
    polar_time_reversal,
    symplectic_defect,
)
from ccd_lab.errors import DimensionError, NotUnitaryError, PreconditionError
from ccd_lab.examples import cphase
from ccd_lab.linalg import pauli_matrix, random_special_unitary, symplectic_form
from ccd_lab.spinflip import cartan_involution, concurrence_symmetry_defect, pk_split


def random_symplectic_unitary(dim, seed):
    # exp of [[A, B], [-conj(B), conj(A)]] with A skew-Hermitian, B symmetric
    rng = np.random.default_rng(seed)
    ell = dim // 2
    a = rng.standard_normal((ell, ell)) + 1j * rng.standard_normal((ell, ell))
    b = rng.standard_normal((ell, ell)) + 1j * rng.standard_normal((ell, ell))
    a, b = (a - a.conj().T) / 2, (b + b.T) / 2
    w = expm(np.block([[a, b], [-b.conj(), a.conj()]]))
    j = symplectic_form(dim)
    assert np.linalg.norm(w.T @ j @ w - j) < 1e-10
    return w


def multiset_close(a, b, tol):
    a, b = list(np.asarray(a)), list(np.asarray(b))
    for x in a:
        k = int(np.argmin([abs(x - y) for y in b]))
        if abs(x - b[k]) > tol:
            return False
        b.pop(k)
    return not b


def test_kak_aii_symplectic_input_gives_trivial_d():
    v = random_symplectic_unitary(8, 3)
    w1, d, w2 = kak_aii(v)
    assert np.allclose(np.diag(d), 1)
    assert np.linalg.norm(w1 @ d @ w2 - v) < 1e-10


def test_kak_aii_diagonal_phases():
    t1, t2 = 0.3, -0.7
    v = np.diag(np.exp(1j * np.array([t1, t2, t1, t2])))
    v = v / np.linalg.det(v) ** 0.25
    w1, d, w2 = kak_aii(v)
    assert multiset_close(np.diag(d) ** 2, np.diag(v) ** 2, 1e-9)
    assert np.linalg.norm(w1 @ d @ w2 - v) < 1e-10


def test_kak_aii_random():
    v = random_special_unitary(8, seed=8)
    w1, d, w2 = kak_aii(v)
    assert np.linalg.norm(w1 @ d @ w2 - v) <= 1e-10
    assert symplectic_defect(w1) < 1e-10 and symplectic_defect(w2) < 1e-10
    dd = np.diag(d)
    assert np.allclose(dd[:4], dd[4:])


def test_kak_aii_needs_special_unitary():
    with pytest.raises(PreconditionError):
        kak_aii(np.exp(0.3j) * np.eye(4))


def test_kak_aii_branch_cut():
    # p^2 = -1 on a two-dimensional block exercises the rephasing fallback
    v = np.diag(np.exp(1j * np.pi / 2 * np.array([1, -1, 1, -1])))
    w1, d, w2 = kak_aii(v)
    assert np.linalg.norm(w1 @ d @ w2 - v) < 1e-9
    assert symplectic_defect(w1) < 1e-9


def test_ccd_local_unitary_has_trivial_a():
    rng = np.random.default_rng(1)
    v = np.kron(np.kron(random_special_unitary(2, rng), random_special_unitary(2, rng)), random_special_unitary(2, rng))
    f = ccd(v)
    assert f.residual < 1e-10
    spec = f.a_squared_spectrum()
    assert np.allclose(spec, spec[0])


def test_ccd_cphase_pi_over_4():
    f = ccd(cphase(np.pi / 4))
    assert multiset_close(f.a_squared_spectrum(), [1j, 1j, -1j, -1j], 1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_ccd_random(n):
    rng = np.random.default_rng(50 + n)
    v = random_special_unitary(2**n, rng) * np.exp(1j * rng.uniform(-3, 3))
    f = ccd(v, n)
    assert f.residual <= 1e-9 * 2 ** (n / 2)
    assert concurrence_symmetry_defect(f.k1) <= 1e-9
    assert concurrence_symmetry_defect(f.k2) <= 1e-9
    assert a_form_defect(f) <= 1e-9
    assert f.parity == ("odd" if n % 2 else "even")


def test_ccd_spec_is_invariant_under_k_factors():
    rng = np.random.default_rng(9)
    v = random_special_unitary(32, rng)
    # local unitaries lie in K, so k1 v k2 has the same a-factor spectrum
    k1 = np.kron(random_special_unitary(2, rng), np.eye(16))
    k2 = np.kron(np.eye(8), np.kron(random_special_unitary(2, rng), random_special_unitary(2, rng)))
    f1, f2 = ccd(v), ccd(k1 @ v @ k2)
    assert multiset_close(f1.a_squared_spectrum(), f2.a_squared_spectrum(), 1e-8)


def test_ccd_rejects_bad_input():
    with pytest.raises(NotUnitaryError):
        ccd(np.diag([1.0, 2.0, 1.0, 1.0]))
    with pytest.raises(DimensionError):
        ccd(np.eye(4), n=3)


def test_polar_for_k_element():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    x = (a - a.conj().T) / 2
    x -= np.trace(x) / 8 * np.eye(8)
    _, xk = pk_split(x)
    pf = polar_time_reversal(expm(xk))
    assert np.linalg.norm(pf.Hp) < 1e-9
    assert pf.residual < 1e-9


def test_polar_for_p_exponential():
    pf = polar_time_reversal(expm(1j * pauli_matrix("zz")))
    assert np.linalg.norm(pf.Hk) < 1e-9
    assert pf.residual < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polar_random(n):
    v = random_special_unitary(2**n, seed=70 + n)
    pf = polar_time_reversal(v)
    xp, xk = 1j * pf.Hp, 1j * pf.Hk
    assert pf.residual <= 1e-9
    assert np.linalg.norm(cartan_involution(xp, check=False) + xp) <= 1e-9
    assert np.linalg.norm(cartan_involution(xk, check=False) - xk) <= 1e-9

"""Concurrence spectra, pairwise concurrence capacities, and maximal-capacity statistics.

The capacity of v is reduced to an optimisation over coefficient vectors beta
with sum(beta) = 0 and sum|beta| <= 1, maximising |sum beta_j lambda_j| over
the (reduced) concurrence spectrum.  By convex duality that maximum is the
radius of the smallest disk enclosing the spectrum points, which is how the
value is computed; the maximising beta is read off the disk's rim points and
turned back into an explicit pair of states.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ccd import ccd
from .errors import DimensionError, PairingError, ParityError
from .geometry import (
    chebyshev_weights,
    hull_contains_zero,
    smallest_enclosing_circle,
    unit_circle_hull_contains_zero,
)
from .linalg import DEFAULT_TOL, Tolerances, dagger, num_qubits, phase_normalize, require_unitary, spin_flip_matrix
from .spinflip import concurrence_form

MC_CHUNK = 1000


@dataclass(frozen=True)
class ConcurrenceSpectrum:
    n: int
    points: np.ndarray
    reduced_points: np.ndarray | None = None

    @property
    def parity(self) -> str:
        return "odd" if self.n % 2 else "even"

    @property
    def hull_points(self) -> np.ndarray:
        """The point set whose hull decides maximal capacity."""
        return self.reduced_points if self.n % 2 else self.points


@dataclass(frozen=True)
class CapacityWitness:
    beta: np.ndarray
    lambdas: np.ndarray
    phi: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    value: float


@dataclass(frozen=True)
class MonotonicityReport:
    n: int
    kappa_n: float
    kappa_n_plus_1: float
    violation: bool


@dataclass(frozen=True)
class FractionEstimate:
    n: int
    samples: int
    fraction: float
    stderr: float


def _sort_on_circle(z: np.ndarray) -> np.ndarray:
    ang = np.round(np.mod(np.angle(z), 2 * np.pi), 12)
    return z[np.lexsort((z.imag, z.real, ang))]


def pair_duplicates(points: np.ndarray, tol: float = DEFAULT_TOL.cluster) -> np.ndarray:
    """Greedy nearest-neighbour matching of a multiset whose points occur in pairs.

    Returns one representative (the normalized pair mean) per pair.
    """
    pool = list(_sort_on_circle(np.asarray(points, dtype=complex)))
    if len(pool) % 2:
        raise PairingError("odd number of points cannot be paired")
    reduced = []
    while pool:
        p = pool.pop(0)
        dist = [abs(p - q) for q in pool]
        k = int(np.argmin(dist))
        if dist[k] > tol:
            raise PairingError(f"point {p:.6g} has no duplicate within {tol:g} (nearest {dist[k]:.3e})")
        q = pool.pop(k)
        mean = (p + q) / 2
        reduced.append(mean / abs(mean))
    return _sort_on_circle(np.array(reduced))


def concurrence_spectrum(v: np.ndarray, n: int | None = None, tol: Tolerances = DEFAULT_TOL) -> ConcurrenceSpectrum:
    """Eigenvalues of S^dagger v S v^T for the SU(N)-normalized v."""
    v = require_unitary(v, tol.unitary)
    nq = num_qubits(v.shape[0])
    if n is not None and n != nq:
        raise DimensionError(f"matrix is {v.shape[0]}x{v.shape[0]}, not {n} qubits")
    v0, _ = phase_normalize(v)
    s = spin_flip_matrix(nq)
    pts = np.linalg.eigvals(dagger(s) @ v0 @ s @ v0.T)
    pts = _sort_on_circle(pts / np.abs(pts))
    reduced = pair_duplicates(pts, tol.cluster) if nq % 2 else None
    return ConcurrenceSpectrum(nq, pts, reduced)


def spectrum_from_points(n: int, points, tol: Tolerances = DEFAULT_TOL) -> ConcurrenceSpectrum:
    pts = _sort_on_circle(np.asarray(points, dtype=complex))
    reduced = pair_duplicates(pts, tol.cluster) if n % 2 else None
    return ConcurrenceSpectrum(n, pts, reduced)


def capacity_is_maximal(v: np.ndarray, n: int | None = None, tol: Tolerances = DEFAULT_TOL) -> bool:
    spec = concurrence_spectrum(v, n, tol)
    return hull_contains_zero(spec.hull_points, tol.hull)


def chebyshev_radius(points) -> float:
    return float(smallest_enclosing_circle(points)[1])


def optimal_beta(lambdas, tol: float = 1e-9):
    """Coefficients beta maximising |sum beta_j lambda_j| on the feasible set, and the maximum."""
    lam = np.asarray(lambdas, dtype=complex)
    center, radius = smallest_enclosing_circle(lam)
    if radius <= tol:
        return np.zeros(lam.size, dtype=complex), 0.0
    t = chebyshev_weights(lam, center, radius, tol)
    beta = t * np.conj(lam - center) / radius
    return beta, float(abs(np.sum(beta * lam)))


def _states_even(beta: np.ndarray, dim: int):
    if not np.any(beta):
        z1 = np.zeros(dim, dtype=complex)
        z2 = np.zeros(dim, dtype=complex)
        z1[0] = 1
        z2[1] = 1
        return z1, z2
    mag = np.sqrt(np.abs(beta))
    safe = np.where(mag > 0, mag, 1.0)
    return mag.astype(complex), np.where(mag > 0, beta / safe, 0)


def _states_odd(alpha: np.ndarray, dim: int):
    half = dim // 2
    z1 = np.zeros(dim, dtype=complex)
    z2 = np.zeros(dim, dtype=complex)
    if not np.any(alpha):
        z1[0] = 1
        z2[min(1, half - 1)] = 1
        return z1, z2
    mag = np.sqrt(np.abs(alpha))
    z1[:half] = mag
    z2[half:] = -np.exp(1j * np.angle(alpha)) * mag
    return z1, z2


def capacity(v: np.ndarray, n: int | None = None, tol: Tolerances = DEFAULT_TOL):
    """Pairwise concurrence capacity and a witnessing pair of states.

    Returns ``(value, witness)``.  ``witness.phi`` and ``witness.psi`` are unit
    vectors with concurrence_form(phi, psi) = 0 and
    |concurrence_form(v phi, v psi)| = value.
    """
    spec = concurrence_spectrum(v, n, tol)
    value = chebyshev_radius(spec.hull_points)
    f = ccd(v, tol=tol)
    dim = v.shape[0]
    if f.parity == "odd":
        lam = f.d[: dim // 2] ** 2
        beta, achieved = optimal_beta(lam)
        z1, z2 = _states_odd(beta, dim)
    else:
        lam = f.d**2
        beta, achieved = optimal_beta(lam)
        z1, z2 = _states_even(beta, dim)
    # phi = k2^{-1} B z, so that v phi = k1 a B z
    back = dagger(f.k2) @ f.basis
    phi = back @ z1
    psi = back @ z2
    return value, CapacityWitness(beta, lam, phi, psi, achieved)


def witness_defects(v: np.ndarray, w: CapacityWitness):
    """(norm defect, form-orthogonality defect, |C(v phi, v psi)| - value)."""
    norm = abs(np.linalg.norm(w.phi) - 1) + abs(np.linalg.norm(w.psi) - 1)
    ortho = abs(concurrence_form(w.phi, w.psi))
    gap = abs(concurrence_form(v @ w.phi, v @ w.psi)) - w.value
    return norm, ortho, gap


def capacity_monotonicity_check(v: np.ndarray, n: int | None = None, tol_mono: float = 1e-8,
                                tol: Tolerances = DEFAULT_TOL) -> MonotonicityReport:
    """Compare the capacity of v with that of v (x) I_2 on one more qubit."""
    v = require_unitary(v, tol.unitary)
    nq = num_qubits(v.shape[0])
    spec_n = concurrence_spectrum(v, n, tol)
    spec_n1 = concurrence_spectrum(np.kron(v, np.eye(2)), nq + 1, tol)
    k_n = chebyshev_radius(spec_n.hull_points)
    k_n1 = chebyshev_radius(spec_n1.hull_points)
    return MonotonicityReport(nq, k_n, k_n1, k_n1 < k_n - tol_mono)


def _fraction_chunk(n: int, size: int, seed: int, index: int, tol_hull: float) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    m = 1 << (n - 1)
    phases = rng.uniform(0.0, 2 * np.pi, size=(size, m))
    # determinant correction: a common rotation, irrelevant to the hull test
    phases -= phases.mean(axis=1, keepdims=True)
    return int(unit_circle_hull_contains_zero(2 * phases, tol_hull).sum())


def maximal_capacity_fraction(n: int, samples: int, seed: int = 0, threads: int = 1,
                              tol_hull: float = DEFAULT_TOL.hull) -> FractionEstimate:
    """Monte Carlo estimate of the Haar-on-A probability that kappa_n(a) = 1 (odd n).

    Draws the N/2 distinct phases of a repeat-diagonal ``a`` uniformly and
    tests whether 0 is in the hull of the squared phases.  Samples are split
    in fixed chunks with per-chunk seeds, so the result does not depend on
    ``threads``.
    """
    if n % 2 == 0 or n < 1:
        raise ParityError("the maximal-capacity fraction is defined here for odd n")
    if samples < 1:
        raise ValueError("samples must be positive")
    sizes = [min(MC_CHUNK, samples - start) for start in range(0, samples, MC_CHUNK)]
    jobs = [(n, size, seed, i, tol_hull) for i, size in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = list(pool.map(lambda job: _fraction_chunk(*job), jobs))
    else:
        hits = [_fraction_chunk(*job) for job in jobs]
    frac = sum(hits) / samples
    stderr = float(np.sqrt(frac * (1 - frac) / samples))
    return FractionEstimate(n, samples, frac, stderr)


def half_plane_probability(m: int) -> float:
    """P(m iid uniform points on the circle lie in a common half-plane) = m 2^{1-m}."""
    return m * 2.0 ** (1 - m)


def capacity_sweep(unitary_of, params, n: int | None = None, tol: Tolerances = DEFAULT_TOL):
    """Rows (parameter, capacity, maximal) for a one-parameter family of unitaries."""
    rows = []
    for p in params:
        spec = concurrence_spectrum(unitary_of(p), n, tol)
        rows.append((float(p), chebyshev_radius(spec.hull_points), hull_contains_zero(spec.hull_points, tol.hull)))
    return rows

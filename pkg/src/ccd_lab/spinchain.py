"""Spin-chain Hamiltonians and the time-reversal analysis built on them.

Two coupling conventions live side by side here:

* ``xyz`` and ``ising`` use the couplings as given, H = sum_bonds Jx XX + Jy YY + Jz ZZ.
* ``xy_field`` uses J(1+g)/4 XX + J(1-g)/4 YY per bond plus (h_z/2) Z per site,
  with J taken from ``Jx``.

Periodic chains close with the bond (n, 1); for n = 2 that bond coincides
with (1, 2), so the coupling is counted twice.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import linear_sum_assignment

from .capacity import ConcurrenceSpectrum, concurrence_spectrum, spectrum_from_points
from .errors import CcdLabError, DimensionError, ParityError, PreconditionError
from .geometry import hull_contains_zero
from .linalg import (
    DEFAULT_TOL,
    MAX_QUBITS,
    SIGMA,
    Tolerances,
    dagger,
    eig_hermitian,
    num_qubits,
    require_hermitian,
    spin_flip_matrix,
)
from .spinflip import concurrence, is_time_symmetric

FAMILIES = ("xyz", "ising", "xy_field")
BOUNDARIES = ("periodic", "open")


@dataclass(frozen=True)
class SpinChainSpec:
    n: int
    family: str = "xyz"
    Jx: float = 0.0
    Jy: float = 0.0
    Jz: float = 0.0
    g: float = 0.0
    h_z: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.n < 2:
            raise DimensionError("a chain needs at least two sites")
        if self.n > MAX_QUBITS:
            raise DimensionError(f"{self.n} sites exceeds the dense cap of {MAX_QUBITS}")
        if self.family == "ising" and (self.Jx or self.Jy):
            raise ValueError("the Ising family has Jx = Jy = 0")

    def bonds(self) -> list[tuple[int, int]]:
        pairs = [(j, j + 1) for j in range(self.n - 1)]
        if self.boundary == "periodic":
            pairs.append((self.n - 1, 0))
        return pairs


def xxx_chain(n: int, J: float = 1.0, boundary: str = "periodic") -> SpinChainSpec:
    return SpinChainSpec(n, "xyz", J, J, J, boundary=boundary)


def xy_chain(n: int, J: float = 1.0, boundary: str = "periodic") -> SpinChainSpec:
    return SpinChainSpec(n, "xyz", J, J, 0.0, boundary=boundary)


def ising_chain(n: int, Jz: float = 1.0, boundary: str = "periodic") -> SpinChainSpec:
    return SpinChainSpec(n, "ising", Jz=Jz, boundary=boundary)


def _site_op(n: int, ops: dict[int, np.ndarray]) -> np.ndarray:
    """Tensor product with ``ops[k]`` on site k (site 0 is the leftmost factor)."""
    out = np.ones((1, 1), dtype=complex)
    for k in range(n):
        out = np.kron(out, ops.get(k, SIGMA["0"]))
    return out


def _diag_zz(n: int, i: int, j: int) -> np.ndarray:
    idx = np.arange(1 << n)
    bi = (idx >> (n - 1 - i)) & 1
    bj = (idx >> (n - 1 - j)) & 1
    return 1.0 - 2.0 * (bi ^ bj)


def _diag_z(n: int, i: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return 1.0 - 2.0 * ((idx >> (n - 1 - i)) & 1)


def build_hamiltonian(spec: SpinChainSpec) -> np.ndarray:
    n = spec.n
    if spec.family == "xy_field":
        cx, cy, cz = spec.Jx * (1 + spec.g) / 4, spec.Jx * (1 - spec.g) / 4, 0.0
    else:
        cx, cy, cz = spec.Jx, spec.Jy, spec.Jz
    dim = 1 << n
    h = np.zeros((dim, dim), dtype=complex)
    diag = np.zeros(dim)
    for i, j in spec.bonds():
        if cx:
            h += cx * _site_op(n, {i: SIGMA["x"], j: SIGMA["x"]})
        if cy:
            h += cy * _site_op(n, {i: SIGMA["y"], j: SIGMA["y"]})
        if cz:
            diag += cz * _diag_zz(n, i, j)
    if spec.family == "xy_field" and spec.h_z:
        for i in range(n):
            diag += spec.h_z / 2 * _diag_z(n, i)
    h[np.diag_indices(dim)] += diag
    return h


def total_sz(n: int) -> np.ndarray:
    """Diagonal of S_z = sum_j sigma^z_j."""
    return sum(_diag_z(n, i) for i in range(n))


def ising_spectrum_analytic(n: int, Jz: float) -> np.ndarray:
    """J_z (n - 2 sum_k b_k xor b_{k+1}) over bitstrings b, in computational order (periodic)."""
    if n < 2:
        raise DimensionError("a chain needs at least two sites")
    out = np.empty(1 << n)
    for idx, bits in enumerate(itertools.product((0, 1), repeat=n)):
        flips = sum(bits[k] ^ bits[(k + 1) % n] for k in range(n))
        out[idx] = Jz * (n - 2 * flips)
    return out


def random_time_symmetric_hamiltonian(n: int, seed=None, real: bool = False) -> np.ndarray:
    """Random traceless H commuting with the spin-flip (iH in p)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    dim = 1 << n
    a = rng.standard_normal((dim, dim))
    if not real:
        a = a + 1j * rng.standard_normal((dim, dim))
    h = (a + dagger(a)) / 2
    s = spin_flip_matrix(n)
    h = (h + s.T @ h.conj() @ s) / 2
    h -= np.trace(h) / dim * np.eye(dim)
    return h


# --- evolution spectra -------------------------------------------------------

def _match_multisets(a: np.ndarray, b: np.ndarray) -> float:
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) if a.size else 0.0


def evolution_concurrence_spectrum(h: np.ndarray, t: float, verify: bool = False,
                                   tol: Tolerances = DEFAULT_TOL) -> ConcurrenceSpectrum:
    """Concurrence spectrum of exp(-iHt) as {exp(-2i lambda_j t)}, without forming the unitary.

    Valid for real, time-symmetric H.  With ``verify`` the unitary is formed
    anyway and its spectrum compared to the shortcut (mismatch > 1e-8 raises).
    """
    h = require_hermitian(h, tol.herm)
    n = num_qubits(h.shape[0])
    scale = max(1.0, float(np.linalg.norm(h)))
    if np.linalg.norm(h.imag) > tol.herm * scale:
        raise PreconditionError("the evolution shortcut needs a real Hamiltonian")
    if not is_time_symmetric(h, tol.herm):
        raise PreconditionError("the evolution shortcut needs a time-symmetric Hamiltonian")
    lam = np.linalg.eigvalsh(h)
    spec = spectrum_from_points(n, np.exp(-2j * lam * t), tol)
    if verify:
        direct = concurrence_spectrum(expm(-1j * t * h), n, tol)
        gap = _match_multisets(spec.points, direct.points)
        if gap > 1e-8:
            raise CcdLabError(f"evolution shortcut disagrees with the direct spectrum by {gap:.3e}")
    return spec


def evolution_spectrum_mismatch(h: np.ndarray, t: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest matched distance between the shortcut and the direct spectrum."""
    n = num_qubits(h.shape[0])
    lam = np.linalg.eigvalsh(h)
    short = np.exp(-2j * lam * t)
    direct = concurrence_spectrum(expm(-1j * t * h), n, tol).points
    return _match_multisets(short, direct)


# --- minimal maximal-capacity time ---------------------------------------------

@dataclass(frozen=True)
class TminSweep:
    n: int
    Jz: float
    t_min: float
    times: np.ndarray = field(repr=False)
    maximal: np.ndarray = field(repr=False)
    first_maximal: float | None
    step: float
    consistent: bool


def min_maximal_capacity_time(n: int, Jz: float) -> float:
    """pi / (4 n |Jz|) for the periodic Ising chain with an even number of sites."""
    if n % 2:
        raise ParityError("the minimal-time formula is stated for even chains")
    if Jz == 0:
        raise PreconditionError("Jz must be nonzero")
    return math.pi / (4 * n * abs(Jz))


def tmin_sweep(n: int, Jz: float, grid: int = 400, t_max: float = math.pi / 4,
               verify: bool = False, tol: Tolerances = DEFAULT_TOL) -> TminSweep:
    """Scan t_k = k t_max / grid (k = 1..grid) for maximal capacity of exp(-i H_Ising t).

    ``consistent`` holds when every grid time more than one step below t_min
    is non-maximal and the first maximal grid time lies within one step of
    t_min.
    """
    t_min = min_maximal_capacity_time(n, Jz)
    h = build_hamiltonian(ising_chain(n, Jz))
    step = t_max / grid
    times = step * np.arange(1, grid + 1)
    flags = np.zeros(grid, dtype=bool)
    for k, t in enumerate(times):
        spec = evolution_concurrence_spectrum(h, t, verify=verify, tol=tol)
        flags[k] = hull_contains_zero(spec.hull_points, tol.hull)
    hits = np.flatnonzero(flags)
    first = float(times[hits[0]]) if hits.size else None
    below = times < t_min - step * (1 - 1e-9)
    ok = first is not None and not flags[below].any() and abs(first - t_min) <= step * (1 + 1e-9)
    return TminSweep(n, Jz, t_min, times, flags, first, step, bool(ok))


# --- Kramers analysis ----------------------------------------------------------

@dataclass(frozen=True)
class EnergyCluster:
    energy: float
    multiplicity: int
    flag: str
    concurrence: float | None
    ambiguous: bool = False


@dataclass(frozen=True)
class KramersReport:
    n: int
    clusters: tuple
    lemma_residual: float
    holds: bool
    violations: tuple = ()

    @property
    def ground(self) -> EnergyCluster:
        return self.clusters[0]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "clusters": [
                {"energy": c.energy, "multiplicity": c.multiplicity, "flag": c.flag,
                 "concurrence": c.concurrence, "ambiguous": c.ambiguous}
                for c in self.clusters
            ],
            "lemma_residual": self.lemma_residual,
            "holds": self.holds,
            "violations": list(self.violations),
        }


def _group(values: np.ndarray, thr: float):
    """Cluster sorted values; also mark clusters touched by a gap near the threshold."""
    groups, start = [], 0
    gaps = np.diff(values)
    near = (gaps > thr * 0.1) & (gaps < thr * 10)
    for i in range(1, values.size + 1):
        if i == values.size or gaps[i - 1] > thr:
            amb = bool(near[max(start - 1, 0):i].any()) if gaps.size else False
            groups.append((start, i, amb))
            start = i
    return groups


def kramers_report(h: np.ndarray, n: int | None = None, tol: Tolerances = DEFAULT_TOL,
                   concurrence_tol: float = 1e-8) -> KramersReport:
    """Degeneracy structure of a time-symmetric Hamiltonian.

    Odd n: every energy level must have even multiplicity.  Even n: every
    nondegenerate eigenstate must have concurrence 1.  Violations are listed
    rather than raised; a Hamiltonian that is not time-symmetric is an error.
    """
    h = require_hermitian(h, tol.herm)
    nq = num_qubits(h.shape[0])
    if n is not None and n != nq:
        raise DimensionError(f"matrix does not act on {n} qubits")
    scale = max(1.0, float(np.linalg.norm(h)))
    if abs(np.trace(h)) > tol.herm * scale:
        raise PreconditionError("Hamiltonian must be traceless")
    if not is_time_symmetric(h, tol.herm):
        raise PreconditionError("Hamiltonian is not time-symmetric under the spin-flip")
    lam, vecs = eig_hermitian(h, tol.herm)
    s = spin_flip_matrix(nq)
    flipped = s @ vecs.conj()
    lemma = float(np.max(np.linalg.norm(h @ flipped - flipped * lam, axis=0))) if lam.size else 0.0
    thr = tol.cluster * max(1.0, float(lam[-1] - lam[0]))
    clusters, violations = [], []
    for lo, hi, amb in _group(lam, thr):
        mult = hi - lo
        energy = float(lam[lo:hi].mean())
        conc = None
        if mult == 1:
            flag = "nondegenerate"
            conc = concurrence(vecs[:, lo])
        elif mult % 2 == 0:
            flag = "even_multiplicity"
        else:
            flag = "odd_degenerate"
        if nq % 2 and mult % 2:
            violations.append(f"level {energy:.12g} has odd multiplicity {mult}")
        if nq % 2 == 0 and conc is not None and conc < 1 - concurrence_tol:
            violations.append(f"nondegenerate level {energy:.12g} has concurrence {conc:.12g}")
        clusters.append(EnergyCluster(energy, mult, flag, conc, amb))
    if lemma > 1e-9 * scale:
        violations.append(f"spin-flip eigenstate residual {lemma:.3e}")
    return KramersReport(nq, tuple(clusters), lemma, not violations, tuple(violations))


# --- symmetry-breaking field sweep -----------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    h: float
    energy: float
    degeneracy: int
    sz_sector: float
    concurrence: float


def _ground_row(n: int, g: float, J: float, h: float, boundary: str, tol: Tolerances) -> SweepRow:
    ham = build_hamiltonian(SpinChainSpec(n, "xy_field", Jx=J, g=g, h_z=h, boundary=boundary))
    lam, vecs = eig_hermitian(ham, tol.herm)
    thr = tol.cluster * max(1.0, float(lam[-1] - lam[0]))
    deg = int(np.sum(lam - lam[0] <= thr))
    psi = vecs[:, 0]
    # exact sectors come out with ~1e-30 noise; keep the report readable
    sz = round(float(np.real(np.vdot(psi, total_sz(n) * psi))), 10) + 0.0
    return SweepRow(float(h), float(lam[0]), deg, sz, concurrence(psi))


def ground_state_concurrence_sweep(n: int, g: float, h_values, J: float = 1.0, boundary: str = "periodic",
                                   threads: int = 1, tol: Tolerances = DEFAULT_TOL) -> list[SweepRow]:
    """Ground-state energy, degeneracy, S_z expectation and concurrence along a field grid."""
    if n % 2:
        raise ParityError("the field sweep is defined for even chains")
    hs = [float(h) for h in h_values]
    work = lambda h: _ground_row(n, g, J, h, boundary, tol)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, hs))
    return [work(h) for h in hs]


def crossing_field(n: int, g: float = 0.0, J: float = 1.0, boundary: str = "periodic",
                   h_lo: float = 0.0, h_hi: float | None = None, tol_h: float = 1e-10,
                   tol: Tolerances = DEFAULT_TOL) -> float:
    """Field at which the ground state leaves the S_z = 0 sector, by bisection."""
    def sector(h):
        return round(_ground_row(n, g, J, h, boundary, tol).sz_sector)

    if sector(h_lo) != 0:
        raise PreconditionError("ground state at the lower field is not in the S_z = 0 sector")
    if h_hi is None:
        h_hi = max(1.0, abs(J))
        while sector(h_hi) == 0:
            h_hi *= 2
            if h_hi > 1e6 * max(1.0, abs(J)):
                raise CcdLabError("no sector change found")
    elif sector(h_hi) == 0:
        raise PreconditionError("ground state at the upper field is still in the S_z = 0 sector")
    lo, hi = h_lo, h_hi
    while hi - lo > tol_h:
        mid = (lo + hi) / 2
        if sector(mid) == 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2

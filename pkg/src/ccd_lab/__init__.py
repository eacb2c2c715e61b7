"""Concurrence canonical decomposition toolkit.

Decompose n-qubit unitaries as v = k1 a k2 with k1, k2 preserving the
concurrence form, compute concurrence spectra and entangling capacities,
and analyse spin-flip time-reversal symmetry of spin-chain Hamiltonians.
"""
from .capacity import (
    CapacityWitness,
    ConcurrenceSpectrum,
    capacity,
    capacity_is_maximal,
    capacity_monotonicity_check,
    concurrence_spectrum,
    maximal_capacity_fraction,
)
from .ccd import CcdFactors, PolarFactors, ccd, kak_aii, polar_time_reversal
from .errors import CcdLabError
from .geometry import hull_contains_zero, smallest_enclosing_circle
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    eig_hermitian,
    kron,
    log_unitary,
    pauli_matrix,
    random_special_unitary,
)
from .spinchain import (
    KramersReport,
    SpinChainSpec,
    build_hamiltonian,
    evolution_concurrence_spectrum,
    ground_state_concurrence_sweep,
    ising_spectrum_analytic,
    kramers_report,
    min_maximal_capacity_time,
)
from .spinflip import (
    BasisKind,
    PauliClass,
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
from .symplectic import (
    SkewSymmetricHamiltonian,
    SymplecticEigResult,
    is_j_skew_symmetric,
    reduce_to_tridiagonal,
    symplectic_eig,
    tridiagonal_qr,
)

__version__ = "0.1.0"

"""Named unitaries, states and chains used by the command line and the tests."""
from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .spinchain import SpinChainSpec, ising_chain, xxx_chain, xy_chain


def cphase(t: float) -> np.ndarray:
    """diag(e^{-it}, e^{-it}, e^{-it}, e^{3it}), a determinant-one controlled phase."""
    return np.diag(np.exp(1j * t * np.array([-1, -1, -1, 3])))


def cnot() -> np.ndarray:
    return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def ghz_state(n: int) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return psi


def w_state(n: int) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    for k in range(n):
        psi[1 << k] = 1
    return psi / np.sqrt(n)


UNITARIES = {
    "cphase": lambda n, t: _two_qubit(n, cphase(t)),
    "cnot": lambda n, t: _two_qubit(n, cnot()),
    "identity": lambda n, t: np.eye(1 << n, dtype=complex),
}

STATES = {
    "ghz": lambda n: ghz_state(n),
    "w": lambda n: w_state(n),
    "w4": lambda n: w_state(4),
}


def _two_qubit(n: int, m: np.ndarray) -> np.ndarray:
    if n != 2:
        raise DimensionError("this example is a two-qubit gate; use --n 2")
    return m


def chain_spec(family: str, n: int, jx: float = 1.0, jy: float = 1.0, jz: float = 1.0,
               g: float = 0.0, h: float = 0.0, boundary: str = "periodic") -> SpinChainSpec:
    """Resolve a family name, including the xxx/xy presets, to a chain spec."""
    if family == "xxx":
        return xxx_chain(n, jx, boundary)
    if family == "xy":
        return xy_chain(n, jx, boundary)
    if family == "ising":
        return ising_chain(n, jz, boundary)
    if family == "xy_field":
        return SpinChainSpec(n, "xy_field", Jx=jx, g=g, h_z=h, boundary=boundary)
    return SpinChainSpec(n, family, jx, jy, jz, g=g, h_z=h, boundary=boundary)

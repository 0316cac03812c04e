"""Linear cluster state built from an arbitrary input qubit.

The register starts as ``|psi_in> |+> |+> |+> |+>`` and is entangled by the
diagonal phase operator ``S = exp(-i pi H_int)`` with

    H_int = sum_j (1 + Z_j)/2 * (1 - Z_{j+1})/2.

A computational basis bit ``b = 0`` is the ``Z = +1`` eigenstate, so the
nearest-neighbour term is 1 exactly when ``(b_j, b_{j+1}) = (0, 1)`` and the
diagonal of ``S`` is ``(-1) ** sum_j (1 - b_j) b_{j+1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qstate import KET_PLUS, MAX_QUBITS, kron

N_QUBITS = 5


@dataclass(frozen=True)
class InputState:
    """Bloch angles of ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")

    @property
    def alpha(self) -> float:
        return math.cos(self.theta / 2)

    @property
    def beta(self) -> complex:
        return complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(self.theta / 2)

    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)


PLUS_INPUT = InputState(math.pi / 2, 0.0)


@dataclass(frozen=True)
class ClusterState:
    state: np.ndarray
    input: InputState


def product_state(inp: InputState, n: int = N_QUBITS) -> np.ndarray:
    return kron(inp.ket(), *[KET_PLUS] * (n - 1))


@lru_cache(maxsize=None)
def _phase_diagonal(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1  # column 0 is qubit 1
    exponent = ((1 - bits[:, :-1]) * bits[:, 1:]).sum(axis=1)
    diag = np.where(exponent % 2 == 0, 1.0, -1.0).astype(complex)
    diag.setflags(write=False)
    return diag


def ising_phase_diagonal(n: int = N_QUBITS) -> np.ndarray:
    """Diagonal of ``S`` as a read-only vector of +-1."""
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in 2..{MAX_QUBITS}, got {n}")
    return _phase_diagonal(n)


def ising_phase_operator(n: int = N_QUBITS) -> np.ndarray:
    return np.diag(ising_phase_diagonal(n))


def cluster_state(inp: InputState, n: int = N_QUBITS) -> ClusterState:
    vec = ising_phase_diagonal(n) * product_state(inp, n)
    return ClusterState(vec, inp)


def cluster_vectors(kets: np.ndarray, n: int = N_QUBITS) -> np.ndarray:
    """Cluster states for a batch of input kets of shape (N, 2); returns (N, 2**n)."""
    kets = np.asarray(kets, dtype=complex)
    rest = kron(*[KET_PLUS] * (n - 1))
    return (kets[:, :, None] * rest[None, None, :]).reshape(len(kets), -1) * ising_phase_diagonal(n)

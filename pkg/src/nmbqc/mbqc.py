"""Noisy measurement-based X/Z gates and resource-state preparation.

Gate protocol: qubits 1-4 of the cluster are measured in the sigma_x basis
at times ``t1 <= t2 <= t3 <= t4``; the gate output appears on qubit 5 after
the byproduct correction ``B_s = Z^(s1+s3) X^(s2+s4)``.

Resource protocol: qubits 2-4 of the ``|+>``-input cluster are measured at
``t2 <= t3 <= t4``; qubits 1 and 5 then hold ``(I x U)(|00> + |11>)/sqrt(2)``
after the correction ``B_r`` on qubit 5.

Noise model: each qubit receives its one-shot channel evaluated at the time
it is measured; qubits that are never measured receive it at the last
scheduled time. Local channels and projections on different qubits commute,
so the whole evolution is the product Kraus map followed by the projectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Sequence

import numpy as np

from . import kernels
from .channels import Channel, KrausPair
from .cluster import N_QUBITS, PLUS_INPUT, InputState, cluster_state, cluster_vectors
from .qstate import (
    HADAMARD,
    I2,
    KET_MINUS,
    KET_PLUS,
    SIGMA_X,
    SIGMA_Z,
    conjugate,
    density,
    embed_op,
    kron,
    partial_trace,
)

_WEIGHT_FLOOR = 1e-300


class GateKind(str, Enum):
    X = "x"
    Z = "z"

    @property
    def unitary(self) -> np.ndarray:
        return SIGMA_X if self is GateKind.X else SIGMA_Z


class ResourceKind(str, Enum):
    X = "x"
    Z = "z"

    @property
    def unitary(self) -> np.ndarray:
        return SIGMA_X if self is ResourceKind.X else SIGMA_Z


class Collapse(IntEnum):
    PLUS = 0
    MINUS = 1

    @property
    def ket(self) -> np.ndarray:
        return KET_PLUS if self is Collapse.PLUS else KET_MINUS


class BranchConvention(str, Enum):
    """How outcome branches are combined into one output state.

    ``WEIGHTED`` sums the unnormalized branches (each carries its own
    probability). ``UNIFORM`` averages the per-branch normalized states with
    equal weight. The two coincide whenever every outcome is equiprobable,
    which is the case for every schedule and channel in this package.
    """

    WEIGHTED = "weighted"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class MeasurementSchedule:
    """Measurement times in qubit order: 4 entries (gate) or 3 (resource)."""

    times: tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        object.__setattr__(self, "times", times)
        if len(times) not in (3, 4):
            raise ValueError(f"schedule needs 3 or 4 times, got {len(times)}")
        if any(not t >= 0 for t in times):
            raise ValueError(f"measurement times must be >= 0: {times}")
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError(f"measurement times must be nondecreasing: {times}")

    @classmethod
    def from_codes(cls, codes: Sequence[int], channel: Channel) -> "MeasurementSchedule":
        return cls(tuple(channel.code_time(c) for c in codes))

    @property
    def last(self) -> float:
        return self.times[-1]

    @property
    def is_gate(self) -> bool:
        return len(self.times) == 4

    def qubit_times(self) -> tuple[float, ...]:
        """Evaluation time of the channel on each of the five qubits."""
        if self.is_gate:
            return self.times + (self.last,)
        return (self.last,) + self.times + (self.last,)

    def __len__(self):
        return len(self.times)


def _as_schedule(schedule) -> MeasurementSchedule:
    return schedule if isinstance(schedule, MeasurementSchedule) else MeasurementSchedule(tuple(schedule))


@dataclass(frozen=True)
class BranchResult:
    collapses: tuple[Collapse, ...]
    state: np.ndarray  # reduced, corrected, unnormalized
    weight: float


def qubit_kraus(channel: Channel, schedule) -> list[KrausPair]:
    schedule = _as_schedule(schedule)
    return [channel.kraus(t) for t in schedule.qubit_times()]


def product_kraus_map(rho, pairs: Sequence[KrausPair]) -> np.ndarray:
    """Sum over all Kraus index strings of ``M rho M^dagger`` with ``M = E^(1) x ... x E^(n)``."""
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for ops in itertools.product(*[(p.e1, p.e2) for p in pairs]):
        out += conjugate(rho, kron(*ops))
    return out


def noisy_cluster(inp: InputState, channel: Channel, schedule) -> np.ndarray:
    """Noisy five-qubit cluster density matrix just before the projections."""
    schedule = _as_schedule(schedule)
    rho = density(cluster_state(inp).state)
    return product_kraus_map(rho, qubit_kraus(channel, schedule))


def xbasis_projector(qubit: int, collapse: Collapse, n: int = N_QUBITS) -> np.ndarray:
    ket = Collapse(collapse).ket
    return embed_op(np.outer(ket, ket.conj()), qubit, n)


def s_bits(gate: GateKind, collapses: Sequence[Collapse]) -> tuple[int, ...]:
    """Byproduct exponents ``s1..s4`` from the four sigma_x outcomes.

    The gate-defining qubit (2 for X, 3 for Z) gives ``s = 1`` on ``|+>``;
    all others give ``s = 1`` on ``|->``.
    """
    if len(collapses) != 4:
        raise ValueError("gate protocol has four outcomes")
    flipped = 1 if GateKind(gate) is GateKind.X else 2
    return tuple(
        int(Collapse(c) is Collapse.PLUS) if k == flipped else int(Collapse(c) is Collapse.MINUS)
        for k, c in enumerate(collapses)
    )


def _pauli_power(p: np.ndarray, e: int) -> np.ndarray:
    return p if e % 2 else I2


def byproduct_gate(gate: GateKind, s: Sequence[int]) -> np.ndarray:
    s1, s2, s3, s4 = s
    return _pauli_power(SIGMA_Z, s1 + s3) @ _pauli_power(SIGMA_X, s2 + s4)


def r_bits(kind: ResourceKind, collapses: Sequence[Collapse]) -> tuple[int, int, int]:
    """Correction exponents ``(r2, r3, r4)`` from the outcomes on qubits 2-4.

    ``r2`` and ``r4`` are 1 on ``|+>`` for both kinds. ``r3`` is 1 on ``|+>``
    for the Z resource and 1 on ``|->`` for the X resource; this is the
    assignment for which every noiseless branch is corrected exactly.
    """
    if len(collapses) != 3:
        raise ValueError("resource protocol has three outcomes")
    c2, c3, c4 = (Collapse(c) for c in collapses)
    r2 = int(c2 is Collapse.PLUS)
    r4 = int(c4 is Collapse.PLUS)
    r3 = int(c3 is Collapse.PLUS) if ResourceKind(kind) is ResourceKind.Z else int(c3 is Collapse.MINUS)
    return r2, r3, r4


def byproduct_resource(kind: ResourceKind, r: Sequence[int]) -> np.ndarray:
    """Correction on qubits (1, 5), acting on qubit 5 only."""
    r2, r3, r4 = r
    X, Z = SIGMA_X, SIGMA_Z
    if ResourceKind(kind) is ResourceKind.Z:
        b5 = _pauli_power(X, r2) @ _pauli_power(Z, r3) @ _pauli_power(X, r4)
    else:
        b5 = _pauli_power(Z, r2 + r4) @ _pauli_power(X, r2 + r4 + 1) @ _pauli_power(Z, r2 + r3 + r4)
    return kron(I2, b5)


def resource_state(kind: ResourceKind) -> np.ndarray:
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return kron(I2, ResourceKind(kind).unitary) @ bell


def _combine(branches: Sequence[BranchResult], convention: BranchConvention) -> np.ndarray:
    if BranchConvention(convention) is BranchConvention.WEIGHTED:
        return sum(b.state for b in branches)
    for b in branches:
        if b.weight <= _WEIGHT_FLOOR:
            raise ZeroDivisionError(f"branch {b.collapses} has zero probability")
    return sum(b.state / b.weight for b in branches) / len(branches)


def gate_branches(inp: InputState, gate: GateKind, channel: Channel, schedule) -> list[BranchResult]:
    schedule = _as_schedule(schedule)
    if not schedule.is_gate:
        raise ValueError("gate protocol needs a 4-time schedule")
    rho = noisy_cluster(inp, channel, schedule)
    out = []
    for collapses in itertools.product(Collapse, repeat=4):
        proj = np.eye(2**N_QUBITS, dtype=complex)
        for q, c in enumerate(collapses, start=1):
            proj = proj @ xbasis_projector(q, c)
        projected = conjugate(rho, proj)
        weight = float(np.trace(projected).real)
        reduced = partial_trace(projected, {5}, N_QUBITS)
        state = conjugate(reduced, byproduct_gate(gate, s_bits(gate, collapses)))
        out.append(BranchResult(collapses, state, weight))
    return out


def gate_output_state(
    inp: InputState,
    gate: GateKind,
    channel: Channel,
    schedule,
    convention: BranchConvention = BranchConvention.WEIGHTED,
) -> np.ndarray:
    """Corrected single-qubit output of the gate protocol (literal projector route)."""
    return _combine(gate_branches(inp, gate, channel, schedule), convention)


def resource_branches(kind: ResourceKind, channel: Channel, schedule) -> list[BranchResult]:
    schedule = _as_schedule(schedule)
    if schedule.is_gate:
        raise ValueError("resource protocol needs a 3-time schedule")
    rho = noisy_cluster(PLUS_INPUT, channel, schedule)
    out = []
    for collapses in itertools.product(Collapse, repeat=3):
        proj = np.eye(2**N_QUBITS, dtype=complex)
        for q, c in zip((2, 3, 4), collapses):
            proj = proj @ xbasis_projector(q, c)
        projected = conjugate(rho, proj)
        weight = float(np.trace(projected).real)
        reduced = partial_trace(projected, {1, 5}, N_QUBITS)
        state = conjugate(reduced, byproduct_resource(kind, r_bits(kind, collapses)))
        out.append(BranchResult(collapses, state, weight))
    return out


def resource_output_state(
    kind: ResourceKind,
    channel: Channel,
    schedule,
    convention: BranchConvention = BranchConvention.WEIGHTED,
) -> np.ndarray:
    """Corrected two-qubit state on qubits (1, 5) of the resource protocol."""
    return _combine(resource_branches(kind, channel, schedule), convention)


# batched route over many inputs: compiled or numpy kernels

_BRANCH_COLLAPSES = list(itertools.product(Collapse, repeat=4))


def _branch_corrections(gate: GateKind) -> np.ndarray:
    return np.stack([byproduct_gate(gate, s_bits(gate, c)) for c in _BRANCH_COLLAPSES])


def gate_branch_terms(kets, gate: GateKind, channel: Channel, schedule):
    """Per-branch fidelity numerators and weights for a batch of input kets.

    ``kets`` has shape (N, 2). Returns ``(num, weight)`` of shape (N, 16) with
    branches ordered like ``itertools.product(Collapse, repeat=4)``; ``num`` is
    ``<U psi|B rho_b B^dagger|U psi>`` for the unnormalized branch ``rho_b``.
    """
    schedule = _as_schedule(schedule)
    if not schedule.is_gate:
        raise ValueError("gate protocol needs a 4-time schedule")
    kets = np.atleast_2d(np.asarray(kets, dtype=complex))
    pairs = qubit_kraus(channel, schedule)
    # rotating the measured qubits by H turns sigma_x projections into diagonal blocks
    kraus = np.stack(
        [np.stack([HADAMARD @ p.e1, HADAMARD @ p.e2]) for p in pairs[:4]] + [pairs[4].as_array()]
    )
    targets = kets @ GateKind(gate).unitary.T
    probes = np.einsum("bji,sj->sbi", _branch_corrections(gate).conj(), targets)
    return kernels.branch_blocks(cluster_vectors(kets), kraus, probes)


def gate_fidelities(
    kets,
    gate: GateKind,
    channel: Channel,
    schedule,
    convention: BranchConvention = BranchConvention.WEIGHTED,
) -> np.ndarray:
    num, weight = gate_branch_terms(kets, gate, channel, schedule)
    if BranchConvention(convention) is BranchConvention.WEIGHTED:
        return num.sum(axis=1)
    if np.any(weight <= _WEIGHT_FLOOR):
        raise ZeroDivisionError("a measurement branch has zero probability")
    return (num / weight).mean(axis=1)

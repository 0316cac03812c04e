"""Average gate, resource and cluster fidelities with dispersion statistics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .channels import Channel
from .closedform import closed_form_per_state
from .cluster import InputState, cluster_vectors
from .grid import BlochGrid, bloch_states, grid_angles, grid_kets
from .mbqc import (
    BranchConvention,
    GateKind,
    MeasurementSchedule,
    ResourceKind,
    _as_schedule,
    gate_fidelities,
    resource_output_state,
    resource_state,
)
from .qstate import fidelity_pure, kron

METHODS = ("simulate", "closed")

__all__ = [
    "BlochGrid",
    "FidelityReport",
    "average_gate_fidelity",
    "bloch_states",
    "cluster_average_fidelity",
    "cluster_fidelity_curve",
    "cluster_fidelity_per_state",
    "resource_gate_fidelity",
    "stddev_map",
]


@dataclass(frozen=True)
class FidelityReport:
    value: float
    std_dev: float = 0.0
    max_dev: float = 0.0
    mean_abs_dev: float = 0.0
    theta: np.ndarray | None = field(default=None, repr=False)
    phi: np.ndarray | None = field(default=None, repr=False)
    per_state: np.ndarray | None = field(default=None, repr=False)
    params: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, theta, phi, values, params: dict) -> "FidelityReport":
        values = np.asarray(values, dtype=float)
        mean = float(values.mean())
        dev = np.abs(values - mean)
        return cls(
            value=mean,
            std_dev=float(np.sqrt(np.mean(dev**2))),
            max_dev=float(dev.max()),
            mean_abs_dev=float(dev.mean()),
            theta=np.asarray(theta),
            phi=np.asarray(phi),
            per_state=values,
            params=params,
        )

    def as_map(self) -> dict[tuple[float, float], float]:
        if self.per_state is None:
            return {}
        return {(float(t), float(p)): float(f) for t, p, f in zip(self.theta, self.phi, self.per_state)}

    def summary(self) -> dict:
        return {
            "value": self.value,
            "std_dev": self.std_dev,
            "max_dev": self.max_dev,
            "mean_abs_dev": self.mean_abs_dev,
            "params": self.params,
        }


def _gate_params(gate, channel, schedule, grid, method, convention) -> dict:
    return {
        **channel.echo(),
        "gate": GateKind(gate).value,
        "schedule": list(schedule.times),
        "grid": grid.echo(),
        "method": method,
        "branch_convention": BranchConvention(convention).value,
    }


def average_gate_fidelity(
    gate: GateKind,
    channel: Channel,
    schedule,
    grid: BlochGrid | None = None,
    *,
    method: str = "simulate",
    convention: BranchConvention = BranchConvention.WEIGHTED,
) -> FidelityReport:
    """Mean over the grid of ``<U psi|rho_s(psi)|U psi>``.

    ``method="simulate"`` runs the density-matrix protocol for every input
    (through the compiled kernels when available); ``method="closed"`` uses
    the analytical per-state expression, which only exists for the
    probability-weighted combination of branches.
    """
    grid = grid or BlochGrid()
    schedule = _as_schedule(schedule)
    theta, phi = grid_angles(grid)
    if method == "simulate":
        values = gate_fidelities(grid_kets(grid), gate, channel, schedule, convention)
    elif method == "closed":
        values = closed_form_per_state(channel, schedule.times, theta, phi)
    else:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return FidelityReport.from_samples(
        theta, phi, values, _gate_params(gate, channel, schedule, grid, method, convention)
    )


def stddev_map(
    gate: GateKind,
    channel: Channel,
    schedule,
    grid: BlochGrid | None = None,
    *,
    method: str = "simulate",
    convention: BranchConvention = BranchConvention.WEIGHTED,
) -> FidelityReport:
    """Per-input fidelity surface with its deviation statistics.

    ``std_dev`` is the RMS deviation from the mean, ``mean_abs_dev`` the mean
    absolute deviation and ``max_dev`` the largest absolute deviation.
    """
    return average_gate_fidelity(gate, channel, schedule, grid, method=method, convention=convention)


def resource_gate_fidelity(
    kind: ResourceKind,
    channel: Channel,
    schedule,
    *,
    convention: BranchConvention = BranchConvention.WEIGHTED,
) -> FidelityReport:
    schedule = _as_schedule(schedule)
    rho = resource_output_state(kind, channel, schedule, convention)
    value = fidelity_pure(rho, resource_state(kind))
    params = {
        **channel.echo(),
        "resource": ResourceKind(kind).value,
        "schedule": list(schedule.times),
        "branch_convention": BranchConvention(convention).value,
    }
    return FidelityReport(value=value, params=params)


# cluster-state decay, no measurements


def _uniform_kraus(channel: Channel, t: float, n: int = 5) -> np.ndarray:
    return np.stack([channel.kraus(t).as_array()] * n)


def cluster_fidelity_per_state(t: float, channel: Channel, kets) -> np.ndarray:
    """``<psi_C|L_t(rho_C)|psi_C>`` per input ket, one density matrix each."""
    kets = np.atleast_2d(np.asarray(kets, dtype=complex))
    return kernels.channel_overlaps(cluster_vectors(kets), _uniform_kraus(channel, t))


def _gram_blocks(channel: Channel, t: float) -> np.ndarray:
    # G[m] = [[a^+ M a, a^+ M b], [b^+ M a, b^+ M b]] for every Kraus string M,
    # with a, b the clusters grown from |0> and |1>
    basis = cluster_vectors(np.eye(2))
    pair = channel.kraus(t)
    blocks = []
    for ops in itertools.product((pair.e1, pair.e2), repeat=5):
        m = kron(*ops)
        blocks.append(basis.conj() @ m @ basis.T)
    return np.stack(blocks)


def cluster_fidelity_curve(times: Sequence[float], channel: Channel, grid: BlochGrid | None = None) -> np.ndarray:
    """Grid-averaged cluster fidelity at each time.

    The cluster is linear in the input amplitudes, so each Kraus string
    reduces to a 2x2 Gram block on span{cluster(|0>), cluster(|1>)} and the
    per-state overlap is ``sum_m |c^dagger G_m c|^2`` with ``c = (alpha, beta)``.
    """
    kets = grid_kets(grid or BlochGrid())
    out = np.empty(len(times))
    for i, t in enumerate(times):
        g = _gram_blocks(channel, float(t))
        amp = np.einsum("si,mij,sj->sm", kets.conj(), g, kets)
        out[i] = float(np.mean(np.sum(np.abs(amp) ** 2, axis=1)))
    return out


def cluster_average_fidelity(
    t: float, channel: Channel, grid: BlochGrid | None = None, *, method: str = "simulate"
) -> FidelityReport:
    """Grid average of the overlap between the decayed and the ideal cluster.

    All five qubits evolve to the same time ``t``. ``method="simulate"``
    evaluates one density matrix per input; ``method="gram"`` uses the
    reduction of :func:`cluster_fidelity_curve`.
    """
    grid = grid or BlochGrid()
    theta, phi = grid_angles(grid)
    params = {**channel.echo(), "t": float(t), "grid": grid.echo(), "method": method}
    if method == "simulate":
        values = cluster_fidelity_per_state(t, channel, grid_kets(grid))
        return FidelityReport.from_samples(theta, phi, values, params)
    if method == "gram":
        return FidelityReport(value=float(cluster_fidelity_curve([t], channel, grid)[0]), params=params)
    raise ValueError(f"method must be 'simulate' or 'gram', got {method!r}")


def gate_fidelity_single(inp: InputState, gate: GateKind, channel: Channel, schedule, convention=BranchConvention.WEIGHTED) -> float:
    """Literal-route fidelity for one input, for spot checks."""
    from .mbqc import gate_output_state

    rho = gate_output_state(inp, gate, channel, schedule, convention)
    return fidelity_pure(rho, GateKind(gate).unitary @ inp.ket())


def schedule_from_codes(codes: Sequence[int], channel: Channel) -> MeasurementSchedule:
    return MeasurementSchedule.from_codes(codes, channel)

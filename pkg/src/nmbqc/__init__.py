"""Open-system simulation of X and Z gates on a five-qubit linear-cluster
measurement-based quantum computer under non-Markovian amplitude damping and
dephasing."""

from .channels import ADParams, KrausPair, PDParams, ad_kraus, ad_p, pd_kraus, pd_L
from .cluster import ClusterState, InputState, cluster_state, ising_phase_operator, product_state
from .closedform import closed_form_average, fm_ad, fm_pd, fpd_second_measurement
from .fidelity import (
    FidelityReport,
    average_gate_fidelity,
    cluster_average_fidelity,
    resource_gate_fidelity,
    stddev_map,
)
from .grid import BlochGrid, bloch_states
from .kernels import BACKEND as KERNEL_BACKEND
from .mbqc import (
    BranchConvention,
    Collapse,
    GateKind,
    MeasurementSchedule,
    ResourceKind,
    gate_output_state,
    noisy_cluster,
    resource_output_state,
)

__version__ = "0.1.0"

__all__ = [
    "ADParams",
    "BlochGrid",
    "BranchConvention",
    "ClusterState",
    "Collapse",
    "FidelityReport",
    "GateKind",
    "InputState",
    "KERNEL_BACKEND",
    "KrausPair",
    "MeasurementSchedule",
    "PDParams",
    "ResourceKind",
    "ad_kraus",
    "ad_p",
    "average_gate_fidelity",
    "bloch_states",
    "closed_form_average",
    "cluster_average_fidelity",
    "cluster_state",
    "fm_ad",
    "fm_pd",
    "fpd_second_measurement",
    "gate_output_state",
    "ising_phase_operator",
    "noisy_cluster",
    "pd_L",
    "pd_kraus",
    "product_state",
    "resource_gate_fidelity",
    "resource_output_state",
    "stddev_map",
]

"""Dense complex linear algebra for registers of up to five qubits.

Qubit 1 is the leftmost tensor factor (most significant bit of the basis
index). Matrices and state vectors are plain ``numpy`` arrays of dtype
``complex128``; nothing here mutates its inputs.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable

import numpy as np

MAX_QUBITS = 5
MAX_DIM = 2**MAX_QUBITS

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = -1e-10
IMAG_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


class NumericConsistencyError(ArithmeticError):
    """A quantity that must be real (or finite) came out otherwise."""


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def kron(*ops) -> np.ndarray:
    """Kronecker product of the arguments, first argument leftmost."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    out = reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))
    if out.ndim == 2 and max(out.shape) > MAX_DIM:
        raise ValueError(f"result dimension {max(out.shape)} exceeds {MAX_DIM}")
    return out


def embed_op(op, qubit: int, n: int) -> np.ndarray:
    """Place a single-qubit operator on ``qubit`` (1-based) of an ``n``-qubit register."""
    op = _as_matrix(op)
    if op.shape != (2, 2):
        raise ValueError("embed_op takes a 2x2 operator")
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}, got {n}")
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit index {qubit} out of range 1..{n}")
    factors = [I2] * n
    factors[qubit - 1] = op
    return kron(*factors)


def conjugate(rho, m) -> np.ndarray:
    """Return ``m @ rho @ m^dagger``. ``m`` need not be unitary."""
    rho = _as_matrix(rho)
    m = _as_matrix(m)
    if rho.shape != m.shape:
        raise ValueError(f"dimension mismatch: rho {rho.shape} vs operator {m.shape}")
    return m @ rho @ m.conj().T


def partial_trace(rho, keep: Iterable[int], n: int) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep`` (1-based), ascending order."""
    rho = _as_matrix(rho)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep {keep} not a subset of 1..{n}")
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"rho shape {rho.shape} does not match {n} qubits")
    if len(keep) == n:
        return rho.copy()

    rows = "abcdefghij"[:n]
    cols = "".join(rows[q - 1].upper() if q in keep else rows[q - 1] for q in range(1, n + 1))
    out = "".join(rows[q - 1] for q in keep) + "".join(rows[q - 1].upper() for q in keep)
    t = np.einsum(f"{rows}{cols}->{out}", rho.reshape([2] * (2 * n)))
    d = 2 ** len(keep)
    return t.reshape(d, d)


def density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def fidelity_pure(rho, psi) -> float:
    """Overlap ``<psi|rho|psi>``; raises if its imaginary part exceeds 1e-10."""
    rho = _as_matrix(rho)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (rho.shape[0],):
        raise ValueError(f"state of length {psi.shape} does not match rho {rho.shape}")
    val = np.vdot(psi, rho @ psi)
    if abs(val.imag) > IMAG_TOL:
        raise NumericConsistencyError(f"overlap has imaginary part {val.imag:.3e}")
    return float(val.real)


def check_density(rho, *, normalized: bool = True) -> None:
    """Raise ``NumericConsistencyError`` unless ``rho`` is a valid density matrix.

    With ``normalized=False`` the unit-trace requirement is dropped, which is
    what post-projection branch states need.
    """
    rho = _as_matrix(rho)
    if not np.all(np.isfinite(rho)):
        raise NumericConsistencyError("non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise NumericConsistencyError(f"not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr.imag) > HERMITIAN_TOL:
        raise NumericConsistencyError(f"trace has imaginary part {tr.imag:.3e}")
    if normalized and abs(tr.real - 1.0) > TRACE_TOL:
        raise NumericConsistencyError(f"trace {tr.real!r} differs from 1")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < POSITIVITY_TOL:
        raise NumericConsistencyError(f"negative eigenvalue {lo:.3e}")

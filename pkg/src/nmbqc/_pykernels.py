"""Pure-numpy versions of the hot kernels (fallback for ``_ckernels``).

Both kernels take a batch of pure register states ``psis`` of shape
``(N, 2**n)`` and per-qubit Kraus families ``kraus`` of shape ``(n, K, 2, 2)``
(entry ``q`` acts on qubit ``q + 1``), form ``rho = |psi><psi|`` and apply the
product channel. Work is chunked to bound memory.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 512


def _superops(kraus: np.ndarray) -> np.ndarray:
    # sup[q, a, b, c, d] = sum_k E_k[a, c] * conj(E_k[b, d])
    return np.einsum("qkac,qkbd->qabcd", kraus, kraus.conj())


def _noisy_rho(psis: np.ndarray, sup: np.ndarray) -> np.ndarray:
    m, dim = psis.shape
    n = sup.shape[0]
    t = (psis[:, :, None] * psis.conj()[:, None, :]).reshape((m,) + (2,) * (2 * n))
    for q in range(n):
        row, col = 1 + q, 1 + n + q
        t = np.tensordot(sup[q], t, axes=([2, 3], [row, col]))
        t = np.moveaxis(t, [0, 1], [row, col])
    return t.reshape(m, dim, dim)


def branch_blocks(psis, kraus, probes):
    """Per-branch probe overlaps and weights of the noisy register.

    The last qubit is the output; every other qubit is read out in the
    computational basis (callers fold any basis change into ``kraus``).
    Branch ``b`` is the 2x2 diagonal block of the noisy density matrix at
    block index ``b``. Returns ``(num, weight)``, each of shape ``(N, 2**(n-1))``,
    with ``num[s, b] = <v|block|v>`` for ``v = probes[s, b]`` and ``weight`` the
    block trace.
    """
    psis = np.ascontiguousarray(psis, dtype=complex)
    probes = np.ascontiguousarray(probes, dtype=complex)
    sup = _superops(np.asarray(kraus, dtype=complex))
    n_states, dim = psis.shape
    nb = dim // 2
    num = np.empty((n_states, nb))
    weight = np.empty((n_states, nb))
    for lo in range(0, n_states, _CHUNK):
        hi = min(lo + _CHUNK, n_states)
        rho = _noisy_rho(psis[lo:hi], sup).reshape(hi - lo, nb, 2, nb, 2)
        blk = np.einsum("sbibj->sbij", rho)
        v = probes[lo:hi]
        num[lo:hi] = np.einsum("sbi,sbij,sbj->sb", v.conj(), blk, v).real
        weight[lo:hi] = np.einsum("sbii->sb", blk).real
    return num, weight


def channel_overlaps(psis, kraus):
    """``<psi|Lambda(|psi><psi|)|psi>`` for every state in the batch."""
    psis = np.ascontiguousarray(psis, dtype=complex)
    sup = _superops(np.asarray(kraus, dtype=complex))
    out = np.empty(len(psis))
    for lo in range(0, len(psis), _CHUNK):
        hi = min(lo + _CHUNK, len(psis))
        p = psis[lo:hi]
        rho = _noisy_rho(p, sup)
        out[lo:hi] = np.einsum("si,sij,sj->s", p.conj(), rho, p).real
    return out

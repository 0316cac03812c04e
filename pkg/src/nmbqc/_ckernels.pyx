# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels; same contract as ``_pykernels``.

Instead of evolving the full density matrix, each state is pushed through
every Kraus string ``M = E_{k1} x ... x E_{kn}`` depth-first (one qubit per
level), and only the quantities the caller needs are accumulated at the
leaves: ``rho = sum_M (M psi)(M psi)^dagger``.
"""

import numpy as np

ctypedef double complex cplx

cdef enum:
    MAXN = 5
    MAXD = 32


cdef void _local(const cplx* src, cplx* dst, const cplx[:, ::1] e, Py_ssize_t mask,
                 Py_ssize_t dim) noexcept nogil:
    cdef Py_ssize_t i0, i1
    cdef cplx v0, v1
    for i0 in range(dim):
        if i0 & mask:
            continue
        i1 = i0 | mask
        v0 = src[i0]
        v1 = src[i1]
        dst[i0] = e[0, 0] * v0 + e[0, 1] * v1
        dst[i1] = e[1, 0] * v0 + e[1, 1] * v1


cdef void _walk_blocks(cplx* buf, Py_ssize_t level, Py_ssize_t n, Py_ssize_t dim,
                       const cplx[:, :, :, ::1] K, const cplx[:, ::1] probes,
                       double* num, double* w) noexcept nogil:
    # buf holds (n + 1) vectors of length MAXD; level l reads buf[l], writes buf[l + 1]
    cdef Py_ssize_t k, b, i0
    cdef cplx* cur = buf + level * MAXD
    cdef cplx* nxt = buf + (level + 1) * MAXD
    cdef cplx a0, a1, ov
    if level == n:
        for b in range(dim // 2):
            i0 = 2 * b
            a0 = cur[i0]
            a1 = cur[i0 + 1]
            ov = probes[b, 0].conjugate() * a0 + probes[b, 1].conjugate() * a1
            num[b] += ov.real * ov.real + ov.imag * ov.imag
            w[b] += a0.real * a0.real + a0.imag * a0.imag + a1.real * a1.real + a1.imag * a1.imag
        return
    for k in range(K.shape[1]):
        _local(cur, nxt, K[level, k], (<Py_ssize_t> 1) << (n - 1 - level), dim)
        _walk_blocks(buf, level + 1, n, dim, K, probes, num, w)


cdef void _walk_overlap(cplx* buf, Py_ssize_t level, Py_ssize_t n, Py_ssize_t dim,
                        const cplx[:, :, :, ::1] K, const cplx[::1] psi, double* acc) noexcept nogil:
    cdef Py_ssize_t k, i
    cdef cplx* cur = buf + level * MAXD
    cdef cplx* nxt = buf + (level + 1) * MAXD
    cdef cplx ov
    if level == n:
        ov = 0
        for i in range(dim):
            ov = ov + psi[i].conjugate() * cur[i]
        acc[0] += ov.real * ov.real + ov.imag * ov.imag
        return
    for k in range(K.shape[1]):
        _local(cur, nxt, K[level, k], (<Py_ssize_t> 1) << (n - 1 - level), dim)
        _walk_overlap(buf, level + 1, n, dim, K, psi, acc)


cdef Py_ssize_t _check(Py_ssize_t dim, Py_ssize_t n) except -1:
    if n > MAXN or dim != (<Py_ssize_t> 1) << n:
        raise ValueError("kraus count does not match register size (max 5 qubits)")
    return 0


def branch_blocks(psis, kraus, probes):
    cdef const cplx[:, ::1] P = np.ascontiguousarray(psis, dtype=complex)
    cdef const cplx[:, :, :, ::1] K = np.ascontiguousarray(kraus, dtype=complex)
    cdef const cplx[:, :, ::1] V = np.ascontiguousarray(probes, dtype=complex)
    cdef Py_ssize_t n_states = P.shape[0], dim = P.shape[1], n = K.shape[0]
    cdef Py_ssize_t nb = dim // 2
    _check(dim, n)
    if V.shape[0] != n_states or V.shape[1] != nb or V.shape[2] != 2:
        raise ValueError("probes must have shape (N, dim/2, 2)")
    num_arr = np.zeros((n_states, nb))
    w_arr = np.zeros((n_states, nb))
    cdef double[:, ::1] num = num_arr
    cdef double[:, ::1] w = w_arr
    cdef cplx buf[(MAXN + 1) * MAXD]
    cdef Py_ssize_t s, i
    with nogil:
        for s in range(n_states):
            for i in range(dim):
                buf[i] = P[s, i]
            _walk_blocks(buf, 0, n, dim, K, V[s], &num[s, 0], &w[s, 0])
    return num_arr, w_arr


def channel_overlaps(psis, kraus):
    cdef const cplx[:, ::1] P = np.ascontiguousarray(psis, dtype=complex)
    cdef const cplx[:, :, :, ::1] K = np.ascontiguousarray(kraus, dtype=complex)
    cdef Py_ssize_t n_states = P.shape[0], dim = P.shape[1], n = K.shape[0]
    _check(dim, n)
    out_arr = np.zeros(n_states)
    cdef double[::1] out = out_arr
    cdef cplx buf[(MAXN + 1) * MAXD]
    cdef Py_ssize_t s, i
    with nogil:
        for s in range(n_states):
            for i in range(dim):
                buf[i] = P[s, i]
            _walk_overlap(buf, 0, n, dim, K, P[s], &out[s])
    return out_arr

"""Numba kernels for the hot density-matrix and statevector updates.

Same contracts as ``_kernels_numpy``; explicit bit-mask loops instead of
tensor reshapes.  Qubit 0 is the least significant index bit, and for
two-qubit operators the first listed qubit is the high matrix bit.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _kraus_1q_dm(rho, kraus, q):
    d = rho.shape[0]
    m = 1 << q
    out = np.zeros_like(rho)
    for t in range(kraus.shape[0]):
        k00 = kraus[t, 0, 0]
        k01 = kraus[t, 0, 1]
        k10 = kraus[t, 1, 0]
        k11 = kraus[t, 1, 1]
        c00 = np.conj(k00)
        c01 = np.conj(k01)
        c10 = np.conj(k10)
        c11 = np.conj(k11)
        for r in range(d):
            if r & m:
                continue
            r1 = r | m
            for c in range(d):
                if c & m:
                    continue
                c1 = c | m
                a00 = rho[r, c]
                a01 = rho[r, c1]
                a10 = rho[r1, c]
                a11 = rho[r1, c1]
                p00 = k00 * a00 + k01 * a10
                p01 = k00 * a01 + k01 * a11
                p10 = k10 * a00 + k11 * a10
                p11 = k10 * a01 + k11 * a11
                out[r, c] += p00 * c00 + p01 * c01
                out[r, c1] += p00 * c10 + p01 * c11
                out[r1, c] += p10 * c00 + p11 * c01
                out[r1, c1] += p10 * c10 + p11 * c11
    return out


@njit(cache=True)
def _kraus_2q_dm(rho, kraus, qa, qb):
    d = rho.shape[0]
    ma = np.int64(1) << qa
    mb = np.int64(1) << qb
    both = ma | mb
    offs = np.empty(4, np.int64)
    offs[0] = 0
    offs[1] = mb
    offs[2] = ma
    offs[3] = both
    out = np.zeros_like(rho)
    blk = np.empty((4, 4), np.complex128)
    tmp = np.empty((4, 4), np.complex128)
    for t in range(kraus.shape[0]):
        km = kraus[t]
        for r in range(d):
            if r & both:
                continue
            for c in range(d):
                if c & both:
                    continue
                for i in range(4):
                    for j in range(4):
                        blk[i, j] = rho[r + offs[i], c + offs[j]]
                for i in range(4):
                    for j in range(4):
                        acc = 0.0 + 0.0j
                        for b in range(4):
                            acc += km[i, b] * blk[b, j]
                        tmp[i, j] = acc
                for i in range(4):
                    for j in range(4):
                        acc = 0.0 + 0.0j
                        for b in range(4):
                            acc += tmp[i, b] * np.conj(km[j, b])
                        out[r + offs[i], c + offs[j]] += acc
    return out


@njit(cache=True)
def _unitary_1q_sv(psi, u, q):
    m = 1 << q
    out = np.empty_like(psi)
    for i in range(psi.shape[0]):
        if i & m:
            continue
        i1 = i | m
        a = psi[i]
        b = psi[i1]
        out[i] = u[0, 0] * a + u[0, 1] * b
        out[i1] = u[1, 0] * a + u[1, 1] * b
    return out


@njit(cache=True)
def _unitary_2q_sv(psi, u, qa, qb):
    ma = np.int64(1) << qa
    mb = np.int64(1) << qb
    both = ma | mb
    offs = np.empty(4, np.int64)
    offs[0] = 0
    offs[1] = mb
    offs[2] = ma
    offs[3] = both
    out = np.empty_like(psi)
    for i in range(psi.shape[0]):
        if i & both:
            continue
        for a in range(4):
            acc = 0.0 + 0.0j
            for b in range(4):
                acc += u[a, b] * psi[i + offs[b]]
            out[i + offs[a]] = acc
    return out


def apply_kraus_dm(rho, kraus, qubits):
    kraus = np.ascontiguousarray(kraus)
    if len(qubits) == 1:
        return _kraus_1q_dm(rho, kraus, qubits[0])
    if len(qubits) == 2:
        return _kraus_2q_dm(rho, kraus, qubits[0], qubits[1])
    raise ValueError("numba kernels support one- and two-qubit operators only")


def apply_unitary_dm(rho, u, qubits):
    return apply_kraus_dm(rho, u[np.newaxis], qubits)


def apply_unitary_sv(psi, u, qubits):
    u = np.ascontiguousarray(u)
    if len(qubits) == 1:
        return _unitary_1q_sv(psi, u, qubits[0])
    if len(qubits) == 2:
        return _unitary_2q_sv(psi, u, qubits[0], qubits[1])
    raise ValueError("numba kernels support one- and two-qubit operators only")

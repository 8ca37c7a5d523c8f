"""Pure-numpy kernels: reshape the state into a rank-2n tensor and contract.

Axis layout for an n-qubit density matrix reshaped to (2,)*2n: axis n-1-q is
the row bit of qubit q and axis 2n-1-q its column bit (qubit 0 is the least
significant index bit throughout).
"""
from __future__ import annotations

import numpy as np


def _apply_rows(tensor: np.ndarray, m: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    """Contract matrix m (reshaped per-qubit) against the given tensor axes."""
    k = len(axes)
    mt = m.reshape((2,) * (2 * k))
    moved = np.tensordot(mt, tensor, axes=(tuple(range(k, 2 * k)), axes))
    return np.moveaxis(moved, tuple(range(k)), axes)


def apply_unitary_sv(psi: np.ndarray, u: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    n = psi.size.bit_length() - 1
    tensor = psi.reshape((2,) * n)
    axes = tuple(n - 1 - q for q in qubits)
    return _apply_rows(tensor, u, axes).reshape(psi.shape)


def apply_kraus_dm(rho: np.ndarray, kraus: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    """rho -> sum_k K rho K^dagger on the given qubits."""
    d = rho.shape[0]
    n = d.bit_length() - 1
    tensor = rho.reshape((2,) * (2 * n))
    row_axes = tuple(n - 1 - q for q in qubits)
    col_axes = tuple(2 * n - 1 - q for q in qubits)
    out = np.zeros_like(tensor)
    for km in kraus:
        stepped = _apply_rows(tensor, km, row_axes)
        out += _apply_rows(stepped, km.conj(), col_axes)
    return out.reshape(rho.shape)


def apply_unitary_dm(rho: np.ndarray, u: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    return apply_kraus_dm(rho, u[np.newaxis], qubits)

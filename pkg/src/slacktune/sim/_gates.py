"""Ideal gate matrices for the fixed gate set."""
from __future__ import annotations

import numpy as np

from ..ir import GateKind, Instruction

_SQRT_HALF = 1.0 / np.sqrt(2.0)

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT_HALF
S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)
SDG = S.conj().T
SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128)
SXDG = SX.conj().T

# CX in the |control, target> basis: index = 2*control_bit + target_bit.
CX = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=np.complex128)

_FIXED_1Q = {
    GateKind.X: X, GateKind.Y: Y, GateKind.Z: Z, GateKind.H: H,
    GateKind.S: S, GateKind.SDG: SDG, GateKind.SX: SX, GateKind.SXDG: SXDG,
}


def rz_matrix(theta: float) -> np.ndarray:
    half = theta / 2.0
    return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]],
                    dtype=np.complex128)


def gate_matrix(ins: Instruction) -> np.ndarray | None:
    """Unitary of one instruction, or None if it has no unitary action."""
    kind = ins.kind
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind]
    if kind is GateKind.RZ:
        return rz_matrix(ins.param)
    if kind is GateKind.CX:
        return CX
    return None  # Measure, Delay, Barrier


def depolarizing_kraus_1q(p: float) -> np.ndarray:
    """Uniform-Pauli depolarizing channel on one qubit, stacked Kraus form."""
    return np.stack([
        np.sqrt(1.0 - 3.0 * p / 4.0) * I2,
        np.sqrt(p / 4.0) * X,
        np.sqrt(p / 4.0) * Y,
        np.sqrt(p / 4.0) * Z,
    ])


def depolarizing_kraus_2q(p: float) -> np.ndarray:
    """Uniform-Pauli depolarizing channel on a qubit pair (16 Kraus terms)."""
    paulis = [I2, X, Y, Z]
    ks = []
    for i, a in enumerate(paulis):
        for j, b in enumerate(paulis):
            weight = 1.0 - 15.0 * p / 16.0 if i == j == 0 else p / 16.0
            ks.append(np.sqrt(weight) * np.kron(a, b))
    return np.stack(ks)

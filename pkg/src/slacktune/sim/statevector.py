"""Exact noiseless statevector evolution: the ideal-behaviour oracle."""
from __future__ import annotations

import numpy as np

from ..ir import Circuit, GateKind
from . import kernels
from ._gates import gate_matrix

STATEVECTOR_QUBIT_CAP = 14


class SimulationError(RuntimeError):
    pass


def run_statevector(c: Circuit, initial: int = 0) -> np.ndarray:
    """Amplitudes of the circuit applied to the |initial> basis state.

    Trailing measurements, delays, and barriers are ignored; index bit q of
    an amplitude position corresponds to qubit q.
    """
    if c.num_qubits > STATEVECTOR_QUBIT_CAP:
        raise SimulationError(
            f"{c.num_qubits} qubits exceeds the statevector cap ({STATEVECTOR_QUBIT_CAP})")
    dim = 1 << c.num_qubits
    if not 0 <= initial < dim:
        raise SimulationError(f"initial basis state {initial} out of range")
    psi = np.zeros(dim, dtype=np.complex128)
    psi[initial] = 1.0
    for ins in c.instructions:
        if ins.kind is GateKind.MEASURE:
            break
        u = gate_matrix(ins)
        if u is None:
            continue
        psi = kernels.apply_unitary_sv(psi, u, ins.qubits)
    return psi


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Brute-force unitary assembled column by column from basis-state runs."""
    dim = 1 << c.num_qubits
    u = np.empty((dim, dim), dtype=np.complex128)
    for col in range(dim):
        u[:, col] = run_statevector(c, initial=col)
    return u


def output_probabilities(c: Circuit) -> dict[str, float]:
    """Ideal measurement distribution over the circuit's measured qubits.

    Falls back to measuring every qubit when the circuit carries no explicit
    measurements.
    """
    psi = run_statevector(c)
    probs = np.abs(psi) ** 2
    measured = c.measured_qubits() or tuple(range(c.num_qubits))
    return marginal_probabilities(probs, c.num_qubits, measured)


def marginal_probabilities(probs: np.ndarray, num_qubits: int,
                           measured: tuple[int, ...]) -> dict[str, float]:
    """Marginalize a full diagonal onto the measured qubits (ascending order,
    lowest index rightmost in the bitstring)."""
    m = len(measured)
    out = np.zeros(1 << m)
    for idx, p in enumerate(probs):
        if p == 0.0:
            continue
        key = 0
        for pos_, q in enumerate(measured):
            if idx >> q & 1:
                key |= 1 << pos_
        out[key] += p
    return {format(k, f"0{m}b"): float(v) for k, v in enumerate(out) if v > 0.0}

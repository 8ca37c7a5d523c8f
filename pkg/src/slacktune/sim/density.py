"""Density-matrix backend: idle decoherence, gate depolarizing, readout.

The state evolves in event-time order.  Every instruction applies its ideal
unitary followed by a depolarizing channel; every idle gap on a qubit
applies the closed-form relaxation/dephasing/detuning channel for the gap
length.  Delays are pure idle time and barriers are never simulated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..device import DeviceModel, QubitParams
from ..ir import GateKind
from ..sched import TimedCircuit
from . import kernels
from ._gates import depolarizing_kraus_1q, depolarizing_kraus_2q, gate_matrix, rz_matrix
from .metrics import OutcomeDistribution
from .statevector import SimulationError, marginal_probabilities

DENSITY_QUBIT_CAP = 10
_TRACE_TOL = 1e-8


@dataclass(frozen=True)
class ChannelParams:
    """Closed-form idle channel for a gap of length t on one qubit.

    gamma is the amplitude-damping probability 1 - exp(-t/T1); lam the pure
    dephasing probability 1 - exp(-2 t/Tphi) with 1/Tphi = 1/T2 - 1/(2 T1),
    composed so the total off-diagonal decay over the gap is exactly
    exp(-t/T2); phase is the deterministic detuning rotation angle.
    """

    gamma: float
    lam: float
    phase: float


def idle_channel(t: int, qp: QubitParams, dt: float) -> ChannelParams:
    """Channel parameters for an idle gap of t dt units."""
    if t < 0:
        raise SimulationError(f"negative idle time {t}")
    seconds = t * dt
    gamma = 1.0 - np.exp(-seconds / qp.t1)
    inv_tphi = 1.0 / qp.t2 - 1.0 / (2.0 * qp.t1)
    lam = 1.0 - np.exp(-2.0 * seconds * inv_tphi)
    phase = 2.0 * np.pi * qp.detuning_hz * seconds
    return ChannelParams(gamma=float(gamma), lam=float(lam), phase=float(phase))


def idle_kraus(params: ChannelParams) -> np.ndarray:
    """Stacked Kraus operators: amplitude damping, then phase damping, then
    the coherent detuning rotation, composed into one channel."""
    g, lam = params.gamma, params.lam
    amp = [
        np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - g)]], dtype=np.complex128),
        np.array([[0.0, np.sqrt(g)], [0.0, 0.0]], dtype=np.complex128),
    ]
    deph = [
        np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - lam)]], dtype=np.complex128),
        np.array([[0.0, 0.0], [0.0, np.sqrt(lam)]], dtype=np.complex128),
    ]
    rot = rz_matrix(params.phase)
    ks = []
    for p in deph:
        for a in amp:
            k = rot @ p @ a
            if np.any(k):
                ks.append(k)
    return np.stack(ks)


def _check_trace(rho: np.ndarray, context: str) -> None:
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > _TRACE_TOL:
        raise SimulationError(
            f"trace drifted to {trace!r} after {context}; channel composition is broken")


def evolve_density(tc: TimedCircuit, d: DeviceModel) -> tuple[np.ndarray, tuple[int, ...]]:
    """Evolve the full density matrix; returns (rho, measured qubits)."""
    n = tc.num_qubits
    if n > DENSITY_QUBIT_CAP:
        raise SimulationError(
            f"{n} qubits exceeds the density-matrix cap ({DENSITY_QUBIT_CAP})")
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1.0

    depol1 = depolarizing_kraus_1q(d.depol_1q) if d.depol_1q > 0 else None
    depol2 = depolarizing_kraus_2q(d.depol_2q) if d.depol_2q > 0 else None

    last_end = [0] * n
    measured: list[int] = []
    order = sorted(range(len(tc.timed)), key=lambda i: (tc.timed[i].start, i))
    for i in order:
        ti = tc.timed[i]
        kind = ti.instr.kind
        if kind in (GateKind.DELAY, GateKind.BARRIER):
            continue
        for q in ti.instr.qubits:
            gap = ti.start - last_end[q]
            if gap > 0:
                rho = kernels.apply_kraus_dm(rho, idle_kraus(idle_channel(gap, d.qubit_params[q], d.dt)), (q,))
                _check_trace(rho, f"idle gap on qubit {q} before t={ti.start}")
        if kind is GateKind.MEASURE:
            measured.append(ti.instr.qubits[0])
            last_end[ti.instr.qubits[0]] = ti.end
            continue
        u = gate_matrix(ti.instr)
        rho = kernels.apply_unitary_dm(rho, u, ti.instr.qubits)
        if kind is GateKind.CX:
            if depol2 is not None:
                rho = kernels.apply_kraus_dm(rho, depol2, ti.instr.qubits)
        elif depol1 is not None:
            rho = kernels.apply_kraus_dm(rho, depol1, ti.instr.qubits)
        _check_trace(rho, f"{kind.value}@{ti.start}")
        for q in ti.instr.qubits:
            last_end[q] = ti.end
    return rho, tuple(sorted(measured))


def _apply_readout_confusion(probs: np.ndarray, measured: tuple[int, ...],
                             d: DeviceModel) -> np.ndarray:
    m = len(measured)
    tensor = probs.reshape((2,) * m)
    for pos, q in enumerate(measured):
        qp = d.qubit_params[q]
        if qp.readout_p01 == 0.0 and qp.readout_p10 == 0.0:
            continue
        confusion = np.array([
            [1.0 - qp.readout_p01, qp.readout_p10],
            [qp.readout_p01, 1.0 - qp.readout_p10],
        ])
        axis = m - 1 - pos  # bit `pos` of the flat index
        tensor = np.moveaxis(np.tensordot(confusion, tensor, axes=(1, axis)), 0, axis)
    return tensor.reshape(-1)


def measurement_probabilities(tc: TimedCircuit, d: DeviceModel) -> dict[str, float]:
    """Exact outcome distribution including readout confusion."""
    rho, measured = evolve_density(tc, d)
    if not measured:
        measured = tuple(range(tc.num_qubits))
    diag = np.clip(np.diag(rho).real, 0.0, None)
    marg = marginal_probabilities(diag, tc.num_qubits, measured)
    m = len(measured)
    vec = np.zeros(1 << m)
    for bits, p in marg.items():
        vec[int(bits, 2)] = p
    vec = _apply_readout_confusion(vec, measured, d)
    vec = np.clip(vec, 0.0, None)
    vec /= vec.sum()
    return {format(i, f"0{m}b"): float(p) for i, p in enumerate(vec) if p > 0.0}


def run_counts(tc: TimedCircuit, d: DeviceModel, shots: int, seed: int) -> OutcomeDistribution:
    """Noisy execution: evolve, confuse the diagonal, sample multinomially."""
    if shots <= 0:
        raise SimulationError("shots must be positive")
    dist = measurement_probabilities(tc, d)
    keys = sorted(dist)
    pvec = np.array([dist[k] for k in keys])
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, pvec)
    counts = {k: int(c) for k, c in zip(keys, draws) if c > 0}
    return OutcomeDistribution(counts=counts, shots=shots)


class DensityMatrixBackend:
    """Backend protocol implementation: run(timed circuit, shots, seed)."""

    def __init__(self, device: DeviceModel | None = None):
        self.device = device

    def run(self, tc: TimedCircuit, shots: int, seed: int) -> OutcomeDistribution:
        return run_counts(tc, self.device or tc.device, shots, seed)


def warmup() -> None:
    """Trigger kernel JIT compilation on a trivial workload."""
    from ..device import line_device
    from ..ir import Circuit, cx, h, measure
    from ..sched import Policy, schedule

    dev = line_device(2, t1=1.0, t2=1.0, detuning_hz=10.0,
                      depol_1q=1e-4, depol_2q=1e-3, readout_p01=0.01)
    circ = Circuit(2, (h(0), cx(0, 1), measure(0), measure(1)))
    run_counts(schedule(circ, dev, Policy.ALAP), dev, shots=16, seed=0)

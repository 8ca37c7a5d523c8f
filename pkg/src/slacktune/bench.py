"""Benchmark circuit generators with oracle-derived accepted outputs.

All generators emit line-topology circuits (CX only between adjacent
indices); non-adjacent interactions are realized with explicit adjacent
swap chains that are unwound immediately after each gate.  Accepted output
sets are always computed from the noiseless statevector oracle rather than
hard-coded, so they stay consistent with the constructions below.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .device import DeviceModel
from .ir import Circuit, Instruction, cx, delay, h, invert_circuit, measure, rz, x
from .sim.statevector import output_probabilities, run_statevector


class BenchmarkError(ValueError):
    pass


class BenchKind(Enum):
    GHZ_ECHO = "ghz"
    QFT = "qft"
    QAOA_RING = "qaoa"
    ADDER = "adder"
    REP_ENCODER = "repetition"
    HAHN_MICRO = "hahn"


DEFAULT_SIZES = {
    BenchKind.GHZ_ECHO: 5,
    BenchKind.QFT: 4,
    BenchKind.QAOA_RING: 4,
    BenchKind.ADDER: 6,
    BenchKind.REP_ENCODER: 5,
    BenchKind.HAHN_MICRO: 1,
}

_QFT_DEFAULT_TARGETS = {3: "101", 4: "1010", 5: "00101"}


@dataclass(frozen=True)
class BenchmarkSpec:
    kind: BenchKind
    num_qubits: int
    params: dict = field(default_factory=dict)
    accepted_outputs: frozenset[str] = frozenset()
    provenance: str = "derived"
    circuit: Circuit | None = None


class _LineBuilder:
    """Instruction emitter that routes distant CX pairs with swap chains."""

    def __init__(self, n: int):
        self.n = n
        self.instrs: list[Instruction] = []

    def add(self, *ins: Instruction) -> None:
        self.instrs.extend(ins)

    def _swap(self, a: int, b: int) -> None:
        self.add(cx(a, b), cx(b, a), cx(a, b))

    def _route(self, a: int, b: int) -> tuple[int, list[tuple[int, int]]]:
        """Swap b's state toward a; returns its new position and the trail."""
        trail = []
        while abs(a - b) > 1:
            step = b - 1 if b > a else b + 1
            self._swap(b, step)
            trail.append((b, step))
            b = step
        return b, trail

    def _unwind(self, trail: list[tuple[int, int]]) -> None:
        for b, step in reversed(trail):
            self._swap(step, b)

    def cx(self, control: int, target: int) -> None:
        if abs(control - target) == 1:
            self.add(cx(control, target))
            return
        target, trail = self._route(control, target)
        self.add(cx(control, target))
        self._unwind(trail)

    def cphase(self, theta: float, a: int, b: int) -> None:
        """Controlled phase diag(1,1,1,e^{i theta}) up to global phase."""
        b2, trail = self._route(a, b)
        self.add(rz(theta / 2, a), rz(theta / 2, b2), cx(a, b2),
                 rz(-theta / 2, b2), cx(a, b2))
        self._unwind(trail)

    def zz_rotation(self, theta: float, a: int, b: int) -> None:
        """exp(-i theta/2 Z.Z) up to global phase."""
        b2, trail = self._route(a, b)
        self.add(cx(a, b2), rz(theta, b2), cx(a, b2))
        self._unwind(trail)

    def toffoli(self, c1: int, c2: int, t: int) -> None:
        quarter = math.pi / 4
        b2, trail = self._route(c1, c2)
        c2 = b2
        # standard 6-CX decomposition with T = rz(pi/4) up to global phase
        self.add(h(t))
        self.cx(c2, t)
        self.add(rz(-quarter, t))
        self.cx(c1, t)
        self.add(rz(quarter, t))
        self.cx(c2, t)
        self.add(rz(-quarter, t))
        self.cx(c1, t)
        self.add(rz(quarter, c2), rz(quarter, t), h(t))
        self.cx(c1, c2)
        self.add(rz(quarter, c1), rz(-quarter, c2))
        self.cx(c1, c2)
        self._unwind(trail)

    def circuit(self, measured: bool = True) -> Circuit:
        instrs = list(self.instrs)
        if measured:
            instrs.extend(measure(q) for q in range(self.n))
        return Circuit(self.n, tuple(instrs))


def _ghz_echo(n: int) -> Circuit:
    b = _LineBuilder(n)
    b.add(h(0))
    for q in range(n - 1):
        b.add(cx(q, q + 1))
    b.add(*(x(q) for q in range(n)))
    for q in range(n - 2, -1, -1):
        b.add(cx(q, q + 1))
    b.add(h(0))
    return b.circuit()


def _qft_entangler(n: int) -> Circuit:
    """Pipelined nearest-neighbour QFT body.

    Each logical qubit is Hadamard-rotated at wire 0 and then sweeps right,
    applying its controlled phases to neighbours and swapping past them, so
    every interaction is adjacent and the wire order ends up reversed (the
    usual bit-reversal comes free).  Later stages start while earlier ones
    are still sweeping, which is what opens mid-circuit slack.
    """
    b = _LineBuilder(n)
    pos = list(range(n))  # wire currently holding each logical qubit
    for j in range(n):
        b.add(h(pos[j]))
        for k in range(j + 1, n):
            wj, wk = pos[j], pos[k]
            b.cphase(math.pi / (1 << (k - j)), wj, wk)
            b._swap(wj, wk)
            pos[j], pos[k] = wk, wj
    return b.circuit(measured=False)


def _qft(n: int, target: str) -> Circuit:
    """Fourier-basis preparation followed by a nearest-neighbour QFT body.

    The product-state preparation is chosen so the body maps it exactly to
    the target basis state, giving a deterministic single-bitstring output.
    """
    if len(target) != n or set(target) - {"0", "1"}:
        raise BenchmarkError(f"target must be an {n}-bit string, got {target!r}")
    entangler = _qft_entangler(n)
    target_index = int(target, 2)
    amps = run_statevector(invert_circuit(entangler), initial=target_index)
    norm = 1.0 / math.sqrt(1 << n)
    if np.max(np.abs(np.abs(amps) - norm)) > 1e-9:
        raise BenchmarkError("entangler inverse did not produce a Fourier product state")
    prep: list[Instruction] = []
    for q in range(n):
        angle = cmath.phase(amps[1 << q] / amps[0])
        prep.append(h(q))
        if abs(angle) > 1e-12:
            prep.append(rz(angle, q))
    instrs = tuple(prep) + entangler.instructions + tuple(measure(q) for q in range(n))
    return Circuit(n, instrs)


def _qaoa_ring(n: int, gamma: float, beta: float) -> Circuit:
    b = _LineBuilder(n)
    b.add(*(h(q) for q in range(n)))
    for q in range(n - 1):
        b.zz_rotation(-gamma, q, q + 1)
    b.zz_rotation(-gamma, n - 1, 0)
    for q in range(n):
        b.add(h(q), rz(2 * beta, q), h(q))
    return b.circuit()


def _adder() -> Circuit:
    """Two-bit ripple-carry adder (majority/unmajority chain), a=1, b=0.

    Qubit layout: [carry-in, b0, a0, b1, a1, carry-out]; the sum lands in
    the b register.
    """
    b = _LineBuilder(6)
    cin, b0, a0, b1, a1, cout = range(6)
    b.add(x(a0))  # a = 01, b = 00

    def maj(c_bit: int, b_bit: int, a_bit: int) -> None:
        b.cx(a_bit, b_bit)
        b.cx(a_bit, c_bit)
        b.toffoli(c_bit, b_bit, a_bit)

    def uma(c_bit: int, b_bit: int, a_bit: int) -> None:
        b.toffoli(c_bit, b_bit, a_bit)
        b.cx(a_bit, c_bit)
        b.cx(c_bit, b_bit)

    maj(cin, b0, a0)
    maj(a0, b1, a1)
    b.cx(a1, cout)
    uma(a0, b1, a1)
    uma(cin, b0, a0)
    return b.circuit()


def _rep_encoder(n: int) -> Circuit:
    b = _LineBuilder(n)
    b.add(h(0))
    for q in range(n - 1):
        b.add(cx(q, q + 1))
    return b.circuit()


def _accepted_deterministic(c: Circuit) -> frozenset[str]:
    probs = output_probabilities(c)
    best = max(probs, key=probs.get)
    if probs[best] < 1.0 - 1e-9:
        raise BenchmarkError(
            f"expected a deterministic output, best bitstring has p={probs[best]}")
    return frozenset({best})


def _accepted_support(c: Circuit, threshold: float = 1e-6) -> frozenset[str]:
    probs = output_probabilities(c)
    return frozenset(bits for bits, p in probs.items() if p > threshold)


def _accepted_argmax_ties(c: Circuit) -> frozenset[str]:
    probs = output_probabilities(c)
    top = max(probs.values())
    return frozenset(bits for bits, p in probs.items() if p >= top * (1.0 - 1e-9))


def make_benchmark(kind: BenchKind, n: int | None = None,
                   params: dict | None = None) -> tuple[Circuit, frozenset[str]]:
    """Generate a benchmark circuit and its derived accepted-output set."""
    params = dict(params or {})
    if n is None:
        n = DEFAULT_SIZES[kind]

    if kind is BenchKind.GHZ_ECHO:
        if not 2 <= n <= 7:
            raise BenchmarkError(f"ghz supports 2-7 qubits, got {n}")
        c = _ghz_echo(n)
        return c, _accepted_deterministic(c)
    if kind is BenchKind.QFT:
        if not 3 <= n <= 5:
            raise BenchmarkError(f"qft supports 3-5 qubits, got {n}")
        target = params.get("target", _QFT_DEFAULT_TARGETS[n])
        c = _qft(n, target)
        return c, _accepted_deterministic(c)
    if kind is BenchKind.QAOA_RING:
        if n not in (4, 6):
            raise BenchmarkError(f"qaoa ring supports 4 or 6 qubits, got {n}")
        gamma = params.get("gamma", math.pi / 4)
        beta = params.get("beta", math.pi / 8)
        c = _qaoa_ring(n, gamma, beta)
        return c, _accepted_argmax_ties(c)
    if kind is BenchKind.ADDER:
        if n != 6:
            raise BenchmarkError(f"the ripple-carry adder uses exactly 6 qubits, got {n}")
        c = _adder()
        return c, _accepted_deterministic(c)
    if kind is BenchKind.REP_ENCODER:
        if n != 5:
            raise BenchmarkError(f"the repetition encoder targets exactly 5 qubits, got {n}")
        c = _rep_encoder(n)
        return c, _accepted_support(c)
    if kind is BenchKind.HAHN_MICRO:
        if n != 1:
            raise BenchmarkError("the echo micro-benchmark is single-qubit")
        split = int(params.get("split", 0))
        window_len = int(params.get("window_len", 799))
        t_id = int(params.get("t_id", 160))
        c = _hahn_circuit(split, window_len - split, t_id,
                          prep_one=bool(params.get("prep_one", False)),
                          xbasis=bool(params.get("xbasis", True)))
        return c, _accepted_deterministic(c)
    raise BenchmarkError(f"unknown benchmark kind {kind}")


def _hahn_circuit(a: int, b: int, t_id: int, *, prep_one: bool, xbasis: bool) -> Circuit:
    instrs: list[Instruction] = []
    if prep_one:
        instrs.append(x(0))
    if xbasis:
        instrs.append(h(0))
    if a > 0:
        instrs.append(delay(a * t_id, 0))
    instrs.append(x(0))
    if b > 0:
        instrs.append(delay(b * t_id, 0))
    if xbasis:
        instrs.append(h(0))
    instrs.append(measure(0))
    return Circuit(1, tuple(instrs))


def hahn_micro(window_len: int, prep_one: bool, xbasis: bool, d: DeviceModel,
               splits: list[int] | None = None) -> list[tuple[int, Circuit]]:
    """Fixed-duration echo sweep: one circuit per split of the idle window.

    The window is ``window_len`` single-gate-length idle slots distributed
    around a tunable X; the X-basis variants wrap the window in Hadamards to
    expose phase decay, the Z-basis variants track populations directly.
    All family members share the same total duration.
    """
    if window_len < 1:
        raise BenchmarkError("window_len must be at least 1")
    t_id = d.duration_1q("x")
    if t_id is None or t_id < 1:
        raise BenchmarkError("device needs a positive single-qubit duration")
    if splits is None:
        splits = list(range(window_len + 1))
    out = []
    for a in splits:
        if not 0 <= a <= window_len:
            raise BenchmarkError(f"split {a} outside [0, {window_len}]")
        out.append((a, _hahn_circuit(a, window_len - a, t_id,
                                     prep_one=prep_one, xbasis=xbasis)))
    return out


def make_spec(kind: BenchKind, n: int | None = None,
              params: dict | None = None) -> BenchmarkSpec:
    circuit, accepted = make_benchmark(kind, n, params)
    return BenchmarkSpec(kind=kind, num_qubits=circuit.num_qubits,
                         params=dict(params or {}), accepted_outputs=accepted,
                         provenance="derived", circuit=circuit)

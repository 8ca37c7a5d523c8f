"""Gate-level circuit representation, inversion, and CX-depth.

The gate set is closed under inversion without synthesis: X/Y/Z/H/CX/Delay
are self-inverse, S<->Sdg, SX<->SXdg, RZ(theta)<->RZ(-theta).  Delay is a
fixed-duration do-nothing instruction; Barrier is a zero-duration scheduling
fence that is never simulated.  All types are immutable after construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .device import DeviceModel


class GateKind(Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    SX = "sx"
    SXDG = "sxdg"
    RZ = "rz"
    CX = "cx"
    MEASURE = "measure"
    DELAY = "delay"
    BARRIER = "barrier"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CX else 1

    @property
    def is_single_qubit_gate(self) -> bool:
        """True for unitary one-qubit gates (not Delay/Barrier/Measure)."""
        return self in _SINGLE_QUBIT_GATES


_SINGLE_QUBIT_GATES = frozenset({
    GateKind.X, GateKind.Y, GateKind.Z, GateKind.H,
    GateKind.S, GateKind.SDG, GateKind.SX, GateKind.SXDG, GateKind.RZ,
})

_INVERSE = {
    GateKind.X: GateKind.X,
    GateKind.Y: GateKind.Y,
    GateKind.Z: GateKind.Z,
    GateKind.H: GateKind.H,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.SX: GateKind.SXDG,
    GateKind.SXDG: GateKind.SX,
    GateKind.RZ: GateKind.RZ,       # theta negated
    GateKind.CX: GateKind.CX,
    GateKind.DELAY: GateKind.DELAY,
    GateKind.BARRIER: GateKind.BARRIER,
}


class CircuitError(ValueError):
    """Raised for structurally invalid circuits or instructions."""


@dataclass(frozen=True)
class Instruction:
    """One gate application: a kind, its qubits, and an optional parameter.

    ``param`` is the rotation angle in radians for RZ and the duration in dt
    units for Delay; it is unused for every other kind.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    param: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise CircuitError(
                f"{self.kind.value} expects {self.kind.arity} qubit(s), got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"duplicate qubits in {self.kind.value} {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {self.qubits}")
        if self.kind is GateKind.RZ and not math.isfinite(self.param):
            raise CircuitError(f"rz angle must be finite, got {self.param}")
        if self.kind is GateKind.DELAY:
            if self.param < 0 or self.param != int(self.param):
                raise CircuitError(f"delay duration must be a non-negative integer, got {self.param}")

    def inverse(self) -> Instruction:
        if self.kind is GateKind.MEASURE:
            raise CircuitError("measurement is not reversible")
        kind = _INVERSE[self.kind]
        param = -self.param if self.kind is GateKind.RZ else self.param
        return Instruction(kind, self.qubits, param)


# Terse factories; bench and tests build circuits from these.
def x(q: int) -> Instruction: return Instruction(GateKind.X, (q,))
def y(q: int) -> Instruction: return Instruction(GateKind.Y, (q,))
def z(q: int) -> Instruction: return Instruction(GateKind.Z, (q,))
def h(q: int) -> Instruction: return Instruction(GateKind.H, (q,))
def s(q: int) -> Instruction: return Instruction(GateKind.S, (q,))
def sdg(q: int) -> Instruction: return Instruction(GateKind.SDG, (q,))
def sx(q: int) -> Instruction: return Instruction(GateKind.SX, (q,))
def sxdg(q: int) -> Instruction: return Instruction(GateKind.SXDG, (q,))
def rz(theta: float, q: int) -> Instruction: return Instruction(GateKind.RZ, (q,), theta)
def cx(control: int, target: int) -> Instruction: return Instruction(GateKind.CX, (control, target))
def measure(q: int) -> Instruction: return Instruction(GateKind.MEASURE, (q,))
def delay(duration: int, q: int) -> Instruction: return Instruction(GateKind.DELAY, (q,), duration)
def barrier(q: int) -> Instruction: return Instruction(GateKind.BARRIER, (q,))


@dataclass(frozen=True)
class Circuit:
    """An ordered instruction list over ``num_qubits`` indexed qubits.

    Measure instructions, if present, must form a trailing suffix (no
    mid-circuit measurement).
    """

    num_qubits: int
    instructions: tuple[Instruction, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if self.num_qubits < 0:
            raise CircuitError("num_qubits must be non-negative")
        seen_measure = False
        for ins in self.instructions:
            if any(q >= self.num_qubits for q in ins.qubits):
                raise CircuitError(
                    f"instruction {ins.kind.value} {ins.qubits} exceeds {self.num_qubits} qubits"
                )
            if ins.kind is GateKind.MEASURE:
                seen_measure = True
            elif seen_measure:
                raise CircuitError("measurements must form a trailing suffix")

    @property
    def has_measurements(self) -> bool:
        return any(ins.kind is GateKind.MEASURE for ins in self.instructions)

    def measured_qubits(self) -> tuple[int, ...]:
        return tuple(sorted(ins.qubits[0] for ins in self.instructions
                            if ins.kind is GateKind.MEASURE))

    def without_measurements(self) -> Circuit:
        return Circuit(self.num_qubits, tuple(
            ins for ins in self.instructions if ins.kind is not GateKind.MEASURE))

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise CircuitError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.instructions + other.instructions)


def invert_circuit(c: Circuit) -> Circuit:
    """Reverse the instruction order and replace every kind by its inverse.

    The composition of a measure-free circuit with its inversion is the
    identity up to global phase.  Rejects circuits containing Measure.
    """
    if c.has_measurements:
        raise CircuitError("cannot invert a circuit containing measurements")
    return Circuit(c.num_qubits, tuple(ins.inverse() for ins in reversed(c.instructions)))


def cx_depth(c: Circuit) -> int:
    """Longest-path weight through the dependency DAG, counting only CX.

    Instructions sharing a qubit are ordered by program position; CX nodes
    weigh 1 and everything else 0, so single-qubit gates and delays never
    change the result.
    """
    depth_at = [0] * c.num_qubits
    for ins in c.instructions:
        if not ins.qubits:
            continue
        base = max(depth_at[q] for q in ins.qubits)
        level = base + (1 if ins.kind is GateKind.CX else 0)
        for q in ins.qubits:
            depth_at[q] = level
    return max(depth_at, default=0)


@dataclass(frozen=True)
class Violation:
    """One validation failure: which instruction (or None) and why."""

    code: str
    message: str
    index: int | None = None

    def __str__(self) -> str:
        where = f" at instruction {self.index}" if self.index is not None else ""
        return f"{self.code}{where}: {self.message}"


def validate(c: Circuit, d: DeviceModel) -> list[Violation]:
    """Check a circuit against a device; returns all violations (empty = ok).

    Checks qubit range, CX coupling conformance, and that the device defines
    a duration for every instruction kind present.
    """
    violations: list[Violation] = []
    for i, ins in enumerate(c.instructions):
        bad = [q for q in ins.qubits if q >= d.num_qubits]
        if bad:
            violations.append(Violation(
                "qubit-range", f"qubit index out of range: {bad} on a "
                f"{d.num_qubits}-qubit device", i))
            continue
        if ins.kind is GateKind.CX:
            a, b = ins.qubits
            if not d.is_coupled(a, b):
                violations.append(Violation(
                    "uncoupled-pair", f"uncoupled pair ({a}, {b})", i))
            elif d.duration_cx(a, b) is None:
                violations.append(Violation(
                    "missing-duration", f"no cx duration for edge ({a}, {b})", i))
        elif ins.kind is GateKind.MEASURE:
            if d.duration_measure() is None:
                violations.append(Violation(
                    "missing-duration", "no measure duration configured", i))
        elif ins.kind.is_single_qubit_gate:
            if d.duration_1q(ins.kind.value) is None:
                violations.append(Violation(
                    "missing-duration", f"no duration for {ins.kind.value}", i))
        # Delay carries its own duration; Barrier is always zero.
    return violations


def instruction_duration(ins: Instruction, d: DeviceModel) -> int:
    """Duration of one instruction in dt units on the given device."""
    if ins.kind is GateKind.DELAY:
        return int(ins.param)
    if ins.kind is GateKind.BARRIER:
        return 0
    if ins.kind is GateKind.CX:
        dur = d.duration_cx(*ins.qubits)
    elif ins.kind is GateKind.MEASURE:
        dur = d.duration_measure()
    else:
        dur = d.duration_1q(ins.kind.value)
    if dur is None:
        raise CircuitError(f"device defines no duration for {ins.kind.value}")
    return dur

"""Slice+inverse tuning circuits and the CX-depth eligibility criteria.

The slice of a window is the subcircuit whose scheduled end times fall at or
before the window's right edge: exactly the dependency cone of everything
that finishes by then.  Its inverse is appended as a time mirror around the
window edge, so the tuned gate block sits at the reflected offset inside the
mirrored window and both halves see matched idle structure.  Ideally the
composite returns every qubit to |0>, which is the tuning ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .device import DeviceModel
from .ir import Circuit, GateKind, Instruction, cx_depth, instruction_duration
from .sched import (
    SchedulingError,
    SlackWindow,
    TimedCircuit,
    TimedInstruction,
    check_no_overlap,
)


class SliceError(ValueError):
    pass


@dataclass(frozen=True)
class SICircuit:
    """A slice+inverse calibration circuit for one slack window."""

    window_id: int
    forward: TimedCircuit
    inverse: TimedCircuit
    combined: TimedCircuit          # forward + inverse + trailing measures
    tunable_offset_range: tuple[int, int]
    ground_truth: str
    slice_circuit: Circuit
    measured_qubits: tuple[int, ...]


def slice_indices(tc: TimedCircuit, w: SlackWindow) -> list[int]:
    """Indices of instructions ending by the window's right edge (no Measure)."""
    return [
        i for i, ti in enumerate(tc.timed)
        if ti.end <= w.end and ti.instr.kind is not GateKind.MEASURE
    ]


def build_slice(c: Circuit, tc: TimedCircuit, w: SlackWindow) -> Circuit:
    """Subcircuit feeding the window: everything scheduled to end by its edge.

    ``tc`` must be the schedule of ``c`` (instruction lists in step), and the
    original qubit indexing is preserved.
    """
    if len(tc.timed) != len(c.instructions) or any(
            ti.instr is not ins and ti.instr != ins
            for ti, ins in zip(tc.timed, c.instructions)):
        raise SliceError("timed circuit does not correspond to the given circuit")
    return Circuit(c.num_qubits, tuple(tc.timed[i].instr for i in slice_indices(tc, w)))


def build_si_circuit(slice_circuit: Circuit, tc: TimedCircuit, w: SlackWindow,
                     offset: int, d: DeviceModel) -> SICircuit:
    """Assemble the slice+inverse circuit with the gate block at ``offset``.

    The forward half keeps the baseline schedule's times (block moved to
    window start + offset); the inverse half mirrors it around the window
    edge, which lands the inverted block at offset
    (window duration - offset - block duration) inside the mirrored window.
    Measurements on every slice qubit close the circuit, with the all-zeros
    string as ground truth.
    """
    if offset < 0 or offset > w.max_offset:
        raise SliceError(
            f"offset {offset} outside [0, {w.max_offset}] for window {w.window_id}")
    indices = slice_indices(tc, w)
    expected = tuple(tc.timed[i].instr for i in indices)
    if expected != slice_circuit.instructions:
        raise SliceError("slice circuit does not match the window's dependency cone")

    block = set(w.block)
    shift = (w.start + offset) - w.gate_block[0].start if w.gate_block else 0
    edge = w.end

    forward: list[TimedInstruction] = []
    for i in indices:
        ti = tc.timed[i]
        if (shift != 0 and ti.instr.kind is GateKind.DELAY
                and ti.instr.qubits[0] == w.qubit
                and ti.start >= w.start and ti.end <= w.end):
            continue  # idle markers in a retimed window stay idle as a gap
        if i in block:
            ti = replace(ti, start=ti.start + shift)
        forward.append(ti)

    inverse: list[TimedInstruction] = []
    for ti in reversed(forward):
        inv = ti.instr.inverse()
        inverse.append(TimedInstruction(inv, 2 * edge - ti.end, instruction_duration(inv, d)))
    inverse.sort(key=lambda ti: ti.start)

    active = sorted({q for ins in slice_circuit.instructions for q in ins.qubits})
    if not active:
        raise SliceError("cannot build a slice+inverse circuit from an empty slice")
    measure_start = max((ti.end for ti in inverse), default=edge)
    measure_dur = d.duration_measure()
    if measure_dur is None:
        raise SliceError("device defines no measure duration")
    measures = [
        TimedInstruction(Instruction(GateKind.MEASURE, (q,)), measure_start, measure_dur)
        for q in active
    ]

    fwd_tc = TimedCircuit(d, slice_circuit.num_qubits, tuple(forward), edge, policy="si-forward")
    inv_tc = TimedCircuit(d, slice_circuit.num_qubits, tuple(inverse),
                          measure_start, policy="si-inverse")
    combined = TimedCircuit(
        d, slice_circuit.num_qubits,
        tuple(forward) + tuple(inverse) + tuple(measures),
        measure_start + measure_dur, policy="si")
    try:
        check_no_overlap(combined)
    except SchedulingError as exc:
        raise SliceError(f"mirrored inverse collides (asymmetric durations?): {exc}") from exc

    return SICircuit(
        window_id=w.window_id,
        forward=fwd_tc,
        inverse=inv_tc,
        combined=combined,
        tunable_offset_range=(0, w.max_offset),
        ground_truth="0" * len(active),
        slice_circuit=slice_circuit,
        measured_qubits=tuple(active),
    )


def passes_depth_criteria(si: SICircuit, original: Circuit) -> bool:
    """True when the slice+inverse CX depth stays within the original's."""
    fwd = si.forward.to_circuit()
    inv = si.inverse.to_circuit()
    return cx_depth(fwd + inv) <= cx_depth(original)


def make_si_builder(c: Circuit, tc: TimedCircuit, w: SlackWindow, d: DeviceModel):
    """Offset -> SICircuit closure for one window, as the tuner consumes it."""
    slice_circuit = build_slice(c, tc, w)

    def builder(offset: int) -> SICircuit:
        return build_si_circuit(slice_circuit, tc, w, offset, d)

    return builder

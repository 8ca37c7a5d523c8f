"""Start-time assignment (ASAP/ALAP/Middle) and slack-window analysis.

A TimedCircuit assigns every instruction a start on the device's dt grid.
ALAP holds the makespan at the ASAP optimum, so all three policies produce
the same total duration and differ only in placement.

A slack window is a maximal idle span on one qubit between two anchoring
instructions (CX, Measure, or Barrier), counted only after the qubit's
first real gate.  The single-qubit gates inside a window form its gate
block, which later stages move rigidly as one unit.  Explicit Delay
instructions are idle time: they pin timing during scheduling but never
join a gate block and never anchor a window.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .device import DeviceModel
from .ir import Circuit, GateKind, Instruction, instruction_duration, validate


class SchedulingError(ValueError):
    pass


class Policy(Enum):
    ASAP = "asap"
    ALAP = "alap"
    MIDDLE = "middle"


_ANCHOR_KINDS = frozenset({GateKind.CX, GateKind.MEASURE, GateKind.BARRIER})


@dataclass(frozen=True)
class TimedInstruction:
    instr: Instruction
    start: int
    duration: int

    @property
    def end(self) -> int:
        return self.start + self.duration


@dataclass(frozen=True)
class TimedCircuit:
    device: DeviceModel
    num_qubits: int
    timed: tuple[TimedInstruction, ...]
    total_duration: int
    policy: str = "alap"

    def on_qubit(self, q: int) -> list[tuple[int, TimedInstruction]]:
        """(index, timed instruction) pairs touching qubit q, in time order."""
        items = [(i, ti) for i, ti in enumerate(self.timed) if q in ti.instr.qubits]
        items.sort(key=lambda item: (item[1].start, item[0]))
        return items

    def to_circuit(self) -> Circuit:
        """Instruction sequence in time order, without materialized idle.

        Measurements sort after everything else: they are trailing per qubit,
        so this preserves all dependencies while keeping the suffix invariant.
        """
        order = sorted(range(len(self.timed)),
                       key=lambda i: (self.timed[i].instr.kind is GateKind.MEASURE,
                                      self.timed[i].start, i))
        return Circuit(self.num_qubits, tuple(self.timed[i].instr for i in order))


@dataclass(frozen=True)
class SlackWindow:
    """One idle span plus the reschedulable gate block it contains.

    ``block`` holds indices into the owning TimedCircuit; ``gate_block`` the
    corresponding timed instructions.  ``block_duration`` is the rigid span
    the block occupies, so valid block offsets within the window are
    [0, duration - block_duration].
    """

    window_id: int
    qubit: int
    start: int
    duration: int
    block: tuple[int, ...]
    gate_block: tuple[TimedInstruction, ...]
    left_anchor: int | None
    right_anchor: int | None

    @property
    def end(self) -> int:
        return self.start + self.duration

    @property
    def block_duration(self) -> int:
        if not self.gate_block:
            return 0
        return self.gate_block[-1].end - self.gate_block[0].start

    @property
    def block_offset(self) -> int:
        """Current offset of the block from the window start."""
        if not self.gate_block:
            return 0
        return self.gate_block[0].start - self.start

    @property
    def max_offset(self) -> int:
        return self.duration - self.block_duration

    @property
    def tunable(self) -> bool:
        return bool(self.gate_block)


def assign_start_times(c: Circuit, d: DeviceModel, policy: Policy) -> tuple[list[int], int]:
    """Start time per instruction (program order) and the makespan.

    ASAP takes the earliest feasible start in forward order; ALAP the latest
    in reverse order with the makespan pinned to the ASAP value.  MIDDLE is
    resolved at the TimedCircuit level, not here.
    """
    durations = [instruction_duration(ins, d) for ins in c.instructions]
    avail = [0] * c.num_qubits
    asap = []
    for ins, dur in zip(c.instructions, durations):
        start = max((avail[q] for q in ins.qubits), default=0)
        asap.append(start)
        for q in ins.qubits:
            avail[q] = start + dur
    makespan = max((s + dur for s, dur in zip(asap, durations)), default=0)
    if policy is Policy.ASAP:
        return asap, makespan
    deadline = [makespan] * c.num_qubits
    alap = [0] * len(c.instructions)
    for i in range(len(c.instructions) - 1, -1, -1):
        ins, dur = c.instructions[i], durations[i]
        end = min((deadline[q] for q in ins.qubits), default=makespan)
        alap[i] = end - dur
        for q in ins.qubits:
            deadline[q] = alap[i]
    return alap, makespan


def schedule(c: Circuit, d: DeviceModel, policy: Policy = Policy.ALAP) -> TimedCircuit:
    """Assign start times under the given policy.

    Middle first schedules ALAP, then recentres each window's gate block at
    the window midpoint.  All policies share the ASAP makespan.
    """
    violations = validate(c, d)
    if violations:
        raise SchedulingError(
            "circuit does not fit device: " + "; ".join(str(v) for v in violations))
    base_policy = Policy.ALAP if policy is Policy.MIDDLE else policy
    starts, makespan = assign_start_times(c, d, base_policy)
    timed = tuple(
        TimedInstruction(ins, start, instruction_duration(ins, d))
        for ins, start in zip(c.instructions, starts)
    )
    tc = TimedCircuit(d, c.num_qubits, timed, makespan, policy=policy.value)
    if policy is Policy.MIDDLE:
        moves = []
        for w in find_slack_windows(tc):
            if w.tunable:
                moves.append((w, (w.duration - w.block_duration) // 2))
        tc = with_moved_blocks(tc, moves)
        tc = replace(tc, policy=policy.value)
    return tc


def total_duration(tc: TimedCircuit) -> int:
    return tc.total_duration


def find_slack_windows(tc: TimedCircuit) -> list[SlackWindow]:
    """All maximal idle windows, ordered by qubit then start.

    A window spans anchor to anchor (the left edge may be the qubit's first
    gate) and must contain at least one dt of true idle beyond its gate
    block.  Time before a qubit's first gate is never slack, and idle after
    the last anchoring instruction has no right boundary, so neither is
    reported.
    """
    windows: list[SlackWindow] = []
    for q in range(tc.num_qubits):
        items = tc.on_qubit(q)
        real = [(i, ti) for i, ti in items if ti.instr.kind is not GateKind.DELAY]
        if not real:
            continue
        first_idx, first_ti = real[0]
        anchors = [(i, ti) for i, ti in real if ti.instr.kind in _ANCHOR_KINDS]

        spans: list[tuple[int, int, int | None, int | None]] = []
        if anchors and anchors[0][0] != first_idx:
            spans.append((first_ti.end, anchors[0][1].start, first_idx, anchors[0][0]))
        for (li, lti), (ri, rti) in zip(anchors, anchors[1:]):
            spans.append((lti.end, rti.start, li, ri))

        for span_start, span_end, left, right in spans:
            if span_end <= span_start:
                continue
            block = [
                (i, ti) for i, ti in items
                if ti.instr.kind.is_single_qubit_gate
                and ti.start >= span_start and ti.end <= span_end
                and (ti.start < span_end or (ti.duration == 0 and right is not None and i < right))
                and i != first_idx
            ]
            if block:
                block_span = block[-1][1].end - block[0][1].start
            else:
                block_span = 0
            if (span_end - span_start) <= block_span:
                continue  # fully busy: nothing idle to exploit
            windows.append(SlackWindow(
                window_id=-1,
                qubit=q,
                start=span_start,
                duration=span_end - span_start,
                block=tuple(i for i, _ in block),
                gate_block=tuple(ti for _, ti in block),
                left_anchor=left,
                right_anchor=right,
            ))
    windows.sort(key=lambda w: (w.qubit, w.start))
    return [replace(w, window_id=i) for i, w in enumerate(windows)]


def with_moved_blocks(tc: TimedCircuit,
                      moves: list[tuple[SlackWindow, int]]) -> TimedCircuit:
    """Place each window's gate block at the given offset inside its window.

    Anchors and durations never change, so the total duration is preserved.
    Explicit delays inside a moved window are dropped (their idle time is
    already represented by the gap they leave behind).
    """
    new_starts: dict[int, int] = {}
    drop: set[int] = set()
    for w, offset in moves:
        if not w.gate_block:
            continue
        if offset < 0 or offset > w.max_offset:
            raise SchedulingError(
                f"offset {offset} outside [0, {w.max_offset}] for window {w.window_id}")
        shift = (w.start + offset) - w.gate_block[0].start
        if shift == 0:
            continue
        for idx in w.block:
            new_starts[idx] = tc.timed[idx].start + shift
        for idx, ti in tc.on_qubit(w.qubit):
            if (ti.instr.kind is GateKind.DELAY
                    and ti.start >= w.start and ti.end <= w.end):
                drop.add(idx)
    if not new_starts:
        return tc
    timed = tuple(
        replace(ti, start=new_starts.get(i, ti.start))
        for i, ti in enumerate(tc.timed)
        if i not in drop
    )
    out = TimedCircuit(tc.device, tc.num_qubits, timed, tc.total_duration, policy=tc.policy)
    check_no_overlap(out)
    return out


def check_no_overlap(tc: TimedCircuit) -> None:
    """Assert no two instructions overlap in time on a shared qubit."""
    for q in range(tc.num_qubits):
        prev_end = None
        prev = None
        for _, ti in tc.on_qubit(q):
            if prev_end is not None and ti.start < prev_end:
                raise SchedulingError(
                    f"overlap on qubit {q}: {prev.instr.kind.value}@{prev.start} and "
                    f"{ti.instr.kind.value}@{ti.start}")
            prev_end, prev = ti.end, ti


def timed_to_circuit(tc: TimedCircuit) -> Circuit:
    """Materialize a timed circuit as a gate list with explicit delays.

    Every idle gap (including the span before a qubit's first instruction)
    becomes a Delay, so rescheduling the result ASAP reproduces the original
    start times exactly.
    """
    events: list[tuple[bool, int, float, Instruction]] = []
    for i, ti in enumerate(tc.timed):
        events.append((ti.instr.kind is GateKind.MEASURE, ti.start, float(i), ti.instr))
    for q in range(tc.num_qubits):
        prev_end = 0
        for i, ti in tc.on_qubit(q):
            gap = ti.start - prev_end
            if gap > 0:
                events.append((False, prev_end, i - 0.5,
                               Instruction(GateKind.DELAY, (q,), gap)))
            prev_end = ti.end
    events.sort(key=lambda e: (e[0], e[1], e[2]))
    return Circuit(tc.num_qubits, tuple(ins for _, _, _, ins in events))


def schedule_to_dict(tc: TimedCircuit) -> dict:
    """JSON-ready form of a timed circuit (the CLI's schedule format)."""
    return {
        "device": tc.device.name,
        "policy": tc.policy,
        "num_qubits": tc.num_qubits,
        "total_duration": tc.total_duration,
        "instructions": [
            {
                "kind": ti.instr.kind.value,
                "qubits": list(ti.instr.qubits),
                "param": ti.instr.param,
                "start": ti.start,
                "duration": ti.duration,
            }
            for ti in tc.timed
        ],
    }


def schedule_from_dict(doc: dict, device: DeviceModel) -> TimedCircuit:
    timed = tuple(
        TimedInstruction(
            Instruction(GateKind(item["kind"]), tuple(item["qubits"]), item.get("param", 0.0)),
            int(item["start"]),
            int(item["duration"]),
        )
        for item in doc["instructions"]
    )
    tc = TimedCircuit(
        device,
        int(doc["num_qubits"]),
        timed,
        int(doc["total_duration"]),
        policy=str(doc.get("policy", "alap")),
    )
    check_no_overlap(tc)
    return tc

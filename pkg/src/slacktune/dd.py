"""Periodic dynamical-decoupling insertion into idle intervals.

One XYXY round (XX is available as the reduced two-pulse form) is spread
across each qualifying idle interval with equal gaps before, between, and
after the pulses.  Both sequences compose to the identity up to global
phase, so insertion never changes ideal circuit semantics.  The optional
heuristic only decouples intervals at least ``heuristic_factor`` times the
bare sequence duration, giving the pulses room to refocus anything.
"""
from __future__ import annotations

from dataclasses import dataclass

from .device import DeviceModel
from .ir import GateKind, Instruction
from .sched import TimedCircuit, TimedInstruction, check_no_overlap
from .tuner import StitchedSchedule

_ALLOWED_SEQUENCES = {
    (GateKind.X, GateKind.Y, GateKind.X, GateKind.Y),
    (GateKind.X, GateKind.X),
}


class DDError(ValueError):
    pass


@dataclass(frozen=True)
class DDConfig:
    sequence: tuple[GateKind, ...] = (GateKind.X, GateKind.Y, GateKind.X, GateKind.Y)
    heuristic_enabled: bool = False
    heuristic_factor: float = 4.0

    def __post_init__(self) -> None:
        if tuple(self.sequence) not in _ALLOWED_SEQUENCES:
            raise DDError("sequence must be XYXY or the reduced XX form")
        if not self.heuristic_factor > 0:
            raise DDError(f"heuristic_factor must be positive, got {self.heuristic_factor}")


def sequence_duration(cfg: DDConfig, d: DeviceModel) -> int:
    """Summed pulse durations, excluding inter-pulse spacing."""
    total = 0
    for kind in cfg.sequence:
        dur = d.duration_1q(kind.value)
        if dur is None:
            raise DDError(f"device defines no duration for {kind.value}")
        total += dur
    return total


def dd_fits(interval_duration: int, cfg: DDConfig, d: DeviceModel) -> bool:
    """Whether one decoupling round may be inserted into the interval."""
    seq = sequence_duration(cfg, d)
    if interval_duration < seq:
        return False
    if cfg.heuristic_enabled and interval_duration < cfg.heuristic_factor * seq:
        return False
    return True


def schedule_dd_in_interval(start: int, duration: int, qubit: int,
                            cfg: DDConfig, d: DeviceModel) -> list[TimedInstruction]:
    """Place one round with equal gaps; leftover dt goes to the leading gaps."""
    if not dd_fits(duration, cfg, d):
        raise DDError(f"interval of {duration} dt does not admit a DD round")
    slots = len(cfg.sequence) + 1
    idle = duration - sequence_duration(cfg, d)
    gap, remainder = divmod(idle, slots)
    placed = []
    t = start
    for i, kind in enumerate(cfg.sequence):
        t += gap + (1 if i < remainder else 0)
        dur = d.duration_1q(kind.value)
        placed.append(TimedInstruction(Instruction(kind, (qubit,)), t, dur))
        t += dur
    return placed


def idle_intervals(tc: TimedCircuit) -> list[tuple[int, int, int]]:
    """(qubit, start, duration) of every idle gap between instructions.

    Only gaps after a qubit's first real instruction count; explicit delays
    are treated as occupied (they encode deliberate timing), and idle with
    no following instruction has no right boundary, so it is skipped.
    """
    gaps = []
    for q in range(tc.num_qubits):
        items = tc.on_qubit(q)
        while items and items[0][1].instr.kind is GateKind.DELAY:
            items.pop(0)
        for (_, a), (_, b) in zip(items, items[1:]):
            if b.start > a.end:
                gaps.append((q, a.end, b.start - a.end))
    return gaps


def apply_dd(tc: TimedCircuit | StitchedSchedule, cfg: DDConfig,
             d: DeviceModel | None = None) -> TimedCircuit:
    """Insert one DD round into every idle interval that passes dd_fits.

    Works on plain schedules or stitched ones (where moved blocks have cut
    windows into smaller intervals).  Existing instruction times and the
    total duration are untouched.
    """
    if isinstance(tc, StitchedSchedule):
        tc = tc.schedule
    if d is None:
        d = tc.device
    inserted: list[TimedInstruction] = []
    for q, start, duration in idle_intervals(tc):
        if dd_fits(duration, cfg, d):
            inserted.extend(schedule_dd_in_interval(start, duration, q, cfg, d))
    if not inserted:
        return tc
    out = TimedCircuit(tc.device, tc.num_qubits, tc.timed + tuple(inserted),
                       tc.total_duration, policy=tc.policy + "+dd")
    check_no_overlap(out)
    return out

"""Budgeted window sweeps: score block positions on a backend and stitch.

Every tunable window receives floor(budget / #windows) circuit slots; its
offset grid is uniform over [0, max offset], always contains both sweep
endpoints, and is capped at the number of discrete dt slots.  The best
offset per window (ties broken toward the ALAP placement, then toward later
placement) is written back into the baseline schedule without changing any
anchor or the total duration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Protocol

import numpy as np

from .device import DeviceModel
from .ir import Circuit, cx_depth
from .sched import (
    Policy,
    SlackWindow,
    TimedCircuit,
    find_slack_windows,
    schedule,
    with_moved_blocks,
)
from .sim.metrics import OutcomeDistribution, pos
from .slicing import SICircuit, make_si_builder, passes_depth_criteria


class TuningError(ValueError):
    pass


class Backend(Protocol):
    def run(self, tc: TimedCircuit, shots: int, seed: int) -> OutcomeDistribution: ...


class TuneMode(Enum):
    TS_SI = "ts-si"       # tune every window with a gate block
    TS_SI_C = "ts-si-c"   # additionally require the depth criteria


@dataclass(frozen=True)
class TuningPlan:
    budget: int
    shots: int
    per_window_slots: int
    grids: dict[int, tuple[int, ...]]  # window_id -> ascending offsets


@dataclass(frozen=True)
class WindowResult:
    window_id: int
    scores: dict[int, float]   # offset -> ground-truth POS
    best_offset: int
    baseline_offset: int


@dataclass(frozen=True)
class StitchedSchedule:
    schedule: TimedCircuit
    provenance: dict[int, WindowResult] = field(default_factory=dict)

    @property
    def total_duration(self) -> int:
        return self.schedule.total_duration


@dataclass(frozen=True)
class WindowReport:
    window_id: int
    qubit: int
    start: int
    duration: int
    block_duration: int
    criteria_pass: bool | None   # None for untunable (empty-block) windows
    tuned: bool
    grid: tuple[int, ...] = ()
    scores: dict[int, float] = field(default_factory=dict)
    best_offset: int | None = None
    baseline_offset: int | None = None


@dataclass(frozen=True)
class PipelineReport:
    mode: str
    budget: int
    shots: int
    seed: int
    total_duration: int
    windows: tuple[WindowReport, ...]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "budget": self.budget,
            "shots": self.shots,
            "seed": self.seed,
            "total_duration": self.total_duration,
            "windows": [
                {
                    "window_id": w.window_id,
                    "qubit": w.qubit,
                    "start": w.start,
                    "duration": w.duration,
                    "block_duration": w.block_duration,
                    "criteria_pass": w.criteria_pass,
                    "tuned": w.tuned,
                    "grid": list(w.grid),
                    "scores": {str(o): s for o, s in sorted(w.scores.items())},
                    "best_offset": w.best_offset,
                    "baseline_offset": w.baseline_offset,
                }
                for w in self.windows
            ],
        }


def derive_seed(master_seed: int, window_id: int, offset_index: int) -> int:
    """Stable per-circuit seed so parallel and serial sweeps agree."""
    ss = np.random.SeedSequence([int(master_seed), int(window_id), int(offset_index)])
    return int(ss.generate_state(1)[0])


def _uniform_grid(max_offset: int, points: int) -> tuple[int, ...]:
    points = min(points, max_offset + 1)
    if points <= 1 or max_offset == 0:
        return (0,)
    steps = points - 1
    grid = sorted({(2 * i * max_offset + steps) // (2 * steps) for i in range(points)})
    return tuple(grid)


def plan_sweep(windows: list[SlackWindow], budget: int = 900,
               shots: int = 1024) -> TuningPlan:
    """Split the circuit budget evenly across the tunable windows."""
    if not windows:
        raise TuningError("no tunable windows to plan a sweep for")
    if any(not w.tunable for w in windows):
        raise TuningError("plan_sweep expects tunable (non-empty block) windows")
    per_window = budget // len(windows)
    if per_window < 2:
        raise TuningError(
            f"budget {budget} gives {per_window} slots across {len(windows)} windows; "
            "at least 2 per window are required to cover both sweep endpoints")
    grids = {w.window_id: _uniform_grid(w.max_offset, per_window) for w in windows}
    return TuningPlan(budget=budget, shots=shots, per_window_slots=per_window, grids=grids)


def tune_window(si_builder: Callable[[int], SICircuit], grid: tuple[int, ...],
                backend: Backend, shots: int, seed: int, *,
                window_id: int = 0, baseline_offset: int | None = None) -> WindowResult:
    """Score every grid offset on the backend and pick the argmax.

    Ties break toward the baseline (ALAP, i.e. maximal) offset and then
    toward the later placement, so an informationless sweep reproduces the
    baseline schedule.
    """
    if not grid:
        raise TuningError(f"empty offset grid for window {window_id}")
    scores: dict[int, float] = {}
    best_offset = grid[0]
    best_score = -1.0
    for index, offset in enumerate(grid):
        si = si_builder(offset)
        try:
            dist = backend.run(si.combined, shots, derive_seed(seed, window_id, index))
        except Exception as exc:
            raise TuningError(f"backend failed tuning window {window_id} "
                              f"at offset {offset}: {exc}") from exc
        score = pos(dist, {si.ground_truth})
        scores[offset] = score
        if score >= best_score:   # ascending grid: last tied offset wins
            best_score = score
            best_offset = offset
    if baseline_offset is None:
        baseline_offset = grid[-1]
    return WindowResult(window_id=window_id, scores=scores,
                        best_offset=best_offset, baseline_offset=baseline_offset)


def stitch(tc: TimedCircuit, results: list[WindowResult]) -> StitchedSchedule:
    """Apply each window's tuned offset to the baseline schedule.

    Untuned windows keep their baseline placement; anchors, durations, and
    the total duration are unchanged.
    """
    windows = {w.window_id: w for w in find_slack_windows(tc)}
    moves = []
    for r in results:
        if r.window_id not in windows:
            raise TuningError(f"window {r.window_id} does not exist in the schedule")
        moves.append((windows[r.window_id], r.best_offset))
    stitched = with_moved_blocks(tc, moves)
    return StitchedSchedule(schedule=stitched,
                            provenance={r.window_id: r for r in results})


def run_pipeline(c: Circuit, d: DeviceModel, backend: Backend,
                 mode: TuneMode = TuneMode.TS_SI_C, budget: int = 900,
                 shots: int = 1024, seed: int = 0) -> tuple[StitchedSchedule, PipelineReport]:
    """Full sweep: schedule ALAP, tune eligible windows, stitch, report.

    Eligible windows have a non-empty gate block; TS_SI_C additionally
    requires the slice+inverse circuit to respect the original CX depth.
    """
    tc = schedule(c, d, Policy.ALAP)
    windows = find_slack_windows(tc)

    builders: dict[int, Callable[[int], SICircuit]] = {}
    criteria: dict[int, bool] = {}
    for w in windows:
        if not w.tunable:
            continue
        builder = make_si_builder(c, tc, w, d)
        builders[w.window_id] = builder
        criteria[w.window_id] = passes_depth_criteria(builder(w.max_offset), c)

    selected = [w for w in windows if w.tunable
                and (mode is TuneMode.TS_SI or criteria[w.window_id])]

    results: list[WindowResult] = []
    plan: TuningPlan | None = None
    if selected:
        plan = plan_sweep(selected, budget=budget, shots=shots)
        for w in selected:
            results.append(tune_window(
                builders[w.window_id], plan.grids[w.window_id], backend,
                shots, seed, window_id=w.window_id, baseline_offset=w.block_offset))
    stitched = stitch(tc, results)

    by_id = {r.window_id: r for r in results}
    reports = []
    for w in windows:
        r = by_id.get(w.window_id)
        reports.append(WindowReport(
            window_id=w.window_id,
            qubit=w.qubit,
            start=w.start,
            duration=w.duration,
            block_duration=w.block_duration,
            criteria_pass=criteria.get(w.window_id),
            tuned=r is not None,
            grid=plan.grids[w.window_id] if (r is not None and plan is not None) else (),
            scores=r.scores if r is not None else {},
            best_offset=r.best_offset if r is not None else None,
            baseline_offset=r.baseline_offset if r is not None else None,
        ))
    report = PipelineReport(
        mode=mode.value, budget=budget, shots=shots, seed=seed,
        total_duration=tc.total_duration, windows=tuple(reports))
    return stitched, report

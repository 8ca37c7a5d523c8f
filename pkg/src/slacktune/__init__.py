"""slacktune: slack-window gate scheduling and tuning for timed circuits.

The pipeline schedules a circuit ALAP on a device model, finds idle slack
windows, builds slice+inverse calibration circuits per window, sweeps gate
block positions on a density-matrix noise backend, stitches the per-window
optima back into a schedule of unchanged duration, and can interleave
periodic dynamical decoupling into the remaining idle time.
"""
from .bench import BenchKind, BenchmarkSpec, hahn_micro, make_benchmark, make_spec
from .dd import DDConfig, apply_dd, dd_fits, schedule_dd_in_interval
from .device import DeviceModel, QubitParams, line_device, load_device, reference_device
from .ir import (
    Circuit,
    CircuitError,
    GateKind,
    Instruction,
    Violation,
    cx_depth,
    instruction_duration,
    invert_circuit,
    validate,
)
from .qasm import QasmError, SourceSpan, parse, serialize
from .sched import (
    Policy,
    SchedulingError,
    SlackWindow,
    TimedCircuit,
    TimedInstruction,
    find_slack_windows,
    schedule,
    timed_to_circuit,
    total_duration,
)
from .sim import (
    DensityMatrixBackend,
    OutcomeDistribution,
    hellinger_fidelity,
    idle_channel,
    pos,
    run_counts,
    run_statevector,
)
from .slicing import SICircuit, build_si_circuit, build_slice, passes_depth_criteria
from .tuner import (
    StitchedSchedule,
    TuneMode,
    TuningPlan,
    WindowResult,
    plan_sweep,
    run_pipeline,
    stitch,
    tune_window,
)

__version__ = "0.1.0"

__all__ = [
    "BenchKind",
    "BenchmarkSpec",
    "Circuit",
    "CircuitError",
    "DDConfig",
    "DensityMatrixBackend",
    "DeviceModel",
    "GateKind",
    "Instruction",
    "OutcomeDistribution",
    "Policy",
    "QasmError",
    "QubitParams",
    "SICircuit",
    "SchedulingError",
    "SlackWindow",
    "SourceSpan",
    "StitchedSchedule",
    "TimedCircuit",
    "TimedInstruction",
    "TuneMode",
    "TuningPlan",
    "Violation",
    "WindowResult",
    "apply_dd",
    "build_si_circuit",
    "build_slice",
    "cx_depth",
    "dd_fits",
    "find_slack_windows",
    "hahn_micro",
    "hellinger_fidelity",
    "idle_channel",
    "instruction_duration",
    "invert_circuit",
    "line_device",
    "load_device",
    "make_benchmark",
    "make_spec",
    "parse",
    "passes_depth_criteria",
    "plan_sweep",
    "pos",
    "reference_device",
    "run_counts",
    "run_pipeline",
    "run_statevector",
    "schedule",
    "schedule_dd_in_interval",
    "serialize",
    "stitch",
    "timed_to_circuit",
    "total_duration",
    "tune_window",
    "validate",
]

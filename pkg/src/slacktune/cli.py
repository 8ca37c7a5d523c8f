"""Command-line front end for the scheduling/tuning pipeline.

Subcommands: ``bench`` (emit a benchmark), ``schedule``/``windows`` (timed
circuit and slack report), ``slice`` (slice+inverse circuits and criteria
manifest), ``tune`` (full tuning pipeline), ``run`` (execute a schedule on
the simulator), ``compare`` (the nine-policy matrix relative to ALAP).
Reports are line-oriented with a stable column order; re-running with the
same configuration and seed reproduces them byte for byte.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import BenchKind, DEFAULT_SIZES, make_benchmark
from .dd import DDConfig, apply_dd
from .device import DeviceModel, default_device_path, load_device
from .ir import Circuit, GateKind, cx_depth
from .qasm import QasmError, load as load_qasm, save as save_qasm
from .sched import (
    Policy,
    SchedulingError,
    TimedCircuit,
    find_slack_windows,
    schedule,
    schedule_from_dict,
    schedule_to_dict,
    timed_to_circuit,
)
from .sim import DensityMatrixBackend, hellinger_fidelity, output_probabilities, pos, run_counts
from .slicing import make_si_builder, passes_depth_criteria
from .tuner import PipelineReport, StitchedSchedule, TuneMode, derive_seed, run_pipeline


class CliError(Exception):
    pass


def _load_device_arg(args) -> DeviceModel:
    path = Path(args.device) if args.device else default_device_path()
    try:
        return load_device(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load device {path}: {exc}") from exc


def _load_input_circuit(args) -> tuple[Circuit, frozenset[str] | None, str]:
    """Circuit from --bench or --circuit, with accepted outputs if known."""
    if getattr(args, "bench", None):
        kind = BenchKind(args.bench)
        n = args.n if args.n is not None else DEFAULT_SIZES[kind]
        circuit, accepted = make_benchmark(kind, n)
        return circuit, accepted, f"{kind.value}{n}"
    if getattr(args, "circuit", None):
        try:
            circuit = load_qasm(args.circuit)
        except OSError as exc:
            raise CliError(f"cannot read {args.circuit}: {exc}") from exc
        except QasmError as exc:
            raise CliError(f"{args.circuit}: {exc}") from exc
        accepted = None
        if getattr(args, "accepted", None):
            accepted = frozenset(s.strip() for s in args.accepted.split(",") if s.strip())
        return circuit, accepted, Path(args.circuit).stem
    raise CliError("either --bench or --circuit is required")


def _dd_config(args) -> DDConfig | None:
    mode = getattr(args, "dd", "off")
    if mode == "off":
        return None
    sequence = ((GateKind.X, GateKind.X) if getattr(args, "dd_sequence", "xyxy") == "xx"
                else (GateKind.X, GateKind.Y, GateKind.X, GateKind.Y))
    return DDConfig(sequence=sequence, heuristic_enabled=(mode == "heuristic"),
                    heuristic_factor=getattr(args, "dd_factor", 4.0))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _windows_report(tc: TimedCircuit) -> str:
    lines = [f"schedule policy={tc.policy} num_qubits={tc.num_qubits} "
             f"total_duration={tc.total_duration}"]
    windows = find_slack_windows(tc)
    lines.append(f"windows {len(windows)}")
    lines.append("  id qubit start duration block_duration block_offset max_offset tunable")
    for w in windows:
        lines.append(f"  {w.window_id} {w.qubit} {w.start} {w.duration} "
                     f"{w.block_duration} {w.block_offset} {w.max_offset} "
                     f"{'yes' if w.tunable else 'no'}")
    lines.append("timeline")
    for q in range(tc.num_qubits):
        items = " ".join(f"{ti.instr.kind.value}[{ti.start},{ti.end})"
                         for _, ti in tc.on_qubit(q))
        lines.append(f"  q{q}: {items}")
    return "\n".join(lines) + "\n"


def _tuning_report_text(report: PipelineReport) -> str:
    lines = [
        f"tune mode={report.mode} budget={report.budget} shots={report.shots} "
        f"seed={report.seed} total_duration={report.total_duration}",
        f"windows {len(report.windows)}",
    ]
    for w in report.windows:
        criteria = "pass" if w.criteria_pass else ("fail" if w.criteria_pass is False else "n/a")
        lines.append(f"  id={w.window_id} qubit={w.qubit} start={w.start} "
                     f"duration={w.duration} block={w.block_duration} "
                     f"criteria={criteria} tuned={'yes' if w.tuned else 'no'}")
        if w.tuned:
            lines.append("    grid " + " ".join(str(o) for o in w.grid))
            lines.append("    scores " + " ".join(
                f"{o}:{w.scores[o]:.6f}" for o in w.grid))
            lines.append(f"    best_offset={w.best_offset} "
                         f"baseline_offset={w.baseline_offset}")
    moved = [(w.window_id, w.baseline_offset, w.best_offset)
             for w in report.windows if w.tuned and w.best_offset != w.baseline_offset]
    lines.append(f"schedule diff versus baseline ({len(moved)} windows moved)")
    for wid, base, best in moved:
        lines.append(f"  window {wid}: offset {base} -> {best}")
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def cmd_bench(args) -> int:
    kind = BenchKind(args.kind)
    n = args.n if args.n is not None else DEFAULT_SIZES[kind]
    circuit, accepted = make_benchmark(kind, n)
    out = _out_dir(args)
    stem = f"{kind.value}{n}"
    save_qasm(circuit, out / f"{stem}.qasm")
    print(f"wrote {out / (stem + '.qasm')}")
    manifest = {
        "kind": kind.value,
        "num_qubits": n,
        "accepted_outputs": sorted(accepted),
        "cx_depth": cx_depth(circuit),
        "num_instructions": len(circuit.instructions),
    }
    _write(out / f"{stem}.manifest.json",
           json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_schedule(args, report_only: bool = False) -> int:
    circuit, _, stem = _load_input_circuit(args)
    device = _load_device_arg(args)
    tc = schedule(circuit, device, Policy(args.policy))
    cfg = _dd_config(args)
    if cfg is not None:
        tc = apply_dd(tc, cfg, device)
    text = _windows_report(tc)
    print(text, end="")
    if not report_only:
        out = _out_dir(args)
        _write(out / f"{stem}.schedule.json",
               json.dumps(schedule_to_dict(tc), indent=2, sort_keys=True) + "\n")
        _write(out / f"{stem}.windows.txt", text)
    return 0


def cmd_windows(args) -> int:
    return cmd_schedule(args, report_only=True)


def cmd_slice(args) -> int:
    circuit, _, stem = _load_input_circuit(args)
    device = _load_device_arg(args)
    tc = schedule(circuit, device, Policy.ALAP)
    out = _out_dir(args)
    original_depth = cx_depth(circuit)
    entries = []
    for w in find_slack_windows(tc):
        if not w.tunable:
            continue
        builder = make_si_builder(circuit, tc, w, device)
        si = builder(w.max_offset)
        verdict = passes_depth_criteria(si, circuit)
        qasm_path = out / f"{stem}.si{w.window_id}.qasm"
        save_qasm(timed_to_circuit(si.combined), qasm_path)
        print(f"wrote {qasm_path}")
        entries.append({
            "window_id": w.window_id,
            "qubit": w.qubit,
            "window_start": w.start,
            "window_duration": w.duration,
            "offset_range": [0, w.max_offset],
            "slice_cx_depth": cx_depth(si.slice_circuit),
            "si_cx_depth": cx_depth(si.forward.to_circuit() + si.inverse.to_circuit()),
            "criteria_pass": verdict,
            "qasm": qasm_path.name,
        })
    manifest = {
        "circuit": stem,
        "original_cx_depth": original_depth,
        "windows": entries,
    }
    _write(out / f"{stem}.slices.json",
           json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"{len(entries)} slice+inverse circuits "
          f"({sum(e['criteria_pass'] for e in entries)} pass depth criteria)")
    return 0


def cmd_tune(args) -> int:
    circuit, _, stem = _load_input_circuit(args)
    device = _load_device_arg(args)
    backend = DensityMatrixBackend(device)
    stitched, report = run_pipeline(
        circuit, device, backend, TuneMode(args.mode),
        budget=args.budget, shots=args.shots, seed=args.seed)
    final = stitched.schedule
    cfg = _dd_config(args)
    if cfg is not None:
        final = apply_dd(final, cfg, device)
    out = _out_dir(args)
    text = _tuning_report_text(report)
    print(text, end="")
    _write(out / f"{stem}.stitched.json",
           json.dumps(schedule_to_dict(final), indent=2, sort_keys=True) + "\n")
    _write(out / f"{stem}.report.txt", text)
    _write(out / f"{stem}.report.json",
           json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_run(args) -> int:
    device = _load_device_arg(args)
    accepted: frozenset[str] | None = None
    if args.schedule:
        with open(args.schedule, "r", encoding="utf-8") as fh:
            tc = schedule_from_dict(json.load(fh), device)
        if args.accepted:
            accepted = frozenset(s.strip() for s in args.accepted.split(",") if s.strip())
    else:
        circuit, accepted, _ = _load_input_circuit(args)
        tc = schedule(circuit, device, Policy(args.policy))
    if args.manifest:
        with open(args.manifest, "r", encoding="utf-8") as fh:
            accepted = frozenset(json.load(fh)["accepted_outputs"])
    dist = run_counts(tc, device, args.shots, args.seed)
    ideal = output_probabilities(tc.to_circuit())
    lines = [f"run shots={args.shots} seed={args.seed} "
             f"total_duration={tc.total_duration}"]
    for bits in sorted(dist.counts):
        lines.append(f"  {bits} {dist.counts[bits]}")
    lines.append(f"hellinger_fidelity {hellinger_fidelity(dist, ideal):.6f}")
    if accepted is not None:
        lines.append(f"pos {pos(dist, accepted):.6f} "
                     f"accepted={','.join(sorted(accepted))}")
    print("\n".join(lines))
    if args.out:
        out = _out_dir(args)
        _write(out / "counts.json", json.dumps(
            {"shots": dist.shots, "counts": dist.counts},
            indent=2, sort_keys=True) + "\n")
    return 0


_COMPARE_POLICIES = ("alap", "asap", "middle", "ts-si", "ts-si+c",
                     "dd", "dd(h)", "ts+dd", "ts+dd(h)")


def _compare_schedules(circuit: Circuit, device: DeviceModel, args) -> dict[str, TimedCircuit]:
    backend = DensityMatrixBackend(device)
    dd_all = DDConfig(heuristic_enabled=False, heuristic_factor=args.dd_factor)
    dd_h = DDConfig(heuristic_enabled=True, heuristic_factor=args.dd_factor)
    stitched_si, _ = run_pipeline(circuit, device, backend, TuneMode.TS_SI,
                                  budget=args.budget, shots=args.shots, seed=args.seed)
    stitched_sic, _ = run_pipeline(circuit, device, backend, TuneMode.TS_SI_C,
                                   budget=args.budget, shots=args.shots, seed=args.seed)
    alap = schedule(circuit, device, Policy.ALAP)
    return {
        "alap": alap,
        "asap": schedule(circuit, device, Policy.ASAP),
        "middle": schedule(circuit, device, Policy.MIDDLE),
        "ts-si": stitched_si.schedule,
        "ts-si+c": stitched_sic.schedule,
        "dd": apply_dd(alap, dd_all, device),
        "dd(h)": apply_dd(alap, dd_h, device),
        "ts+dd": apply_dd(stitched_sic.schedule, dd_all, device),
        "ts+dd(h)": apply_dd(stitched_sic.schedule, dd_h, device),
    }


def cmd_compare(args) -> int:
    circuit, accepted, stem = _load_input_circuit(args)
    if accepted is None:
        raise CliError("compare needs accepted outputs: use --bench or --accepted")
    device = _load_device_arg(args)
    schedules = _compare_schedules(circuit, device, args)

    rows = []
    pos_by_policy: dict[str, float] = {}
    for row_index, name in enumerate(_COMPARE_POLICIES):
        tc = schedules[name]
        dist = run_counts(tc, device, args.eval_shots,
                          derive_seed(args.seed, 1_000_000 + row_index, 0))
        p = pos(dist, accepted)
        pos_by_policy[name] = p
        rows.append((name, p, tc.total_duration, len(tc.timed)))

    base = pos_by_policy["alap"]
    lines = [
        f"compare circuit={stem} eval_shots={args.eval_shots} seed={args.seed} "
        f"budget={args.budget} tuning_shots={args.shots} "
        f"accepted={','.join(sorted(accepted))}",
        f"{'policy':<10} {'pos':>10} {'rel_pos':>10} {'duration':>10} {'gates':>7}",
    ]
    for name, p, duration, gates in rows:
        rel = (p - base) / base if base > 0 else float("nan")
        lines.append(f"{name:<10} {p:>10.6f} {rel:>+10.4f} {duration:>10} {gates:>7}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        out = _out_dir(args)
        _write(out / f"{stem}.compare.txt", text)
        doc = {name: {"pos": pos_by_policy[name],
                      "rel_pos": (pos_by_policy[name] - base) / base if base > 0 else None,
                      "total_duration": schedules[name].total_duration,
                      "gates": len(schedules[name].timed)}
               for name in _COMPARE_POLICIES}
        _write(out / f"{stem}.compare.json",
               json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def _add_input_args(p: argparse.ArgumentParser, with_accepted: bool = False) -> None:
    p.add_argument("--bench", choices=[k.value for k in BenchKind], help="generate a built-in benchmark")
    p.add_argument("--n", type=int, default=None, help="benchmark size in qubits")
    p.add_argument("--circuit", help="input .qasm file")
    if with_accepted:
        p.add_argument("--accepted", help="comma-separated accepted bitstrings")


def _add_dd_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dd", choices=["off", "on", "heuristic"], default="off")
    p.add_argument("--dd-factor", type=float, default=4.0)
    p.add_argument("--dd-sequence", choices=["xyxy", "xx"], default="xyxy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slacktune",
        description="Slack-window gate scheduling, tuning, and DD insertion.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="emit a benchmark circuit and manifest")
    p.add_argument("--kind", required=True, choices=[k.value for k in BenchKind])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_bench)

    for name, func, report_only in (("schedule", cmd_schedule, False),
                                    ("windows", cmd_windows, True)):
        p = sub.add_parser(name, help="schedule a circuit and report slack windows")
        _add_input_args(p)
        p.add_argument("--device")
        p.add_argument("--policy", choices=[x.value for x in Policy], default="alap")
        _add_dd_args(p)
        if not report_only:
            p.add_argument("--out", default=".")
        p.set_defaults(func=func)

    p = sub.add_parser("slice", help="emit slice+inverse circuits and criteria manifest")
    _add_input_args(p)
    p.add_argument("--device")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("tune", help="run the tuning pipeline and stitch a schedule")
    _add_input_args(p)
    p.add_argument("--device")
    p.add_argument("--mode", choices=[m.value for m in TuneMode], default="ts-si-c")
    p.add_argument("--budget", type=int, default=900)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    _add_dd_args(p)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("run", help="execute a schedule on the noise simulator")
    _add_input_args(p, with_accepted=True)
    p.add_argument("--schedule", help="stitched/schedule JSON file")
    p.add_argument("--manifest", help="benchmark manifest with accepted outputs")
    p.add_argument("--device")
    p.add_argument("--policy", choices=[x.value for x in Policy], default="alap")
    p.add_argument("--shots", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="evaluate the nine-policy matrix against ALAP")
    _add_input_args(p, with_accepted=True)
    p.add_argument("--device")
    p.add_argument("--budget", type=int, default=900)
    p.add_argument("--shots", type=int, default=1024, help="tuning shots per circuit")
    p.add_argument("--eval-shots", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dd-factor", type=float, default=4.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, QasmError, SchedulingError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

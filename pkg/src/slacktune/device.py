"""Device models: per-qubit noise parameters, gate durations, and coupling.

A device file is a TOML document with times in seconds, detuning in Hz, and
gate durations in integer dt units.  A reference 7-qubit line device ships
with the package (``slacktune/data/device7.toml``).
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEVICE_ENV_VAR = "SLACKTUNE_DEVICE"


class DeviceError(ValueError):
    """Raised for malformed or unphysical device descriptions."""


@dataclass(frozen=True)
class QubitParams:
    """Noise parameters of one physical qubit.

    t1/t2 are relaxation/dephasing time constants in seconds (0 < t2 <= 2*t1).
    detuning_hz is a deterministic residual Z-rotation rate: the qubit frame
    drifts by 2*pi*detuning_hz radians per second while idle.
    """

    t1: float
    t2: float
    detuning_hz: float = 0.0
    readout_p01: float = 0.0  # P(read 1 | prepared 0)
    readout_p10: float = 0.0  # P(read 0 | prepared 1)

    def __post_init__(self) -> None:
        if not self.t1 > 0:
            raise DeviceError(f"t1 must be positive, got {self.t1}")
        if not 0 < self.t2 <= 2 * self.t1:
            raise DeviceError(f"t2 must satisfy 0 < t2 <= 2*t1, got t2={self.t2}, t1={self.t1}")
        for name in ("readout_p01", "readout_p10"):
            p = getattr(self, name)
            if not 0 <= p <= 1:
                raise DeviceError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class DeviceModel:
    """Static description of a target device.

    Durations are keyed by gate class: ``sq`` is the shared single-qubit
    duration, ``cx`` the default two-qubit duration, ``measure`` the readout
    duration.  Individual single-qubit kinds may be overridden by lowercase
    kind name (``rz = 0`` models virtual-Z frames), and individual CX edges
    by ``cx_edges`` entries.  All values are integer dt units.
    """

    dt: float
    num_qubits: int
    qubit_params: tuple[QubitParams, ...]
    durations: dict[str, int]
    cx_edge_durations: dict[tuple[int, int], int] = field(default_factory=dict)
    coupling: frozenset[tuple[int, int]] = frozenset()
    depol_1q: float = 0.0
    depol_2q: float = 0.0
    name: str = "device"

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise DeviceError(f"dt must be positive, got {self.dt}")
        if self.num_qubits < 1:
            raise DeviceError("device needs at least one qubit")
        if len(self.qubit_params) != self.num_qubits:
            raise DeviceError(
                f"expected {self.num_qubits} qubit parameter sets, got {len(self.qubit_params)}"
            )
        for p in (self.depol_1q, self.depol_2q):
            if not 0 <= p <= 1:
                raise DeviceError(f"depolarizing probability must be in [0, 1], got {p}")
        for key, dur in self.durations.items():
            if dur < 0 or (dur < 1 and key != "rz"):
                # Virtual-Z frames are the one legal zero-duration gate class.
                raise DeviceError(f"duration for {key!r} must be >= 1 dt (rz may be 0), got {dur}")
        for edge, dur in self.cx_edge_durations.items():
            if dur < 1:
                raise DeviceError(f"cx duration for edge {edge} must be >= 1 dt, got {dur}")
        object.__setattr__(
            self, "coupling", frozenset(_norm_edge(a, b) for a, b in self.coupling)
        )

    def is_coupled(self, a: int, b: int) -> bool:
        return _norm_edge(a, b) in self.coupling

    def duration_1q(self, kind_name: str) -> int | None:
        """Duration of a single-qubit gate class, or None if unavailable."""
        if kind_name in self.durations:
            return self.durations[kind_name]
        return self.durations.get("sq")

    def duration_cx(self, a: int, b: int) -> int | None:
        edge = _norm_edge(a, b)
        if edge in self.cx_edge_durations:
            return self.cx_edge_durations[edge]
        return self.durations.get("cx")

    def duration_measure(self) -> int | None:
        return self.durations.get("measure")


def _norm_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


def load_device(path: str | os.PathLike[str]) -> DeviceModel:
    """Parse a TOML device file into a DeviceModel."""
    path = Path(path)
    with open(path, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise DeviceError(f"{path}: {exc}") from exc
    try:
        dt = float(doc["dt"])
        num_qubits = int(doc["num_qubits"])
        qubits = tuple(
            QubitParams(
                t1=float(q["t1"]),
                t2=float(q["t2"]),
                detuning_hz=float(q.get("detuning_hz", 0.0)),
                readout_p01=float(q.get("readout_p01", 0.0)),
                readout_p10=float(q.get("readout_p10", 0.0)),
            )
            for q in doc["qubits"]
        )
        raw_durations = doc.get("durations", {})
        cx_edges = {
            _norm_edge(*map(int, key.split("-"))): int(val)
            for key, val in raw_durations.pop("cx_edges", {}).items()
        }
        durations = {key: int(val) for key, val in raw_durations.items()}
        coupling = frozenset(_norm_edge(int(a), int(b)) for a, b in doc.get("coupling", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise DeviceError(f"{path}: malformed device file ({exc})") from exc
    return DeviceModel(
        dt=dt,
        num_qubits=num_qubits,
        qubit_params=qubits,
        durations=durations,
        cx_edge_durations=cx_edges,
        coupling=coupling,
        depol_1q=float(doc.get("depol_1q", 0.0)),
        depol_2q=float(doc.get("depol_2q", 0.0)),
        name=str(doc.get("name", path.stem)),
    )


def line_device(
    num_qubits: int,
    *,
    dt: float = 2.2222e-10,
    t1: float = 100e-6,
    t2: float = 80e-6,
    detuning_hz: float | list[float] = 0.0,
    readout_p01: float = 0.0,
    readout_p10: float = 0.0,
    sq_duration: int = 160,
    cx_duration: int = 1600,
    measure_duration: int = 4000,
    rz_duration: int = 0,
    depol_1q: float = 0.0,
    depol_2q: float = 0.0,
    name: str = "line",
) -> DeviceModel:
    """Build a linearly-coupled device, handy for tests and benchmarks."""
    if isinstance(detuning_hz, (int, float)):
        detunings = [float(detuning_hz)] * num_qubits
    else:
        detunings = list(detuning_hz)
        if len(detunings) != num_qubits:
            raise DeviceError("detuning_hz list length must equal num_qubits")
    qubits = tuple(
        QubitParams(t1=t1, t2=t2, detuning_hz=detunings[i],
                    readout_p01=readout_p01, readout_p10=readout_p10)
        for i in range(num_qubits)
    )
    return DeviceModel(
        dt=dt,
        num_qubits=num_qubits,
        qubit_params=qubits,
        durations={"sq": sq_duration, "rz": rz_duration,
                   "cx": cx_duration, "measure": measure_duration},
        coupling=frozenset((i, i + 1) for i in range(num_qubits - 1)),
        depol_1q=depol_1q,
        depol_2q=depol_2q,
        name=name,
    )


def packaged_device_path(filename: str) -> Path:
    """Filesystem path of a device file shipped inside the package."""
    return Path(str(resources.files("slacktune").joinpath("data", filename)))


def reference_device() -> DeviceModel:
    """The 7-qubit reference device shipped with the package."""
    return load_device(packaged_device_path("device7.toml"))


def default_device_path() -> Path:
    """Device file used when no --device flag is given (env var overrides)."""
    env = os.environ.get(DEVICE_ENV_VAR)
    if env:
        return Path(env)
    return packaged_device_path("device7.toml")

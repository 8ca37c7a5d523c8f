from __future__ import annotations

import math

import numpy as np
import pytest

from slacktune import Circuit, line_device
from slacktune.ir import (
    Instruction,
    barrier,
    cx,
    delay,
    h,
    measure,
    rz,
    s,
    sdg,
    sx,
    sxdg,
    x,
    y,
    z,
)
from slacktune.sim import warmup

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def _jit_warmup():
    warmup()


@pytest.fixture
def acceptance_report():
    def record(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


_1Q_FACTORIES = (x, y, z, h, s, sdg, sx, sxdg)


def random_circuit(rng: np.random.Generator, num_qubits: int, n_gates: int,
                   p_cx: float = 0.3, p_rz: float = 0.15,
                   p_delay: float = 0.0, measured: bool = False) -> Circuit:
    """Seeded random circuit over the full gate set (line-agnostic CX)."""
    instrs: list[Instruction] = []
    for _ in range(n_gates):
        r = rng.random()
        if num_qubits >= 2 and r < p_cx:
            a, b = rng.choice(num_qubits, size=2, replace=False)
            instrs.append(cx(int(a), int(b)))
        elif r < p_cx + p_rz:
            instrs.append(rz(float(rng.uniform(-math.pi, math.pi)),
                             int(rng.integers(num_qubits))))
        elif p_delay and r < p_cx + p_rz + p_delay:
            instrs.append(delay(int(rng.integers(1, 50)), int(rng.integers(num_qubits))))
        else:
            fac = _1Q_FACTORIES[rng.integers(len(_1Q_FACTORIES))]
            instrs.append(fac(int(rng.integers(num_qubits))))
    if measured:
        instrs.extend(measure(q) for q in range(num_qubits))
    return Circuit(num_qubits, tuple(instrs))


@pytest.fixture
def small_device():
    """All-to-all-free line device with easy numbers for hand checks."""
    return line_device(4, sq_duration=4, cx_duration=20, measure_duration=8)


def all_to_all_device(num_qubits: int, **kwargs):
    """Device coupling every pair, for random-circuit scheduling tests."""
    from dataclasses import replace

    dev = line_device(num_qubits, **kwargs)
    pairs = frozenset((a, b) for a in range(num_qubits) for b in range(a + 1, num_qubits))
    return replace(dev, coupling=pairs)

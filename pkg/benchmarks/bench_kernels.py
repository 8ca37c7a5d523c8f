"""Compare the numba kernels against the pure-numpy fallback.

Times the density-matrix primitives that dominate tuning sweeps (1q Kraus,
2q Kraus, statevector updates) plus one end-to-end noisy GHZ execution on
each backend.  Run with ``python benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

import time

import numpy as np

from slacktune.sim import _kernels_numba as nb_k
from slacktune.sim import _kernels_numpy as np_k
from slacktune.sim._gates import CX, H, depolarizing_kraus_1q, depolarizing_kraus_2q


def random_density(n: int, rng: np.random.Generator) -> np.ndarray:
    dim = 1 << n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return np.ascontiguousarray(rho / np.trace(rho).real)


def timeit(fn, repeats: int) -> float:
    fn()  # warm up (JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def bench_primitives(n: int, repeats: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(7)
    rho = random_density(n, rng)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi /= np.linalg.norm(psi)
    k1 = depolarizing_kraus_1q(1e-3)
    k2 = depolarizing_kraus_2q(1e-2)
    q, pair = n // 2, (n // 2, n // 2 - 1)
    cases = [
        ("kraus_1q_dm", lambda m: m.apply_kraus_dm(rho, k1, (q,))),
        ("kraus_2q_dm", lambda m: m.apply_kraus_dm(rho, k2, pair)),
        ("unitary_2q_dm", lambda m: m.apply_unitary_dm(rho, CX, pair)),
        ("unitary_1q_sv", lambda m: m.apply_unitary_sv(psi, H, (q,))),
    ]
    rows = []
    for name, call in cases:
        t_np = timeit(lambda: call(np_k), repeats)
        t_nb = timeit(lambda: call(nb_k), repeats)
        rows.append((name, t_np, t_nb))
    return rows


def bench_end_to_end(n: int, repeats: int) -> tuple[float, float]:
    import importlib
    import os

    from slacktune import Circuit, Policy, line_device, schedule
    from slacktune.ir import cx, h, measure
    from slacktune.sim import density, kernels

    dev = line_device(n, detuning_hz=25e3, depol_1q=1e-4, depol_2q=1e-2,
                      readout_p01=0.01, readout_p10=0.01)
    instrs = [h(0)] + [cx(i, i + 1) for i in range(n - 1)] + [measure(q) for q in range(n)]
    tc = schedule(Circuit(n, tuple(instrs)), dev, Policy.ALAP)

    times = {}
    for flag in ("1", "0"):
        os.environ["SLACKTUNE_NO_NUMBA"] = flag
        importlib.reload(kernels)
        importlib.reload(density)
        times[flag] = timeit(lambda: density.run_counts(tc, dev, 1024, 11), repeats)
    os.environ.pop("SLACKTUNE_NO_NUMBA", None)
    importlib.reload(kernels)
    importlib.reload(density)
    return times["1"], times["0"]


def main() -> None:
    n, repeats = 7, 20
    print(f"kernel benchmark: {n} qubits, {repeats} repeats per case")
    print(f"{'case':<16} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for name, t_np, t_nb in bench_primitives(n, repeats):
        print(f"{name:<16} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} {t_np / t_nb:>8.1f}x")
    t_np, t_nb = bench_end_to_end(6, 5)
    print(f"{'ghz6 run_counts':<16} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} "
          f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()

"""Kernel backend selection.

The density-matrix updates dominate tuning-sweep runtime, so they are
JIT-compiled with numba by default.  Set ``SLACKTUNE_NO_NUMBA=1`` (or
numba's own ``NUMBA_DISABLE_JIT=1``) to select the pure-numpy fallback;
the fallback also engages automatically when numba is unavailable.
``benchmarks/bench_kernels.py`` compares the two paths.
"""
from __future__ import annotations

import os


def _numba_disabled() -> bool:
    if os.environ.get("SLACKTUNE_NO_NUMBA", "").lower() in {"1", "true", "yes"}:
        return True
    return os.environ.get("NUMBA_DISABLE_JIT", "") == "1"


if not _numba_disabled():
    try:
        from ._kernels_numba import apply_kraus_dm, apply_unitary_dm, apply_unitary_sv
        BACKEND = "numba"
    except ImportError:
        from ._kernels_numpy import apply_kraus_dm, apply_unitary_dm, apply_unitary_sv
        BACKEND = "numpy"
else:
    from ._kernels_numpy import apply_kraus_dm, apply_unitary_dm, apply_unitary_sv
    BACKEND = "numpy"


def backend_name() -> str:
    return BACKEND


__all__ = ["apply_kraus_dm", "apply_unitary_dm", "apply_unitary_sv", "backend_name"]

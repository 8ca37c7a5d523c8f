"""Density-matrix noise simulator, statevector oracle, and outcome metrics."""
from .density import (
    ChannelParams,
    DensityMatrixBackend,
    DENSITY_QUBIT_CAP,
    evolve_density,
    idle_channel,
    idle_kraus,
    measurement_probabilities,
    run_counts,
    warmup,
)
from .kernels import backend_name
from .metrics import MetricsError, OutcomeDistribution, hellinger_fidelity, pos, total_variation
from .statevector import (
    SimulationError,
    circuit_unitary,
    marginal_probabilities,
    output_probabilities,
    run_statevector,
)

__all__ = [
    "ChannelParams",
    "DensityMatrixBackend",
    "DENSITY_QUBIT_CAP",
    "MetricsError",
    "OutcomeDistribution",
    "SimulationError",
    "backend_name",
    "circuit_unitary",
    "evolve_density",
    "hellinger_fidelity",
    "idle_channel",
    "idle_kraus",
    "marginal_probabilities",
    "measurement_probabilities",
    "output_probabilities",
    "pos",
    "run_counts",
    "run_statevector",
    "total_variation",
    "warmup",
]

"""Non-Markovian spontaneous decay of a qubit in structured reservoirs.

The package computes atom-photon bound states, the trapped excited-state
population they imply, full amplitude trajectories from the memory-kernel
amplitude equation, two-qubit entanglement and discord under local
dissipation, and parameter sweeps for reservoir engineering.
"""

from .boundstate import BoundState, asymptotic_population, bound_state_exists, solve_secular
from .correlations import (
    CorrelationSeries,
    KrausPair,
    PureInput,
    TwoQubitState,
    concurrence,
    correlation_series,
    discord_oracle,
    discord_rank2,
    initial_concurrence,
    kraus_apply,
)
from .dynamics import (
    AmplitudeTrajectory,
    BlochPoint,
    LimitCycle,
    bloch_trajectory,
    default_time_step,
    estimate_limit_cycle,
    evolve_amplitude,
)
from .errors import ConvergenceError, NoMaximumError, QtrapError, StepSizeError, SteadyStateError
from .spectral import (
    FrequencyConvention,
    OhmicClass,
    PhotonicBandGap,
    SpectralModel,
    evaluate_density,
    level_shift_integral,
    memory_kernel,
    memory_kernel_envelope,
    mode_weight_integral,
)
from .sweep import MaximizeResult, SweepResult, SweepRow, SweepSpec, maximize_quantity, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrajectory",
    "BlochPoint",
    "BoundState",
    "ConvergenceError",
    "CorrelationSeries",
    "FrequencyConvention",
    "KrausPair",
    "LimitCycle",
    "MaximizeResult",
    "NoMaximumError",
    "OhmicClass",
    "PhotonicBandGap",
    "PureInput",
    "QtrapError",
    "SpectralModel",
    "StepSizeError",
    "SteadyStateError",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "TwoQubitState",
    "asymptotic_population",
    "bloch_trajectory",
    "bound_state_exists",
    "concurrence",
    "correlation_series",
    "default_time_step",
    "discord_oracle",
    "discord_rank2",
    "estimate_limit_cycle",
    "evaluate_density",
    "evolve_amplitude",
    "initial_concurrence",
    "kraus_apply",
    "level_shift_integral",
    "maximize_quantity",
    "memory_kernel",
    "memory_kernel_envelope",
    "mode_weight_integral",
    "run_sweep",
    "solve_secular",
]

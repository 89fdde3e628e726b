"""Lindblad dynamics of the three canonical bipartite quantum systems."""

__version__ = "0.1.0"

from .errors import (
    BilindError,
    ConfigError,
    ConvergenceError,
    DegenerateSteadyStateError,
    DimensionError,
    IntegrationDivergedError,
    InvalidStateError,
    NonHermitianError,
    SingularMatrixError,
)
from .evolve import (
    Observable,
    TimeGrid,
    Trajectory,
    build_generator,
    convergence_probe,
    expect,
    integrate,
    occupation_observables,
    run_scenario,
)
from .liouvillian import Generator
from .models import (
    BathSpec,
    CollapseChannel,
    SystemSpec,
    build_collapse_channels,
    build_hamiltonian,
    thermal_occupation,
)
from .operators import (
    CompositeSpace,
    Subsystem,
    annihilation,
    boson,
    ground_state,
    lift,
    qubit,
    sigma,
    total_excitation,
)

__all__ = [
    "BathSpec",
    "BilindError",
    "CollapseChannel",
    "CompositeSpace",
    "ConfigError",
    "ConvergenceError",
    "DegenerateSteadyStateError",
    "DimensionError",
    "Generator",
    "IntegrationDivergedError",
    "InvalidStateError",
    "NonHermitianError",
    "Observable",
    "SingularMatrixError",
    "Subsystem",
    "SystemSpec",
    "TimeGrid",
    "Trajectory",
    "annihilation",
    "boson",
    "build_collapse_channels",
    "build_generator",
    "build_hamiltonian",
    "convergence_probe",
    "expect",
    "ground_state",
    "integrate",
    "lift",
    "occupation_observables",
    "qubit",
    "run_scenario",
    "sigma",
    "thermal_occupation",
    "total_excitation",
]

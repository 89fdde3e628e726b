"""Exception types raised by the simulation stack."""


class BilindError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(BilindError):
    """Operator shapes are incompatible or outside supported limits."""


class NonHermitianError(BilindError):
    """An operator that must be Hermitian is not (within tolerance)."""


class ConvergenceError(BilindError):
    """An iterative routine failed to converge within its sweep budget."""


class SingularMatrixError(BilindError):
    """A linear system is numerically singular."""


class DegenerateSteadyStateError(BilindError):
    """The constrained steady-state system has no unique solution."""


class IntegrationDivergedError(BilindError):
    """Time integration lost trace or positivity beyond repair."""


class InvalidStateError(BilindError):
    """A matrix passed as a density matrix violates its invariants."""


class ConfigError(BilindError):
    """Scenario or grid parameters violate their invariants."""

"""Fixed-step RK4 integration of the master equation with observable recording."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from . import linalg, models, operators
from .errors import (
    ConfigError,
    DimensionError,
    IntegrationDivergedError,
    InvalidStateError,
    NonHermitianError,
)
from .liouvillian import Generator

# Grid step must divide the span to this absolute slack.
GRID_DIVISIBILITY_TOL = 1e-9

# Per-sample health checks: hard failure thresholds ("integration diverged"),
# and the band inside which the trace is silently renormalized.
TRACE_DIVERGENCE_TOL = 1e-6
TRACE_RENORM_MIN = 1e-12
DEFAULT_POSITIVITY_TOL = 1e-6

# Initial-state admission thresholds.
STATE_TRACE_TOL = 1e-10
STATE_POSITIVITY_TOL = 1e-10

# Expectation values of Hermitian observables must be real to this tolerance.
EXPECT_IMAG_TOL = 1e-8


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid; samples land on every step."""

    t_end: float
    dt: float
    t_start: float = 0.0

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ConfigError("t_end must exceed t_start")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        span = self.t_end - self.t_start
        n = round(span / self.dt)
        if n < 1 or abs(n * self.dt - span) > GRID_DIVISIBILITY_TOL:
            raise ConfigError(
                f"dt = {self.dt} does not divide the span {span} "
                f"(remainder {abs(n * self.dt - span):.3e})"
            )

    @property
    def n_steps(self) -> int:
        return round((self.t_end - self.t_start) / self.dt)

    def times(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class Observable:
    """A named operator whose expectation is tracked along the trajectory."""

    name: str
    operator: np.ndarray


@dataclass
class Trajectory:
    """Sampled expectation values plus the scenario echo that produced them."""

    times: np.ndarray
    values: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, series in self.values.items():
            if len(series) != len(self.times):
                raise DimensionError(f"series {name!r} length mismatch")
            if not np.all(np.isfinite(series)):
                raise InvalidStateError(f"series {name!r} contains non-finite samples")


def expect(obs: Observable, rho: np.ndarray) -> float:
    """Re tr(O rho), rejecting a significant imaginary part."""
    op = linalg.as_operator(obs.operator)
    rho = linalg.as_operator(rho)
    if op.shape[0] != rho.shape[0]:
        raise DimensionError(
            f"observable dim {op.shape[0]} does not match state dim {rho.shape[0]}"
        )
    val = complex(np.einsum("ij,ji->", op, rho))
    if abs(val.imag) > EXPECT_IMAG_TOL:
        raise NonHermitianError(
            f"<{obs.name}> has imaginary part {val.imag:.3e}; state lost Hermiticity"
        )
    return val.real


def validate_density_matrix(rho: np.ndarray, tag: str = "state") -> np.ndarray:
    """Admission check: unit trace, Hermitian, positive within tolerance."""
    rho = linalg.as_operator(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise InvalidStateError(f"{tag} trace {tr} differs from 1 beyond {STATE_TRACE_TOL:.0e}")
    if linalg.hermiticity_defect(rho) > linalg.HERMITIAN_INPUT_TOL:
        raise InvalidStateError(f"{tag} is not Hermitian")
    if not linalg.min_eigenvalue_above(rho, STATE_POSITIVITY_TOL):
        raise InvalidStateError(f"{tag} has an eigenvalue below -{STATE_POSITIVITY_TOL:.0e}")
    return rho


def _observable_evaluator(obs: Observable, dim: int) -> Callable[[np.ndarray], float]:
    op = linalg.as_operator(obs.operator)
    if op.shape[0] != dim:
        raise DimensionError(
            f"observable {obs.name!r} dim {op.shape[0]} does not match generator dim {dim}"
        )
    off_diag = op - np.diag(np.diag(op))
    if not off_diag.any() and not np.diag(op).imag.any():
        diag = np.ascontiguousarray(np.diag(op).real)

        def eval_diag(rho: np.ndarray) -> float:
            return float(diag @ rho.diagonal().real)

        return eval_diag

    op_c = np.ascontiguousarray(op)
    name = obs.name

    def eval_general(rho: np.ndarray) -> float:
        val = complex(np.einsum("ij,ji->", op_c, rho))
        if abs(val.imag) > EXPECT_IMAG_TOL:
            raise NonHermitianError(
                f"<{name}> has imaginary part {val.imag:.3e}; state lost Hermiticity"
            )
        return val.real

    return eval_general


def integrate(
    gen: Generator,
    rho0: np.ndarray,
    grid: TimeGrid,
    observables: Sequence[Observable],
    *,
    positivity_tol: float = DEFAULT_POSITIVITY_TOL,
    on_sample: Callable[[int, float, np.ndarray], None] | None = None,
    metadata: dict | None = None,
) -> Trajectory:
    """Propagate rho0 with classic RK4, sampling observables at every grid point.

    The state is re-Hermitized after each step; the trace is renormalized when
    it drifts inside (TRACE_RENORM_MIN, TRACE_DIVERGENCE_TOL]. Larger drift or
    an eigenvalue below -positivity_tol raises IntegrationDivergedError.
    """
    rho = np.array(validate_density_matrix(rho0, "initial state"), order="C")
    if rho.shape[0] != gen.dim:
        raise DimensionError(
            f"initial state dim {rho.shape[0]} does not match generator dim {gen.dim}"
        )
    evaluators = [_observable_evaluator(obs, gen.dim) for obs in observables]
    times = grid.times()
    series = np.empty((len(observables), len(times)))

    k1, k2, k3, k4 = (gen.new_buffer() for _ in range(4))
    stage = gen.new_buffer()
    herm = gen.new_buffer()
    scratch = gen.new_buffer()
    dt = grid.dt

    def check_and_record(idx: int) -> None:
        nonlocal rho
        tr = rho.trace().real
        drift = abs(tr - 1.0)
        if drift > TRACE_DIVERGENCE_TOL:
            raise IntegrationDivergedError(
                f"integration diverged; reduce dt (trace drift {drift:.3e} at t = {times[idx]:g})"
            )
        if drift > TRACE_RENORM_MIN:
            rho *= 1.0 / tr
        if not linalg.min_eigenvalue_above(rho, positivity_tol, scratch):
            raise IntegrationDivergedError(
                f"integration diverged; reduce dt (eigenvalue below -{positivity_tol:.0e} "
                f"at t = {times[idx]:g})"
            )
        for row, ev in enumerate(evaluators):
            series[row, idx] = ev(rho)
        if on_sample is not None:
            on_sample(idx, float(times[idx]), rho)

    # single-threaded BLAS here: the per-sample Cholesky otherwise leaves
    # spin-waiting worker threads that starve the stepping kernel, and these
    # matrix sizes gain nothing from BLAS threads anyway
    with threadpool_limits(limits=1, user_api="blas"):
        check_and_record(0)
        for step in range(grid.n_steps):
            gen.apply_into(rho, k1)
            np.multiply(k1, 0.5 * dt, out=stage)
            stage += rho
            gen.apply_into(stage, k2)
            np.multiply(k2, 0.5 * dt, out=stage)
            stage += rho
            gen.apply_into(stage, k3)
            np.multiply(k3, dt, out=stage)
            stage += rho
            gen.apply_into(stage, k4)
            k1 *= dt / 6.0
            rho += k1
            k2 *= dt / 3.0
            rho += k2
            k3 *= dt / 3.0
            rho += k3
            k4 *= dt / 6.0
            rho += k4
            # re-Hermitize: cheap insurance against accumulated asymmetry
            np.copyto(herm, rho.T)
            np.conjugate(herm, out=herm)
            rho += herm
            rho *= 0.5
            check_and_record(step + 1)

    values = {obs.name: series[row].copy() for row, obs in enumerate(observables)}
    return Trajectory(times=times, values=values, metadata=dict(metadata or {}))


def occupation_observables(spec: models.SystemSpec) -> list[Observable]:
    """The two per-subsystem occupation observables, in reporting order.

    qq -> <sigma_+ sigma_-> of qubits 1, 2; oo -> <a^dag a>, <b^dag b>;
    qo -> <a^dag a> (cavity) then <sigma_+ sigma_-> (qubit).
    """
    space = spec.space()
    first = operators.lift(operators.occupation(space.first), "first", space)
    second = operators.lift(operators.occupation(space.second), "second", space)
    if spec.system == "qo":
        return [Observable("n1", second), Observable("n2", first)]
    return [Observable("n1", first), Observable("n2", second)]


def build_generator(spec: models.SystemSpec, bath: models.BathSpec) -> Generator:
    return Generator(models.build_hamiltonian(spec), models.build_collapse_channels(spec, bath))


def run_scenario(
    spec: models.SystemSpec,
    bath: models.BathSpec,
    grid: TimeGrid,
    *,
    rho0: np.ndarray | None = None,
    observables: Sequence[Observable] | None = None,
    positivity_tol: float = DEFAULT_POSITIVITY_TOL,
    on_sample: Callable[[int, float, np.ndarray], None] | None = None,
) -> Trajectory:
    """Build the scenario's generator and integrate from the joint ground state."""
    gen = build_generator(spec, bath)
    if rho0 is None:
        rho0 = operators.ground_state(spec.space())
    if observables is None:
        observables = occupation_observables(spec)
    metadata = {
        "system": spec.system,
        "rwa": spec.rwa,
        "omega1": spec.omega1,
        "omega2": spec.omega2,
        "g": spec.g,
        "fock_dim": spec.fock_dim,
        "gamma": bath.gamma,
        "kappa": bath.kappa,
        "temperature": bath.temperature,
        "nbar_mapping": bath.nbar_mapping,
        "t_start": grid.t_start,
        "t_end": grid.t_end,
        "dt": grid.dt,
    }
    return integrate(
        gen,
        rho0,
        grid,
        observables,
        positivity_tol=positivity_tol,
        on_sample=on_sample,
        metadata=metadata,
    )


def convergence_probe(
    spec: models.SystemSpec,
    bath: models.BathSpec,
    grid: TimeGrid,
    d_low: int,
    d_high: int,
) -> float:
    """Max trajectory deviation between two boson truncations of one scenario."""
    if spec.system == "qq":
        raise ConfigError("not applicable: qubit-qubit system has no boson slot")
    if not d_high > d_low:
        raise ConfigError(f"d_high must exceed d_low, got {d_low}, {d_high}")
    lo = run_scenario(dataclasses.replace(spec, fock_dim=d_low), bath, grid)
    hi = run_scenario(dataclasses.replace(spec, fock_dim=d_high), bath, grid)
    dev = 0.0
    for name in lo.values:
        dev = max(dev, float(np.abs(lo.values[name] - hi.values[name]).max()))
    return dev

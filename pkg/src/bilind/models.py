"""The three bipartite systems: Hamiltonians and thermal collapse channels.

Rate conventions follow the per-system master equations: for qubit-qubit,
gamma damps slot one and kappa slot two; for oscillator-oscillator, kappa
damps oscillator a (slot one) and gamma oscillator b; for qubit-oscillator,
gamma damps the qubit (slot one) and kappa the cavity. All published scenarios
use gamma = kappa, where the distinction is moot.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg, operators
from .errors import ConfigError

SYSTEMS = ("qq", "oo", "qo")
NBAR_MAPPINGS = ("bose", "direct")

# Standard observables stay meaningful only for weak coupling.
COUPLING_RATIO_LIMIT = 0.3

DEFAULT_FOCK_DIM = 20


class CouplingRegimeWarning(UserWarning):
    """Coupling ratio g/omega beyond the validity bound of the observables."""


@dataclass(frozen=True)
class SystemSpec:
    """Which bipartite system to build, and its Hamiltonian parameters.

    ``omega1``/``omega2`` are the slot-one/slot-two angular frequencies (for
    qubit-oscillator: qubit then cavity). ``fock_dim`` truncates each boson
    slot.
    """

    system: str
    omega1: float = 1.0
    omega2: float = 1.0
    g: float = 0.2
    rwa: bool = False
    fock_dim: int = DEFAULT_FOCK_DIM

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ConfigError(f"system must be one of {SYSTEMS}, got {self.system!r}")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ConfigError("frequencies must be positive")
        if self.g < 0:
            raise ConfigError("coupling g must be non-negative")
        if self.fock_dim < 2:
            raise ConfigError("fock_dim must be >= 2")
        ratio = self.g / min(self.omega1, self.omega2)
        if ratio > COUPLING_RATIO_LIMIT:
            warnings.warn(
                f"g/omega = {ratio:.3g} exceeds {COUPLING_RATIO_LIMIT}; occupation "
                "observables are unreliable in this coupling regime",
                CouplingRegimeWarning,
                stacklevel=2,
            )

    def space(self) -> operators.CompositeSpace:
        if self.system == "qq":
            return operators.CompositeSpace(operators.qubit(), operators.qubit())
        if self.system == "oo":
            return operators.CompositeSpace(
                operators.boson(self.fock_dim), operators.boson(self.fock_dim)
            )
        return operators.CompositeSpace(operators.qubit(), operators.boson(self.fock_dim))


@dataclass(frozen=True)
class BathSpec:
    """Bath rates and temperature (in frequency units, hbar = k_B = 1)."""

    gamma: float = 0.01
    kappa: float = 0.01
    temperature: float = 0.0
    nbar_mapping: str = "bose"

    def __post_init__(self):
        if self.gamma < 0 or self.kappa < 0:
            raise ConfigError("rates must be non-negative")
        if self.temperature < 0:
            raise ConfigError("temperature must be non-negative")
        if self.nbar_mapping not in NBAR_MAPPINGS:
            raise ConfigError(
                f"nbar_mapping must be one of {NBAR_MAPPINGS}, got {self.nbar_mapping!r}"
            )


@dataclass(frozen=True)
class CollapseChannel:
    """One Lindblad term: a rate and an (unscaled) operator on the composite space."""

    rate: float
    operator: np.ndarray

    def __post_init__(self):
        if self.rate < 0:
            raise ConfigError("channel rate must be non-negative")


def thermal_occupation(omega: float, temperature: float, mapping: str = "bose") -> float:
    """Mean bath excitation number at frequency omega.

    "bose": 1/(exp(omega/T) - 1), zero at T = 0. "direct": reads the
    temperature itself in frequency units, N = T/omega.
    """
    if omega <= 0:
        raise ConfigError("omega must be positive")
    if temperature < 0:
        raise ConfigError("temperature must be non-negative")
    if mapping == "direct":
        return temperature / omega
    if mapping != "bose":
        raise ConfigError(f"unknown mapping {mapping!r}")
    if temperature == 0.0:
        return 0.0
    x = omega / temperature
    if x > 700.0:  # exp overflow guard; occupation is zero anyway
        return 0.0
    return 1.0 / math.expm1(x)


def _slot_rates(spec: SystemSpec, bath: BathSpec) -> tuple[float, float]:
    if spec.system == "oo":
        return bath.kappa, bath.gamma
    return bath.gamma, bath.kappa


def _interaction_quadrature(sub: operators.Subsystem) -> np.ndarray:
    """The operator entering the full (non-RWA) coupling: sigma_x or a + a^dag."""
    low = operators.lowering(sub)
    return low + linalg.dagger(low)


def build_hamiltonian(spec: SystemSpec) -> np.ndarray:
    """Composite-space Hamiltonian of the chosen system, hbar = 1."""
    space = spec.space()
    h = np.zeros((space.dim, space.dim), dtype=complex)
    for slot, omega in (("first", spec.omega1), ("second", spec.omega2)):
        sub = space.subsystem(slot)
        if sub.kind == "qubit":
            bare = 0.5 * omega * operators.sigma("z")
        else:
            bare = omega * operators.occupation(sub)
        h += operators.lift(bare, slot, space)
    if spec.rwa:
        low1 = operators.lowering(space.first)
        low2 = operators.lowering(space.second)
        h += spec.g * (
            linalg.kron(linalg.dagger(low1), low2)
            + linalg.kron(low1, linalg.dagger(low2))
        )
    else:
        h += spec.g * linalg.kron(
            _interaction_quadrature(space.first), _interaction_quadrature(space.second)
        )
    return h


def build_collapse_channels(spec: SystemSpec, bath: BathSpec) -> list[CollapseChannel]:
    """Four thermal channels: per slot, a raising term with rate r*N and a
    lowering term with rate r*(N+1), N evaluated at the slot's bare frequency.

    At zero temperature the raising channels carry rate zero.
    """
    space = spec.space()
    rate1, rate2 = _slot_rates(spec, bath)
    channels: list[CollapseChannel] = []
    for slot, base_rate, omega in (
        ("first", rate1, spec.omega1),
        ("second", rate2, spec.omega2),
    ):
        sub = space.subsystem(slot)
        low = operators.lowering(sub)
        n_th = thermal_occupation(omega, bath.temperature, bath.nbar_mapping)
        channels.append(
            CollapseChannel(base_rate * n_th, operators.lift(linalg.dagger(low), slot, space))
        )
        channels.append(
            CollapseChannel(base_rate * (n_th + 1.0), operators.lift(low, slot, space))
        )
    return channels

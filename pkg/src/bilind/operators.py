"""Elementary qubit / truncated-boson operators and their composite lifts.

Basis conventions (fixed package-wide):
  * qubit: |e> = (1, 0), |g> = (0, 1), so sigma_z = diag(1, -1) and
    <sigma_+ sigma_-> is the excited-state population;
  * boson: Fock states |0> ... |d-1>;
  * composite: slot one (x) slot two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import ConfigError, DimensionError


@dataclass(frozen=True)
class Subsystem:
    """One tensor-factor: a qubit or a boson mode truncated to ``dim`` levels."""

    kind: str  # "qubit" | "boson"
    dim: int

    def __post_init__(self):
        if self.kind not in ("qubit", "boson"):
            raise ConfigError(f"unknown subsystem kind {self.kind!r}")
        if self.kind == "qubit" and self.dim != 2:
            raise ConfigError("a qubit has dimension 2")
        if self.kind == "boson" and self.dim < 2:
            raise ConfigError(f"boson truncation must be >= 2, got {self.dim}")


def qubit() -> Subsystem:
    return Subsystem("qubit", 2)


def boson(truncation: int) -> Subsystem:
    return Subsystem("boson", truncation)


@dataclass(frozen=True)
class CompositeSpace:
    """Bipartite Hilbert space, ordered as first (x) second."""

    first: Subsystem
    second: Subsystem

    @property
    def dim(self) -> int:
        return self.first.dim * self.second.dim

    def subsystem(self, slot: str) -> Subsystem:
        if slot not in ("first", "second"):
            raise ConfigError(f"slot must be 'first' or 'second', got {slot!r}")
        return self.first if slot == "first" else self.second


def sigma(kind: str) -> np.ndarray:
    """Pauli / ladder matrices on the qubit: kind in {x, z, plus, minus}."""
    if kind == "x":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if kind == "plus":
        return np.array([[0, 1], [0, 0]], dtype=complex)
    if kind == "minus":
        return np.array([[0, 0], [1, 0]], dtype=complex)
    raise ConfigError(f"unknown Pauli kind {kind!r}")


def annihilation(truncation: int) -> np.ndarray:
    """Truncated boson annihilation operator, a[n, n+1] = sqrt(n+1)."""
    if truncation < 2:
        raise ConfigError(f"boson truncation must be >= 2, got {truncation}")
    return np.diag(np.sqrt(np.arange(1.0, truncation)), 1).astype(complex)


def lowering(sub: Subsystem) -> np.ndarray:
    """The de-exciting operator of a subsystem: sigma_- or a."""
    return sigma("minus") if sub.kind == "qubit" else annihilation(sub.dim)


def occupation(sub: Subsystem) -> np.ndarray:
    """Number-like operator: sigma_+ sigma_- for a qubit, a^dag a for a boson.

    Built as an exact diagonal (sqrt(n)*sqrt(n) would pick up rounding).
    """
    if sub.kind == "qubit":
        return np.diag([1.0, 0.0]).astype(complex)
    return np.diag(np.arange(float(sub.dim))).astype(complex)


def lift(op: np.ndarray, slot: str, space: CompositeSpace) -> np.ndarray:
    """Embed a single-subsystem operator into the composite space."""
    op = linalg.as_operator(op)
    sub = space.subsystem(slot)
    if op.shape[0] != sub.dim:
        raise DimensionError(
            f"operator dim {op.shape[0]} does not match {slot} subsystem dim {sub.dim}"
        )
    if slot == "first":
        return linalg.kron(op, np.eye(space.second.dim, dtype=complex))
    return linalg.kron(np.eye(space.first.dim, dtype=complex), op)


def total_excitation(space: CompositeSpace) -> np.ndarray:
    """Sum of the lifted occupation operators of both slots."""
    return lift(occupation(space.first), "first", space) + lift(
        occupation(space.second), "second", space
    )


def ground_index(sub: Subsystem) -> int:
    """Basis index of the zero-excitation state: |g> for qubits, |0> for bosons."""
    return 1 if sub.kind == "qubit" else 0


def ground_state(space: CompositeSpace) -> np.ndarray:
    """Projector onto the joint zero-excitation state |00>."""
    idx = ground_index(space.first) * space.second.dim + ground_index(space.second)
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def basis_state(space: CompositeSpace, i: int, j: int) -> np.ndarray:
    """Projector onto the product basis state with indices (i, j)."""
    if not (0 <= i < space.first.dim and 0 <= j < space.second.dim):
        raise DimensionError(f"basis indices ({i}, {j}) out of range")
    idx = i * space.second.dim + j
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[idx, idx] = 1.0
    return rho

"""Lindblad generator: direct application, matrix form, steady state.

Vectorization is column-stacking throughout: vec(rho) stacks the columns of
rho, so vec(A rho B) = (B^T kron A) vec(rho).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.sparse

from . import linalg
from ._kernels import HAVE_NUMBA, KernelPack, permutation_form
from .errors import (
    DegenerateSteadyStateError,
    DimensionError,
    NonHermitianError,
    SingularMatrixError,
)
from .models import CollapseChannel

# Hamiltonian must be Hermitian to this absolute max-norm defect.
HAMILTONIAN_HERM_TOL = 1e-13

# Explicit superoperators are capped: D^2 x D^2 entries grow as D^4.
MAX_SUPEROP_DIM = 64

# Below this dimension plain dense products beat the fused kernel.
KERNEL_MIN_DIM = 48

# steady_state acceptance: residual of the generator at the solution and
# tolerated negative eigenvalue excursion.
STEADY_RESIDUAL_TOL = 1e-8
STEADY_POSITIVITY_TOL = 1e-8


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


class Generator:
    """Right-hand side of the master equation for one Hamiltonian + channel set.

    Immutable after construction; caches the effective non-Hermitian drift
    G = -iH - 1/2 sum_n rate_n C_n^dag C_n and, for large spaces, a fused
    sparse kernel.
    """

    def __init__(self, hamiltonian: np.ndarray, channels: Sequence[CollapseChannel]):
        h = linalg.as_operator(hamiltonian)
        defect = linalg.hermiticity_defect(h)
        if defect > HAMILTONIAN_HERM_TOL:
            raise NonHermitianError(
                f"Hamiltonian defect {defect:.3e} > {HAMILTONIAN_HERM_TOL:.0e}"
            )
        self.dim = h.shape[0]
        self.hamiltonian = h
        self.channels = list(channels)
        for ch in self.channels:
            op = linalg.as_operator(ch.operator)
            if op.shape[0] != self.dim:
                raise DimensionError(
                    f"channel dim {op.shape[0]} does not match Hamiltonian dim {self.dim}"
                )

        g_eff = -1j * h
        self._scaled: list[tuple[np.ndarray, np.ndarray]] = []
        for ch in self.channels:
            if ch.rate == 0.0:
                continue
            c = np.asarray(ch.operator, dtype=complex)
            g_eff = g_eff - 0.5 * ch.rate * (c.conj().T @ c)
            cs = np.sqrt(ch.rate) * c
            self._scaled.append((cs, cs.conj().T.copy()))
        self._g = np.ascontiguousarray(g_eff)
        self._g_dag = np.ascontiguousarray(g_eff.conj().T)

        self._pack = None
        if HAVE_NUMBA and self.dim >= KERNEL_MIN_DIM:
            perms = [permutation_form(cs) for cs, _ in self._scaled]
            if all(p is not None for p in perms):
                self._pack = KernelPack(scipy.sparse.csr_matrix(self._g), perms)

    def new_buffer(self) -> np.ndarray:
        return np.empty((self.dim, self.dim), dtype=complex)

    def apply_into(self, rho: np.ndarray, out: np.ndarray) -> np.ndarray:
        """Evaluate the generator at ``rho`` into ``out`` (no validation)."""
        if self._pack is not None:
            return self._pack.apply(rho, out)
        np.matmul(self._g, rho, out=out)
        out += rho @ self._g_dag
        for cs, cs_dag in self._scaled:
            out += (cs @ rho) @ cs_dag
        return out

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """-i[H, rho] + sum_n rate_n (C rho C^dag - 1/2 {C^dag C, rho})."""
        rho = linalg.as_operator(rho)
        if rho.shape[0] != self.dim:
            raise DimensionError(
                f"state dim {rho.shape[0]} does not match generator dim {self.dim}"
            )
        return self.apply_into(np.ascontiguousarray(rho), self.new_buffer())

    def to_matrix(self) -> np.ndarray:
        """Explicit superoperator L with L vec(rho) = vec(apply(rho))."""
        d = self.dim
        if d > MAX_SUPEROP_DIM:
            raise DimensionError(
                f"superoperator dim {d} > {MAX_SUPEROP_DIM}; use apply() directly"
            )
        eye = scipy.sparse.identity(d, dtype=complex, format="csr")
        h = scipy.sparse.csr_matrix(self.hamiltonian)
        l_op = -1j * (scipy.sparse.kron(eye, h) - scipy.sparse.kron(h.T, eye))
        for ch in self.channels:
            if ch.rate == 0.0:
                continue
            c = scipy.sparse.csr_matrix(np.asarray(ch.operator, dtype=complex))
            cdc = (c.conj().T @ c).tocsr()
            l_op = l_op + ch.rate * (
                scipy.sparse.kron(c.conj(), c)
                - 0.5 * scipy.sparse.kron(eye, cdc)
                - 0.5 * scipy.sparse.kron(cdc.T, eye)
            )
        return l_op.toarray()

    def steady_state(self) -> np.ndarray:
        """Unique trace-one kernel element of the generator.

        Solves L vec(rho) = 0 with the first row of L replaced by the
        vectorized trace constraint, then symmetrizes and validates.
        """
        if not any(ch.rate > 0.0 for ch in self.channels):
            raise DegenerateSteadyStateError(
                "no dissipation: every closed-system eigenprojector is steady"
            )
        d = self.dim
        l_op = self.to_matrix()
        l_op[0, :] = 0.0
        l_op[0, np.arange(d) * (d + 1)] = 1.0  # diagonal positions of vec(rho)
        b = np.zeros(d * d, dtype=complex)
        b[0] = 1.0
        try:
            x = linalg.solve_linear(l_op, b)
        except SingularMatrixError as exc:
            raise DegenerateSteadyStateError(
                f"steady-state system is singular (degenerate null space): {exc}"
            ) from exc
        rho = unvec(x, d)
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > STEADY_RESIDUAL_TOL:
            raise DegenerateSteadyStateError(f"steady-state trace {tr} is not 1")
        residual = float(np.abs(self.apply(rho)).max())
        if residual > STEADY_RESIDUAL_TOL:
            raise DegenerateSteadyStateError(
                f"generator residual {residual:.3e} > {STEADY_RESIDUAL_TOL:.0e} "
                "at the candidate steady state"
            )
        eigs = linalg.hermitian_eigenvalues(rho)
        if eigs[0] < -STEADY_POSITIVITY_TOL:
            raise DegenerateSteadyStateError(
                f"steady state not positive: min eigenvalue {eigs[0]:.3e}"
            )
        return rho

"""Dense complex linear-algebra kernel used by the rest of the package.

Everything operates on square complex ``numpy`` arrays. Tolerances are module
constants so tests can tighten or loosen them.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    DimensionError,
    NonHermitianError,
    SingularMatrixError,
)

# Largest composite dimension a Kronecker product may produce (guards the
# D^2-entry allocation, not integer overflow).
MAX_KRON_DIM = 4096

# Input must satisfy ||A - A^dag||_max <= this to count as Hermitian.
HERMITIAN_INPUT_TOL = 1e-10

# Jacobi eigensolver: converged when off-diagonal Frobenius norm drops below
# JACOBI_REL_TOL * ||A||_F; gives up after MAX_JACOBI_SWEEPS cyclic sweeps.
JACOBI_REL_TOL = 1e-12
MAX_JACOBI_SWEEPS = 100

# solve_linear: a pivot below PIVOT_REL_TOL * max|A| marks the system
# singular; the solution must satisfy the residual bound below.
PIVOT_REL_TOL = 1e-13
RESIDUAL_REL_TOL = 1e-9


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise DimensionError("matrix contains non-finite entries")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of two operators on the same space."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product A (x) B with result dimension dim(A)*dim(B)."""
    a = as_operator(a)
    b = as_operator(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_KRON_DIM:
        raise DimensionError(
            f"Kronecker product dimension {dim} exceeds limit {MAX_KRON_DIM}"
        )
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a, dtype=complex).conj().T.copy()


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[A, B] = AB - BA."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b - b @ a


def trace(a: np.ndarray) -> complex:
    """Sum of the diagonal."""
    return complex(np.trace(as_operator(a)))


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-norm distance from being Hermitian, ||A - A^dag||_max."""
    a = np.asarray(a, dtype=complex)
    return float(np.abs(a - a.conj().T).max())


def hermitian_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi sweeps.

    Complex rotations zero one off-diagonal pair at a time; a sweep visits
    every (p, q) pair once. Robust for the small matrices this package needs.
    """
    m = as_operator(a).copy()
    if hermiticity_defect(m) > HERMITIAN_INPUT_TOL:
        raise NonHermitianError(
            f"input is not Hermitian: defect {hermiticity_defect(m):.3e} "
            f"> {HERMITIAN_INPUT_TOL:.0e}"
        )
    n = m.shape[0]
    if n == 1:
        return np.array([m[0, 0].real])
    norm = float(np.linalg.norm(m))
    if norm == 0.0:
        return np.zeros(n)

    for _ in range(MAX_JACOBI_SWEEPS):
        off = np.linalg.norm(m - np.diag(np.diag(m)))
        if off < JACOBI_REL_TOL * norm:
            return np.sort(np.diag(m).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = m[p, q]
                ab = abs(beta)
                if ab == 0.0:
                    continue
                phase = beta / ab
                tau = (m[q, q].real - m[p, p].real) / (2.0 * ab)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rows p, q of U^dag M, then columns p, q of (...) U
                rp = c * m[p, :] - s * phase * m[q, :]
                rq = s * np.conj(phase) * m[p, :] + c * m[q, :]
                m[p, :] = rp
                m[q, :] = rq
                cp = c * m[:, p] - s * np.conj(phase) * m[:, q]
                cq = s * phase * m[:, p] + c * m[:, q]
                m[:, p] = cp
                m[:, q] = cq
    raise ConvergenceError(
        f"Jacobi eigensolver did not converge in {MAX_JACOBI_SWEEPS} sweeps"
    )


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b by LU with partial pivoting, with a pivot/residual guard."""
    a = as_operator(a)
    b = np.asarray(b, dtype=complex)
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise DimensionError(
            f"right-hand side length {b.shape} does not match dim {a.shape[0]}"
        )
    scale = float(np.abs(a).max())
    if scale == 0.0:
        raise SingularMatrixError("coefficient matrix is zero")
    with warnings.catch_warnings():
        # exact-zero pivots are reported via SingularMatrixError below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    min_pivot = float(np.abs(np.diag(lu)).min())
    if min_pivot < PIVOT_REL_TOL * scale:
        raise SingularMatrixError(
            f"numerically singular: pivot {min_pivot:.3e} < "
            f"{PIVOT_REL_TOL:.0e} * max|A| ({scale:.3e})"
        )
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    resid = float(np.abs(a @ x - b).max())
    bound = RESIDUAL_REL_TOL * max(1.0, float(np.abs(b).max()))
    if resid > bound:
        raise SingularMatrixError(
            f"solution residual {resid:.3e} exceeds bound {bound:.3e}"
        )
    return x


def min_eigenvalue_above(a: np.ndarray, floor: float, scratch: np.ndarray | None = None) -> bool:
    """Certify min eig(A) > -floor for Hermitian A via a Cholesky attempt.

    A + floor*I is positive definite iff every eigenvalue of A exceeds
    -floor; zpotrf is much cheaper than a full eigensolve and is used on the
    integration hot path. ``scratch`` (same shape as A) avoids allocations.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if scratch is None:
        scratch = np.empty_like(a)
    np.copyto(scratch, a)
    scratch.flat[:: n + 1] += floor
    try:
        scipy.linalg.cholesky(scratch, lower=True, overwrite_a=True, check_finite=False)
    except scipy.linalg.LinAlgError:
        return False
    return True

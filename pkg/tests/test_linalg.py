import numpy as np
import pytest

from bilind import linalg
from bilind.errors import (
    DimensionError,
    NonHermitianError,
    SingularMatrixError,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
SP = np.array([[0, 1], [0, 0]], dtype=complex)
SM = np.array([[0, 0], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)

RNG = np.random.default_rng(42)


def random_complex(n):
    return RNG.standard_normal((n, n)) + 1j * RNG.standard_normal((n, n))


def random_hermitian(n):
    m = random_complex(n)
    return 0.5 * (m + m.conj().T)


class TestMatmul:
    def test_identity(self):
        np.testing.assert_array_equal(linalg.matmul(I2, SX), SX)

    def test_raising_times_lowering(self):
        np.testing.assert_array_equal(linalg.matmul(SP, SM), np.diag([1.0, 0.0]))

    def test_pauli_involution(self):
        np.testing.assert_array_equal(linalg.matmul(SX, SX), I2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.matmul(I2, np.eye(3))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            linalg.matmul(np.ones((2, 3)), np.ones((3, 3)))

    def test_rejects_nan(self):
        bad = np.array([[np.nan, 0], [0, 0]], dtype=complex)
        with pytest.raises(DimensionError):
            linalg.matmul(bad, I2)


class TestKron:
    def test_identity_pair(self):
        np.testing.assert_array_equal(linalg.kron(I2, I2), np.eye(4))

    def test_sz_with_identity(self):
        np.testing.assert_array_equal(linalg.kron(SZ, I2), np.diag([1.0, 1.0, -1.0, -1.0]))

    def test_sx_sx_antidiagonal(self):
        # expanded by hand: entries (i*2+k, j*2+l) = sx[i,j]*sx[k,l]
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 3] = expected[1, 2] = expected[2, 1] = expected[3, 0] = 1.0
        np.testing.assert_array_equal(linalg.kron(SX, SX), expected)

    def test_dimension_guard(self):
        with pytest.raises(DimensionError):
            linalg.kron(np.eye(100), np.eye(50))

    def test_associativity(self):
        for _ in range(5):
            a, b, c = random_complex(2), random_complex(3), random_complex(2)
            left = linalg.kron(linalg.kron(a, b), c)
            right = linalg.kron(a, linalg.kron(b, c))
            assert np.abs(left - right).max() <= 1e-14

    def test_mixed_product(self):
        for _ in range(5):
            a, c = random_complex(2), random_complex(2)
            b, d = random_complex(3), random_complex(3)
            left = linalg.kron(a, b) @ linalg.kron(c, d)
            right = linalg.kron(a @ c, b @ d)
            assert np.abs(left - right).max() <= 1e-12


class TestDagger:
    def test_sigma_plus(self):
        np.testing.assert_array_equal(linalg.dagger(SP), SM)

    def test_involution(self):
        a = random_complex(5)
        np.testing.assert_array_equal(linalg.dagger(linalg.dagger(a)), a)

    def test_creation_entries(self):
        a3 = np.diag(np.sqrt([1.0, 2.0]), 1).astype(complex)
        created = linalg.dagger(a3)
        assert created[1, 0] == 1.0
        assert created[2, 1] == pytest.approx(np.sqrt(2.0))

    def test_product_reversal(self):
        for _ in range(5):
            a, b = random_complex(4), random_complex(4)
            lhs = linalg.dagger(a @ b)
            rhs = linalg.dagger(b) @ linalg.dagger(a)
            assert np.abs(lhs - rhs).max() <= 1e-13


class TestCommutator:
    def test_ladder_pair_gives_sz(self):
        np.testing.assert_array_equal(linalg.commutator(SP, SM), SZ)

    def test_self_commutator_vanishes(self):
        a = random_complex(4)
        np.testing.assert_array_equal(linalg.commutator(a, a), np.zeros((4, 4)))

    def test_truncated_ladder(self):
        # [a, a^dag] on a 4-level space: identity except the truncation corner
        a = np.diag(np.sqrt([1.0, 2.0, 3.0]), 1).astype(complex)
        expected = np.diag([1.0, 1.0, 1.0, -3.0])
        np.testing.assert_allclose(linalg.commutator(a, linalg.dagger(a)), expected, atol=1e-15)

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.commutator(I2, np.eye(3))


class TestTrace:
    def test_identity(self):
        assert linalg.trace(np.eye(4)) == 4.0

    def test_sz(self):
        assert linalg.trace(SZ) == 0.0

    def test_number_like(self):
        assert linalg.trace(SP @ SM) == 1.0

    def test_cyclic(self):
        for _ in range(5):
            a, b = random_complex(5), random_complex(5)
            assert abs(linalg.trace(a @ b) - linalg.trace(b @ a)) <= 1e-12


class TestHermitianEigenvalues:
    def test_sz(self):
        np.testing.assert_allclose(linalg.hermitian_eigenvalues(SZ), [-1.0, 1.0])

    def test_sx(self):
        # characteristic polynomial of [[0,1],[1,0]]: lambda^2 - 1
        np.testing.assert_allclose(linalg.hermitian_eigenvalues(SX), [-1.0, 1.0], atol=1e-14)

    def test_diagonal_sorting(self):
        np.testing.assert_allclose(
            linalg.hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1.0, 2.0, 3.0]
        )

    def test_against_lapack(self):
        for n in (2, 5, 12):
            m = random_hermitian(n)
            mine = linalg.hermitian_eigenvalues(m)
            lapack = np.linalg.eigvalsh(m)
            np.testing.assert_allclose(mine, lapack, atol=1e-10)

    def test_eigenvalue_sum_is_trace(self):
        for _ in range(5):
            m = random_hermitian(6)
            eigs = linalg.hermitian_eigenvalues(m)
            assert abs(eigs.sum() - linalg.trace(m).real) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            linalg.hermitian_eigenvalues(SP)

    def test_zero_matrix(self):
        np.testing.assert_array_equal(linalg.hermitian_eigenvalues(np.zeros((3, 3))), np.zeros(3))


class TestSolveLinear:
    def test_identity(self):
        b = np.array([1.0, 2.0j, -3.0])
        np.testing.assert_allclose(linalg.solve_linear(np.eye(3), b), b)

    def test_diagonal(self):
        x = linalg.solve_linear(np.diag([2.0, 4.0]), np.array([2.0, 8.0]))
        np.testing.assert_allclose(x, [1.0, 2.0])

    def test_random_residual(self):
        a = random_complex(8) + 8.0 * np.eye(8)  # well conditioned
        b = RNG.standard_normal(8) + 1j * RNG.standard_normal(8)
        x = linalg.solve_linear(a, b)
        resid = np.abs(a @ x - b).max()
        assert resid <= 1e-9 * max(1.0, np.abs(b).max())

    def test_singular(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
        with pytest.raises(SingularMatrixError):
            linalg.solve_linear(a, np.array([1.0, 1.0]))

    def test_zero_matrix(self):
        with pytest.raises(SingularMatrixError):
            linalg.solve_linear(np.zeros((2, 2)), np.ones(2))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.solve_linear(np.eye(3), np.ones(2))


class TestMinEigenvalueAbove:
    def test_positive_definite(self):
        assert linalg.min_eigenvalue_above(np.eye(3), 1e-8)

    def test_slightly_negative_within_floor(self):
        m = np.diag([1.0, -0.5e-8])
        assert linalg.min_eigenvalue_above(m, 1e-8)

    def test_negative_beyond_floor(self):
        m = np.diag([1.0, -1e-3])
        assert not linalg.min_eigenvalue_above(m, 1e-8)

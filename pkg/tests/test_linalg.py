"""
Tests for the dense linear algebra layer.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.core.linalg import (
    check_laplacian_sums, condition_estimate, inverse, laplacian_pseudoinverse_solve,
    lu_solve, penrose_residuals, pseudoinverse_laplacian, rank_one_downdate, solve,
    submatrix_removing, trace,
)
from src.core.resistance import laplacian
from src.exceptions import NumericalBreakdownError, ParameterError, SingularMatrixError
from tests.graphs import directed_cycle, random_strong_digraph, strong_digraphs


def _random_well_conditioned(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + n * np.eye(n)


class TestLuSolve:

    def test_identity(self):
        """Test that solving against I returns B unchanged."""
        B = np.arange(12.0).reshape(4, 3)
        np.testing.assert_array_equal(lu_solve(np.eye(4), B), B)

    def test_diagonal(self):
        """Test solving a diagonal system."""
        X = lu_solve(np.array([[2.0, 0.0], [0.0, 4.0]]), np.eye(2))
        np.testing.assert_allclose(X, np.diag([0.5, 0.25]))

    def test_residual(self):
        """Test that the residual AX - B is tiny on a well-conditioned system."""
        A = _random_well_conditioned(8, seed=3)
        B = np.random.default_rng(4).normal(size=(8, 2))
        X = lu_solve(A, B)
        assert np.abs(A @ X - B).max() <= 1e-9

    def test_singular_rejected(self):
        """Test that a singular matrix raises SingularMatrixError."""
        A = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises(SingularMatrixError):
            lu_solve(A, np.eye(2))

    def test_non_square_rejected(self):
        """Test that a non-square matrix is rejected."""
        with pytest.raises(ParameterError):
            lu_solve(np.ones((2, 3)), np.ones(2))

    def test_shape_mismatch_rejected(self):
        """Test that a right-hand side of the wrong length is rejected."""
        with pytest.raises(ParameterError):
            lu_solve(np.eye(3), np.ones(2))

    def test_solve_reports_condition(self):
        """Test that solve reports the condition estimate."""
        result = solve(np.eye(3), np.ones(3))
        assert result.condition_estimate == pytest.approx(1.0)
        assert not result.ill_conditioned

    def test_ill_conditioned_flagged_not_raised(self):
        """Test that ill-conditioning is flagged without raising."""
        A = np.array([[1.0, 1.0], [1.0, 1.0 + 2e-12]])
        result = solve(A, np.ones(2))
        assert result.ill_conditioned
        assert result.condition_estimate > 1e12

    def test_inverse_and_condition(self):
        """Test inverse and the 1-norm condition estimate."""
        A = _random_well_conditioned(6, seed=9)
        np.testing.assert_allclose(inverse(A) @ A, np.eye(6), atol=1e-10)
        assert condition_estimate(np.diag([1.0, 10.0])) == pytest.approx(10.0)


class TestPseudoinverseLaplacian:

    def test_pair(self):
        """Test the pseudoinverse of the 2-vertex Laplacian."""
        L = np.array([[1.0, -1.0], [-1.0, 1.0]])
        np.testing.assert_allclose(pseudoinverse_laplacian(L), [[0.25, -0.25], [-0.25, 0.25]], atol=1e-12)

    def test_directed_cycle3(self):
        """Test the pseudoinverse of the directed 3-cycle Laplacian."""
        L = laplacian(directed_cycle(3))
        M = pseudoinverse_laplacian(L)
        # I - P with P the forward shift: diagonal 1/3, successor 0, predecessor -1/3
        expected = np.array([
            [1 / 3, 0.0, -1 / 3],
            [-1 / 3, 1 / 3, 0.0],
            [0.0, -1 / 3, 1 / 3],
        ])
        np.testing.assert_allclose(M, expected, atol=1e-12)
        assert trace(M) == pytest.approx(1.0)

    def test_involution(self):
        """Test that the pseudoinverse of the pseudoinverse is L."""
        L = laplacian(random_strong_digraph(9, seed=21))
        M = pseudoinverse_laplacian(L)
        np.testing.assert_allclose(pseudoinverse_laplacian(M), L, atol=1e-8)

    def test_bad_sums_rejected(self):
        """Test that a matrix with nonzero row sums is rejected."""
        with pytest.raises(ParameterError, match="Not a Laplacian"):
            pseudoinverse_laplacian(np.eye(3))

    def test_condition_kept(self):
        """Test that the shifted solve keeps its condition estimate."""
        result = laplacian_pseudoinverse_solve(laplacian(directed_cycle(4)))
        assert result.condition_estimate >= 1.0
        assert not result.ill_conditioned

    @given(strong_digraphs(max_n=30))
    def test_penrose_and_ep_conditions(self, g):
        """Test the Penrose conditions, LL+ = I - J/n and zero line sums."""
        L = laplacian(g)
        M = pseudoinverse_laplacian(L)
        residuals = penrose_residuals(L, M)
        assert max(residuals.values()) <= 1e-8
        n = g.n
        np.testing.assert_allclose(L @ M, np.eye(n) - 1.0 / n, atol=1e-8)
        for A in (L, M):
            assert np.abs(A.sum(axis=0)).max() <= 1e-9
            assert np.abs(A.sum(axis=1)).max() <= 1e-9

    @given(strong_digraphs(max_n=20), st.data())
    def test_removed_vertex_inverse_identity(self, g, data):
        """Test the vertex-removed inverse against pseudoinverse entries."""
        # (L_{\k}^-1)_{ij} = L+_kk + L+_ij - L+_ik - L+_kj for i, j != k
        L = laplacian(g)
        M = pseudoinverse_laplacian(L)
        k = data.draw(st.integers(min_value=0, max_value=g.n - 1))
        sub, kept = submatrix_removing(L, [k])
        Sinv = inverse(sub)
        expected = M[k, k] + M[np.ix_(kept, kept)] - M[kept, k][:, None] - M[k, kept][None, :]
        np.testing.assert_allclose(Sinv, expected, atol=1e-8 * max(1.0, np.abs(Sinv).max()))

    @given(strong_digraphs(min_n=3, max_n=20), st.data())
    def test_submatrix_inverse_is_nonnegative(self, g, data):
        """Test that every principal-submatrix inverse is entrywise nonnegative."""
        L = laplacian(g)
        size = data.draw(st.integers(min_value=1, max_value=g.n - 1))
        X = data.draw(st.lists(st.integers(0, g.n - 1), min_size=size, max_size=size, unique=True))
        sub, _ = submatrix_removing(L, X)
        assert inverse(sub).min() >= -1e-10


class TestSubmatrixRemoving:

    def test_remove_last(self):
        """Test removing the last row and column."""
        A = np.arange(9.0).reshape(3, 3)
        sub, kept = submatrix_removing(A, [2])
        np.testing.assert_array_equal(sub, A[:2, :2])
        np.testing.assert_array_equal(kept, [0, 1])

    def test_remove_nothing(self):
        """Test that removing nothing returns the matrix."""
        A = np.arange(9.0).reshape(3, 3)
        sub, kept = submatrix_removing(A, [])
        np.testing.assert_array_equal(sub, A)

    def test_remove_two(self):
        """Test removing two rows and columns."""
        A = np.arange(16.0).reshape(4, 4)
        sub, kept = submatrix_removing(A, {0, 2})
        np.testing.assert_array_equal(sub, [[5.0, 7.0], [13.0, 15.0]])
        np.testing.assert_array_equal(kept, [1, 3])

    def test_remove_all_rejected(self):
        """Test that removing every vertex is rejected."""
        with pytest.raises(ParameterError):
            submatrix_removing(np.eye(2), [0, 1])

    def test_out_of_range_rejected(self):
        """Test that an out-of-range index is rejected."""
        with pytest.raises(ParameterError):
            submatrix_removing(np.eye(2), [5])


class TestRankOneDowndate:

    def test_cycle3(self):
        """Test the downdate on the directed 3-cycle block."""
        Ainv = np.array([[1.0, 1.0], [0.0, 1.0]])
        np.testing.assert_allclose(rank_one_downdate(Ainv, 1), [[1.0]])

    def test_matches_direct_inverse(self):
        """Test that every downdate matches a direct inverse."""
        L = laplacian(random_strong_digraph(12, seed=5))
        sub, kept = submatrix_removing(L, [3])
        Ainv = inverse(sub)
        for v in range(len(kept)):
            direct, _ = submatrix_removing(L, [3, int(kept[v])])
            np.testing.assert_allclose(rank_one_downdate(Ainv, v), inverse(direct), rtol=1e-8, atol=1e-10)

    def test_one_by_one_rejected(self):
        """Test that a 1x1 inverse cannot be downdated."""
        with pytest.raises(ParameterError):
            rank_one_downdate(np.array([[2.0]]), 0)

    def test_zero_pivot_rejected(self):
        """Test that a zero pivot raises NumericalBreakdownError."""
        with pytest.raises(NumericalBreakdownError):
            rank_one_downdate(np.array([[0.0, 1.0], [1.0, 0.0]]), 0)


class TestTrace:

    def test_identity(self):
        """Test the trace of the identity."""
        assert trace(np.eye(5)) == 5.0

    def test_small(self):
        """Test the trace of a small matrix."""
        assert trace(np.array([[1.0, 9.0], [9.0, 2.0]])) == 3.0

    def test_cyclic(self):
        """Test that tr(AB) equals tr(BA)."""
        rng = np.random.default_rng(0)
        A, B = rng.normal(size=(6, 6)), rng.normal(size=(6, 6))
        assert trace(A @ B) == pytest.approx(trace(B @ A), abs=1e-9)


def test_check_laplacian_sums_accepts_laplacian():
    """Test that a true Laplacian passes the line-sum check."""
    check_laplacian_sums(laplacian(directed_cycle(5)))

"""
Dense linear algebra for the digraph Laplacian.

LU solves with a relative pivot test, the shift-formula pseudoinverse of a
Laplacian, principal-submatrix extraction and the rank-1 inverse downdate
that keeps a submatrix inverse current when one more index is removed.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import numpy.typing as npt
from scipy.linalg import lu_factor, lu_solve as scipy_lu_solve, LinAlgWarning
from scipy.linalg.lapack import get_lapack_funcs

from src.config import Config
from src.exceptions import ParameterError, SingularMatrixError, NumericalBreakdownError

logger = logging.getLogger(__name__)

DenseMatrix = npt.NDArray[np.float64]

LAPLACIAN_SUM_TOL = 1e-9
BREAKDOWN_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Solution of AX = B with the 1-norm condition estimate of A."""
    solution: DenseMatrix
    condition_estimate: float
    ill_conditioned: bool


def _require_square(A: DenseMatrix, name: str = 'A') -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"{name} must be square, got shape {A.shape}")


def _factor(A: DenseMatrix, pivot_tol: float):
    scale = float(np.abs(A).max()) if A.size else 0.0
    with warnings.catch_warnings():
        # exact zero pivots are reported by the check below
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = lu_factor(A, check_finite=True)
    pivots = np.abs(np.diag(lu))
    threshold = pivot_tol * scale
    if scale == 0.0 or pivots.min() < threshold:
        k = int(np.argmin(pivots))
        raise SingularMatrixError(
            f"Pivot {k} has magnitude {pivots[k]:.3e} below {threshold:.3e} (max |A| = {scale:.3e})"
        )
    return lu, piv


def _condition_from_lu(A: DenseMatrix, lu: DenseMatrix) -> float:
    gecon, = get_lapack_funcs(('gecon',), (lu,))
    anorm = float(np.abs(A).sum(axis=0).max())
    rcond, info = gecon(lu, anorm, norm='1')
    if info != 0 or rcond <= 0:
        return float('inf')
    return 1.0 / rcond


def solve(A: DenseMatrix, B: DenseMatrix, pivot_tol: Optional[float] = None) -> SolveResult:
    """
    Solve AX = B by LU with partial pivoting, reporting conditioning.

    Args:
        A: Square coefficient matrix
        B: Right-hand side (vector or matrix)
        pivot_tol: Relative pivot tolerance (default Config.PIVOT_TOL)

    Returns:
        SolveResult

    Raises:
        SingularMatrixError: If |pivot| < pivot_tol * max|A|
    """
    _require_square(A)
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if B.shape[0] != A.shape[0]:
        raise ParameterError(f"Right-hand side has {B.shape[0]} rows, expected {A.shape[0]}")

    tol = Config.PIVOT_TOL if pivot_tol is None else pivot_tol
    lu, piv = _factor(A, tol)
    X = scipy_lu_solve((lu, piv), B)

    condition = _condition_from_lu(A, lu)
    ill = condition > Config.CONDITION_LIMIT
    if ill:
        logger.warning(f"Ill-conditioned solve: cond_1 estimate {condition:.3e}")
    return SolveResult(solution=X, condition_estimate=condition, ill_conditioned=ill)


def lu_solve(A: DenseMatrix, B: DenseMatrix) -> DenseMatrix:
    """Solve AX = B (see `solve`), returning X only."""
    return solve(A, B).solution


def inverse(A: DenseMatrix) -> DenseMatrix:
    """Matrix inverse via LU."""
    _require_square(A)
    return lu_solve(A, np.eye(A.shape[0]))


def condition_estimate(A: DenseMatrix) -> float:
    """1-norm condition number estimate from LAPACK gecon."""
    _require_square(A)
    lu, _ = _factor(np.asarray(A, dtype=np.float64), Config.PIVOT_TOL)
    return _condition_from_lu(A, lu)


def trace(A: DenseMatrix) -> float:
    _require_square(A)
    return float(np.trace(A))


def submatrix_removing(A: DenseMatrix, X: Iterable[int]) -> tuple[DenseMatrix, npt.NDArray[np.intp]]:
    """
    Principal submatrix with rows and columns in X removed.

    Returns:
        (submatrix, kept) where kept[r] is the original index of row r

    Raises:
        ParameterError: If X covers every index or holds an invalid index
    """
    _require_square(A)
    n = A.shape[0]
    removed = set(int(x) for x in X)
    bad = [x for x in removed if not 0 <= x < n]
    if bad:
        raise ParameterError(f"Indices out of range for {n}x{n} matrix: {sorted(bad)}")
    if len(removed) >= n:
        raise ParameterError("Cannot remove every index")
    kept = np.array([i for i in range(n) if i not in removed], dtype=np.intp)
    return A[np.ix_(kept, kept)], kept


def rank_one_downdate(Ainv: DenseMatrix, v: int) -> DenseMatrix:
    """
    Inverse of A with row/column v removed, from the inverse of A.

    Computes (Ainv - Ainv e_v e_v^T Ainv / Ainv[v, v]) and drops row and
    column v.

    Raises:
        NumericalBreakdownError: If Ainv[v, v] vanishes
    """
    _require_square(Ainv, 'Ainv')
    m = Ainv.shape[0]
    if not 0 <= v < m:
        raise ParameterError(f"Index {v} out of range for {m}x{m} matrix")
    if m == 1:
        raise ParameterError("Cannot downdate a 1x1 inverse")

    pivot = Ainv[v, v]
    scale = max(1.0, float(np.abs(Ainv).max()))
    if abs(pivot) <= BREAKDOWN_TOL * scale:
        raise NumericalBreakdownError(f"Downdate pivot {pivot:.3e} at index {v}")

    updated = Ainv - np.outer(Ainv[:, v], Ainv[v, :]) / pivot
    keep = np.r_[0:v, v + 1:m]
    return updated[np.ix_(keep, keep)]


def check_laplacian_sums(L: DenseMatrix, tol: float = LAPLACIAN_SUM_TOL) -> None:
    """Raise unless every row and column of L sums to zero."""
    scale = max(1.0, float(np.abs(L).max()))
    row = float(np.abs(L.sum(axis=1)).max())
    col = float(np.abs(L.sum(axis=0)).max())
    if row > tol * scale or col > tol * scale:
        raise ParameterError(f"Not a Laplacian: max |row sum| {row:.3e}, max |column sum| {col:.3e}")


def pseudoinverse_laplacian(L: DenseMatrix) -> DenseMatrix:
    """
    Moore-Penrose pseudoinverse of a Laplacian with zero row and column sums.

    Uses the shift formula L^+ = (L - J/n)^-1 + J/n, J the all-ones matrix,
    valid because the null spaces of L and L^T are both spanned by 1.

    Raises:
        ParameterError: If row or column sums are not zero
        SingularMatrixError: If the shifted matrix is singular
    """
    return laplacian_pseudoinverse_solve(L).solution


def penrose_residuals(A: DenseMatrix, M: DenseMatrix) -> dict[str, float]:
    """
    Max-norm residuals of the four Penrose conditions and the EP condition.

    Returns:
        Dict with keys 'AMA', 'MAM', 'AM_sym', 'MA_sym', 'commute'
    """
    AM = A @ M
    MA = M @ A
    return {
        'AMA': float(np.abs(AM @ A - A).max()),
        'MAM': float(np.abs(MA @ M - M).max()),
        'AM_sym': float(np.abs(AM - AM.T).max()),
        'MA_sym': float(np.abs(MA - MA.T).max()),
        'commute': float(np.abs(AM - MA).max()),
    }


def laplacian_pseudoinverse_solve(L: DenseMatrix) -> SolveResult:
    """Like `pseudoinverse_laplacian`, keeping the shifted matrix's condition estimate."""
    _require_square(L, 'L')
    check_laplacian_sums(L)
    n = L.shape[0]
    shift = np.full((n, n), 1.0 / n)
    result = solve(L - shift, np.eye(n))
    return SolveResult(
        solution=result.solution + shift,
        condition_estimate=result.condition_estimate,
        ill_conditioned=result.ill_conditioned,
    )

"""
Resistance distances on strongly connected digraphs.

The digraph Laplacian L = d_G * Pi (I - P) has zero row and column sums and
reduces to D - W for symmetric weights. From L and its pseudoinverse this
module derives pairwise, vertex and group resistances together with the
Kirchhoff indices and Kemeny's constant.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np
import numpy.typing as npt

from src.config import Config
from src.core.digraph import (
    Digraph, StationaryDistribution, require_strongly_connected,
    stationary_distribution, transition_matrix,
)
from src.core.linalg import (
    DenseMatrix, inverse, laplacian_pseudoinverse_solve, lu_solve, submatrix_removing,
)
from src.exceptions import ParameterError, VertexNotFoundError

logger = logging.getLogger(__name__)

KEMENY_CROSSCHECK_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class ResistanceEngine:
    """
    Immutable bundle of a digraph, its Laplacian and the pseudoinverse.

    Built once in O(n^3); pairwise queries are O(1) afterwards.
    """
    graph: Digraph
    volume: float
    stationary: StationaryDistribution
    laplacian: DenseMatrix
    pseudoinverse: DenseMatrix
    condition_estimate: float = 0.0
    ill_conditioned: bool = False

    def __post_init__(self):
        self.laplacian.setflags(write=False)
        self.pseudoinverse.setflags(write=False)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def pi(self) -> npt.NDArray[np.float64]:
        return self.stationary.pi


GraphSource = Union[Digraph, ResistanceEngine]


def laplacian(g: Digraph, stationary: Optional[StationaryDistribution] = None) -> DenseMatrix:
    """L = d_G * Pi (I - P)."""
    if stationary is None:
        stationary = stationary_distribution(g)
    P = transition_matrix(g)
    L = g.volume * stationary.pi[:, None] * (np.eye(g.n) - P)
    return L


def normalized_laplacian(g: Digraph, stationary: Optional[StationaryDistribution] = None) -> DenseMatrix:
    """L~ = Pi^(1/2) (I - P) Pi^(-1/2)."""
    if stationary is None:
        stationary = stationary_distribution(g)
    s = np.sqrt(stationary.pi)
    P = transition_matrix(g)
    return s[:, None] * (np.eye(g.n) - P) / s[None, :]


def build_engine(g: Digraph) -> ResistanceEngine:
    """
    Compute pi, L and L^+ for a strongly connected digraph.

    Raises:
        NotStronglyConnectedError, GraphDataError: If g is unusable
        SingularMatrixError: If the shifted Laplacian is numerically singular
    """
    require_strongly_connected(g)
    stationary = stationary_distribution(g)
    L = laplacian(g, stationary)
    result = laplacian_pseudoinverse_solve(L)
    if result.ill_conditioned:
        logger.warning(
            f"Laplacian of {g.n}-vertex digraph is ill-conditioned "
            f"(cond_1 ~ {result.condition_estimate:.3e}); results may lose accuracy"
        )
    logger.debug(f"Built resistance engine: n={g.n}, m={g.m}, d_G={g.volume:g}")
    return ResistanceEngine(
        graph=g,
        volume=g.volume,
        stationary=stationary,
        laplacian=L,
        pseudoinverse=result.solution,
        condition_estimate=result.condition_estimate,
        ill_conditioned=result.ill_conditioned,
    )


def _check_vertex(n: int, i: int) -> int:
    if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
        raise VertexNotFoundError(f"Vertex index {i!r} out of range 0..{n - 1}")
    return int(i)


def _vertex_set(n: int, X: Iterable[int]) -> list[int]:
    members = sorted({_check_vertex(n, x) for x in X})
    if not members:
        raise ParameterError("Vertex set must be nonempty")
    if len(members) >= n:
        raise ParameterError("Vertex set must be a strict subset of the vertices")
    return members


def _laplacian_of(source: GraphSource) -> DenseMatrix:
    if isinstance(source, ResistanceEngine):
        return source.laplacian
    require_strongly_connected(source)
    return laplacian(source)


def _pairwise_sum(M: DenseMatrix) -> float:
    """Sum of the strict upper triangle in row-major order."""
    n = M.shape[0]
    values = M[np.triu_indices(n, 1)]
    if n > Config.COMPENSATED_SUM_ABOVE:
        return math.fsum(values.tolist())
    return float(np.sum(values))


def resistance(e: ResistanceEngine, i: int, j: int) -> float:
    """Omega(i, j) = L+_ii + L+_jj - L+_ij - L+_ji."""
    i = _check_vertex(e.n, i)
    j = _check_vertex(e.n, j)
    if i == j:
        return 0.0
    Ld = e.pseudoinverse
    return float(Ld[i, i] + Ld[j, j] - Ld[i, j] - Ld[j, i])


def resistance_matrix(e: ResistanceEngine) -> DenseMatrix:
    """All-pairs resistance distances (symmetric, zero diagonal)."""
    Ld = e.pseudoinverse
    d = np.diag(Ld)
    omega = d[:, None] + d[None, :] - Ld - Ld.T
    np.fill_diagonal(omega, 0.0)
    return omega


def resistance_via_submatrix(g: GraphSource, i: int, j: int) -> float:
    """
    Omega(i, j) as the (j, j) entry of the inverse of L with vertex i removed.

    Raises:
        ParameterError: If i == j
    """
    L = _laplacian_of(g)
    n = L.shape[0]
    i = _check_vertex(n, i)
    j = _check_vertex(n, j)
    if i == j:
        raise ParameterError("Submatrix route needs two distinct vertices")
    sub, kept = submatrix_removing(L, [i])
    pos = int(np.searchsorted(kept, j))
    rhs = np.zeros(len(kept))
    rhs[pos] = 1.0
    return float(lu_solve(sub, rhs)[pos])


def vertex_resistance(e: ResistanceEngine, i: int) -> float:
    """Omega(i) = sum_j Omega(i, j) = n L+_ii + tr(L+)."""
    i = _check_vertex(e.n, i)
    Ld = e.pseudoinverse
    return float(e.n * Ld[i, i] + np.trace(Ld))


def vertex_resistances(e: ResistanceEngine) -> npt.NDArray[np.float64]:
    """Omega(i) for every vertex."""
    Ld = e.pseudoinverse
    return e.n * np.diag(Ld) + np.trace(Ld)


def vertex_centrality(e: ResistanceEngine, i: int) -> float:
    """Information centrality n / Omega(i)."""
    return e.n / vertex_resistance(e, i)


def kirchhoff_index(e: ResistanceEngine) -> float:
    """R(G) = n tr(L+)."""
    return float(e.n * np.trace(e.pseudoinverse))


def kirchhoff_index_pairwise(e: ResistanceEngine) -> float:
    """R(G) as the sum of Omega over unordered pairs."""
    return _pairwise_sum(resistance_matrix(e))


def multiplicative_kirchhoff_index(e: ResistanceEngine) -> float:
    """R*(G) = d_G^2 sum_{i<j} pi_i pi_j Omega(i, j)."""
    pi = e.pi
    weighted = np.outer(pi, pi) * resistance_matrix(e)
    return e.volume ** 2 * _pairwise_sum(weighted)


def kemeny_constant_trace(e: ResistanceEngine) -> float:
    """
    Kemeny's constant as tr(L~+) through the shift construction.

    With s = sqrt(pi) spanning both null spaces of L~,
    tr(L~+) = tr((L~ + s s^T)^-1) - 1.
    """
    s = np.sqrt(e.pi)
    shifted = normalized_laplacian(e.graph, e.stationary) + np.outer(s, s)
    return float(np.trace(inverse(shifted)) - 1.0)


def kemeny_constant(e: ResistanceEngine) -> float:
    """
    Kemeny's constant K(G) = R*(G) / d_G, cross-checked against tr(L~+).
    """
    value = multiplicative_kirchhoff_index(e) / e.volume
    check = kemeny_constant_trace(e)
    gap = abs(value - check) / max(abs(value), 1e-300)
    if gap > KEMENY_CROSSCHECK_TOL:
        logger.warning(f"Kemeny routes disagree: {value:.12g} vs {check:.12g} (relative gap {gap:.2e})")
    return value


def group_inverse(g: GraphSource, X: Iterable[int]) -> tuple[DenseMatrix, npt.NDArray[np.intp]]:
    """
    Inverse of L with the rows and columns of X removed.

    Returns:
        (inverse, kept) where kept[r] is the vertex of row r
    """
    L = _laplacian_of(g)
    members = _vertex_set(L.shape[0], X)
    sub, kept = submatrix_removing(L, members)
    inv = inverse(sub)
    # entrywise nonnegative in exact arithmetic
    if inv.min() < -Config.NONNEG_SLACK:
        logger.warning(f"L_\\X^-1 has a negative entry {inv.min():.3e} (|X|={len(members)})")
    return inv, kept


def group_resistance_point(g: GraphSource, i: int, X: Iterable[int]) -> float:
    """
    Omega(i, X) = (L_{\\X}^-1)_{i,i}; zero when i belongs to X.

    Raises:
        ParameterError: If X is empty or covers every vertex
    """
    L = _laplacian_of(g)
    n = L.shape[0]
    i = _check_vertex(n, i)
    members = _vertex_set(n, X)
    if i in members:
        return 0.0
    sub, kept = submatrix_removing(L, members)
    pos = int(np.searchsorted(kept, i))
    rhs = np.zeros(len(kept))
    rhs[pos] = 1.0
    return float(lu_solve(sub, rhs)[pos])


def group_resistance(g: GraphSource, X: Iterable[int]) -> float:
    """Omega(X) = tr(L_{\\X}^-1)."""
    inv, _ = group_inverse(g, X)
    return float(np.trace(inv))


def group_centrality(g: GraphSource, X: Iterable[int]) -> float:
    """Group centrality 1 / Omega(X)."""
    return 1.0 / group_resistance(g, X)

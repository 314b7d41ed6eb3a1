"""
Weighted digraph representation and its random-walk basics.

Provides:
- Digraph construction from edge triples (loop dropping, arc merging,
  vertex-id compaction)
- Strong connectivity and largest strongly connected component
- Transition matrix P = D^-1 W and stationary distribution pi
"""

import logging
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from src.core.linalg import DenseMatrix, lu_solve
from src.exceptions import (
    GraphDataError, NotStronglyConnectedError, VertexNotFoundError,
    NumericalBreakdownError,
)

logger = logging.getLogger(__name__)

STATIONARY_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Digraph:
    """
    Weighted directed graph on compacted vertices 0..n-1.

    `labels[i]` is the original identifier of compact vertex i; every
    report maps back through it.
    """
    adjacency: DenseMatrix
    labels: tuple
    loops_dropped: int = 0
    arcs_merged: int = 0

    def __post_init__(self):
        self.adjacency.setflags(write=False)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def m(self) -> int:
        """Number of distinct arcs (nonzero entries of W)."""
        return int(np.count_nonzero(self.adjacency))

    @property
    def out_degrees(self) -> npt.NDArray[np.float64]:
        return self.adjacency.sum(axis=1)

    @property
    def in_degrees(self) -> npt.NDArray[np.float64]:
        return self.adjacency.sum(axis=0)

    @property
    def volume(self) -> float:
        """d_G, the total arc weight."""
        return float(self.out_degrees.sum())

    def edges(self) -> list[tuple]:
        """Arcs as (src label, dst label, weight) in row-major order."""
        rows, cols = np.nonzero(self.adjacency)
        return [
            (self.labels[i], self.labels[j], float(self.adjacency[i, j]))
            for i, j in zip(rows, cols)
        ]

    def index_of(self, label: Hashable) -> int:
        """Compact index of an original vertex label."""
        try:
            return self._label_index[label]
        except KeyError:
            raise VertexNotFoundError(f"Vertex {label!r} is not in the graph")

    def indices_of(self, labels: Iterable[Hashable]) -> list[int]:
        return [self.index_of(label) for label in labels]

    def labels_of(self, indices: Iterable[int]) -> list:
        return [self.labels[i] for i in indices]

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.adjacency, self.adjacency.T))

    @property
    def _label_index(self) -> dict:
        # cached lazily; the dataclass is frozen so bypass __setattr__
        cache = self.__dict__.get('_index_cache')
        if cache is None:
            cache = {label: i for i, label in enumerate(self.labels)}
            object.__setattr__(self, '_index_cache', cache)
        return cache


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    """The vector pi with pi^T P = pi^T, sum(pi) = 1, pi > 0."""
    pi: npt.NDArray[np.float64]
    residual: float = field(default=0.0)

    def __post_init__(self):
        self.pi.setflags(write=False)

    def __len__(self) -> int:
        return len(self.pi)

    def __getitem__(self, i: int) -> float:
        return float(self.pi[i])


def build_digraph(
    edge_triples: Sequence[tuple],
    keep_loops: bool = False,
    vertices: Optional[Iterable[Hashable]] = None,
    binarize: bool = False
) -> Digraph:
    """
    Build a Digraph from (src, dst, weight) triples.

    Vertex ids are compacted to 0..n-1 in order of first appearance
    (pre-registered `vertices` first). Parallel arcs are merged by summing
    their weights; self-loops are dropped unless `keep_loops` is set.

    Args:
        edge_triples: Sequence of (src, dst, weight)
        keep_loops: Retain self-loops in W
        vertices: Labels to register before scanning the arcs
        binarize: Replace every merged weight by 1

    Returns:
        Digraph

    Raises:
        GraphDataError: On an empty arc set without vertices or a nonpositive weight
    """
    index: dict = {}
    if vertices is not None:
        for label in vertices:
            index.setdefault(label, len(index))
    if len(edge_triples) == 0 and not index:
        raise GraphDataError("Edge set is empty")

    arcs = []
    loops = 0
    for line, (src, dst, weight) in enumerate(edge_triples, start=1):
        weight = float(weight)
        if not weight > 0:
            raise GraphDataError(f"Nonpositive weight {weight} at edge {line}: ({src}, {dst})")
        if _is_negative_id(src) or _is_negative_id(dst):
            raise GraphDataError(f"Negative vertex id at edge {line}: ({src}, {dst})")
        i = index.setdefault(src, len(index))
        j = index.setdefault(dst, len(index))
        if i == j and not keep_loops:
            loops += 1
            continue
        arcs.append((i, j, weight))

    n = len(index)
    adjacency = np.zeros((n, n), dtype=np.float64)
    merged = 0
    for i, j, weight in arcs:
        if adjacency[i, j] > 0:
            merged += 1
        adjacency[i, j] += weight

    if binarize:
        adjacency[adjacency > 0] = 1.0

    if loops:
        logger.info(f"Dropped {loops} self-loop(s) while building digraph")
    if merged:
        logger.info(f"Merged {merged} parallel arc(s) by weight summation")

    labels = tuple(sorted(index, key=index.__getitem__))
    return Digraph(adjacency=adjacency, labels=labels, loops_dropped=loops, arcs_merged=merged)


def _strong_components(g: Digraph) -> tuple[int, np.ndarray]:
    graph = sparse.csr_matrix(g.adjacency)
    return connected_components(graph, directed=True, connection='strong')


def is_strongly_connected(g: Digraph) -> bool:
    """True iff a single strongly connected component covers all vertices."""
    count, _ = _strong_components(g)
    return count == 1


def induced_subgraph(g: Digraph, keep: Sequence[int]) -> Digraph:
    """Subgraph on compact indices `keep`, preserving their order."""
    keep = np.asarray(keep, dtype=np.intp)
    adjacency = g.adjacency[np.ix_(keep, keep)].copy()
    labels = tuple(g.labels[i] for i in keep)
    return Digraph(adjacency=adjacency, labels=labels,
                   loops_dropped=g.loops_dropped, arcs_merged=g.arcs_merged)


def largest_scc(g: Digraph) -> tuple[Digraph, dict[int, int]]:
    """
    Induced subgraph on the largest strongly connected component.

    Ties between equally large components go to the one containing the
    smallest original vertex label.

    Returns:
        (subgraph, relabel map old compact index -> new compact index)
    """
    count, component = _strong_components(g)
    if count == 1:
        return g, {i: i for i in range(g.n)}

    sizes = np.bincount(component, minlength=count)
    largest = sizes.max()
    candidates = [c for c in range(count) if sizes[c] == largest]

    def smallest_label(c: int):
        members = np.flatnonzero(component == c)
        return min(label_sort_key(g.labels[i]) for i in members)

    best = min(candidates, key=smallest_label)
    keep = np.flatnonzero(component == best)
    sub = induced_subgraph(g, keep)
    relabel = {int(old): new for new, old in enumerate(keep)}
    logger.debug(f"Largest SCC: {sub.n}/{g.n} vertices, {sub.m}/{g.m} arcs ({count} components)")
    return sub, relabel


def _is_negative_id(label) -> bool:
    return isinstance(label, (int, np.integer)) and label < 0


def label_sort_key(label):
    # labels may mix ints and strings across sources; order ints first
    return (0, label, '') if isinstance(label, (int, np.integer)) else (1, 0, str(label))


def require_strongly_connected(g: Digraph) -> None:
    """Raise unless g is strongly connected with at least two vertices."""
    if g.n < 2:
        raise GraphDataError("Operation needs at least 2 vertices")
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError(
            f"Digraph with {g.n} vertices is not strongly connected; reduce it with largest_scc first"
        )


def transition_matrix(g: Digraph) -> DenseMatrix:
    """
    Row-stochastic transition matrix P = D^-1 W.

    Raises:
        GraphDataError: If some vertex has zero out-degree
    """
    degrees = g.out_degrees
    sinks = np.flatnonzero(degrees <= 0)
    if sinks.size:
        raise GraphDataError(f"Vertices with zero out-degree: {g.labels_of(sinks[:10])}")
    P = g.adjacency / degrees[:, None]
    return P


def stationary_distribution(g: Digraph) -> StationaryDistribution:
    """
    Stationary distribution by direct LU solve.

    Solves (P^T - I) x = 0 with the last equation replaced by sum(x) = 1.
    Power iteration is avoided since it does not converge on periodic chains.

    Raises:
        NotStronglyConnectedError: If g is not strongly connected
        GraphDataError: If n < 2
        NumericalBreakdownError: If the solution violates positivity
    """
    require_strongly_connected(g)
    P = transition_matrix(g)
    n = g.n
    A = P.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = lu_solve(A, b)
    pi = pi / pi.sum()

    if pi.min() <= 0:
        raise NumericalBreakdownError(f"Stationary distribution has nonpositive entry {pi.min():.3e}")

    residual = stationary_residual(P, pi)
    if residual > STATIONARY_RESIDUAL_TOL:
        logger.warning(f"Stationary residual {residual:.3e} exceeds {STATIONARY_RESIDUAL_TOL:.0e}")
    return StationaryDistribution(pi=pi, residual=residual)


def stationary_residual(P: DenseMatrix, pi: npt.NDArray[np.float64]) -> float:
    """Max-norm residual of pi^T P - pi^T."""
    return float(np.abs(pi @ P - pi).max())


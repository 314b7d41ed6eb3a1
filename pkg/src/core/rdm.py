"""
Resistance Distance Minimization (RDM): choose k vertices minimizing Omega(X).

Provides:
- The greedy selection that keeps L_{\\X}^-1 current through rank-1 downdates
- Exhaustive search over k-subsets (exact optimum, capped)
- Random, Top-degree and Min-res baselines
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.config import Config
from src.core.digraph import Digraph, label_sort_key
from src.core.linalg import DenseMatrix, inverse, rank_one_downdate, submatrix_removing
from src.core.resistance import (
    GraphSource, ResistanceEngine, build_engine, group_inverse, group_resistance,
    vertex_resistances,
)
from src.exceptions import BudgetExceededError, NumericalBreakdownError, ParameterError

logger = logging.getLogger(__name__)

METHODS = ('greedy', 'exact', 'random', 'top-degree', 'min-res')

GAIN_DENOMINATOR_TOL = 1e-14
# values closer than this (relative) count as ties, broken by label
TIE_DIGITS = 12


@dataclass
class SelectionResult:
    """A chosen vertex set with its group resistance."""
    chosen: list
    indices: list[int]
    objective: float
    method: str
    step_trace: list[tuple] = field(default_factory=list)
    wall_time: float = 0.0
    inverses: Optional[list[DenseMatrix]] = None

    @property
    def k(self) -> int:
        return len(self.chosen)

    def approximation_ratio(self, optimum) -> float:
        """Omega(chosen) / Omega(optimum); optimum may be a result or a value."""
        value = optimum.objective if isinstance(optimum, SelectionResult) else float(optimum)
        return self.objective / value


def approximation_bound(k: int) -> float:
    """Greedy guarantee factor 1 - (k/(k-1)) / e, defined for k >= 2."""
    if k < 2:
        raise ParameterError("Approximation bound is defined for k >= 2")
    return 1.0 - (k / (k - 1)) / math.e


def _engine_of(source: GraphSource) -> ResistanceEngine:
    return source if isinstance(source, ResistanceEngine) else build_engine(source)


def _graph_of(source: GraphSource) -> Digraph:
    return source.graph if isinstance(source, ResistanceEngine) else source


def _check_k(n: int, k: int) -> None:
    if not isinstance(k, (int, np.integer)) or not 1 <= k < n:
        raise ParameterError(f"k must satisfy 1 <= k < n = {n}, got {k!r}")


def _ranked(values: Sequence[float], labels: Sequence, candidates: Sequence[int]) -> list[int]:
    """Candidates sorted by value ascending, near-ties by smallest label."""
    values = np.asarray(values, dtype=np.float64)
    scale = float(np.abs(values[list(candidates)]).max()) or 1.0
    return sorted(
        candidates,
        key=lambda c: (round(values[c] / scale, TIE_DIGITS), label_sort_key(labels[c])),
    )


def _prefix_trace(source: GraphSource, indices: Sequence[int], labels: Sequence) -> list[tuple]:
    trace = []
    for step in range(1, len(indices) + 1):
        trace.append((labels[indices[step - 1]], group_resistance(source, indices[:step])))
    return trace


def _result(source: GraphSource, indices: list[int], method: str, started: float,
            step_trace: Optional[list[tuple]] = None) -> SelectionResult:
    g = _graph_of(source)
    if step_trace is None:
        step_trace = _prefix_trace(source, indices, g.labels)
    objective = step_trace[-1][1]
    return SelectionResult(
        chosen=g.labels_of(indices),
        indices=list(indices),
        objective=objective,
        method=method,
        step_trace=step_trace,
        wall_time=time.perf_counter() - started,
    )


def marginal_gain(LXinv: DenseMatrix, v: int) -> float:
    """
    Delta(Z, v) = (e_v^T L_{\\Z}^-2 e_v) / (e_v^T L_{\\Z}^-1 e_v).

    `v` indexes the rows of `LXinv`. The numerator is the product of row v
    and column v, so the square is never formed.

    Raises:
        NumericalBreakdownError: If the denominator vanishes
    """
    denominator = LXinv[v, v]
    if denominator <= GAIN_DENOMINATOR_TOL:
        raise NumericalBreakdownError(f"Marginal gain denominator {denominator:.3e} at row {v}")
    return float(LXinv[v, :] @ LXinv[:, v]) / float(denominator)


def marginal_gains(LXinv: DenseMatrix) -> npt.NDArray[np.float64]:
    """Delta(Z, v) for every surviving row v."""
    denominators = np.diag(LXinv)
    if denominators.min() <= GAIN_DENOMINATOR_TOL:
        v = int(np.argmin(denominators))
        raise NumericalBreakdownError(f"Marginal gain denominator {denominators[v]:.3e} at row {v}")
    numerators = np.einsum('ij,ji->i', LXinv, LXinv)
    return numerators / denominators


def greedy_rdm(source: GraphSource, k: int, trace_inverses: bool = False) -> SelectionResult:
    """
    Greedy RDM selection in O(n^3 + k n^2).

    The first vertex minimizes n L+_vv + tr(L+); each later vertex maximizes
    the marginal gain Delta. L_{\\X}^-1 is maintained by rank-1 downdates and
    the final objective is recomputed by a direct inversion.

    Args:
        source: Digraph or prebuilt ResistanceEngine
        k: Number of vertices, 1 <= k < n
        trace_inverses: Keep the maintained inverse of every step

    Raises:
        ParameterError: If k is out of range
        NumericalBreakdownError: If a downdate pivot vanishes
    """
    started = time.perf_counter()
    engine = _engine_of(source)
    g = engine.graph
    _check_k(g.n, k)

    first = _ranked(vertex_resistances(engine), g.labels, range(g.n))[0]
    LXinv, kept = group_inverse(engine, [first])
    indices = [first]
    step_trace = [(g.labels[first], float(np.trace(LXinv)))]
    inverses = [LXinv.copy()] if trace_inverses else None

    for _ in range(1, k):
        gains = marginal_gains(LXinv)
        # maximize gain: rank negated gains ascending
        pos = _ranked(-gains, [g.labels[v] for v in kept], range(len(kept)))[0]
        indices.append(int(kept[pos]))
        LXinv = rank_one_downdate(LXinv, pos)
        kept = np.delete(kept, pos)
        step_trace.append((g.labels[indices[-1]], float(np.trace(LXinv))))
        if trace_inverses:
            inverses.append(LXinv.copy())

    direct = group_resistance(engine, indices)
    drift = abs(direct - step_trace[-1][1]) / max(abs(direct), 1e-300)
    if drift > Config.ALGEBRAIC_TOL:
        logger.warning(f"Greedy objective drifted by {drift:.2e} (relative) over {k} downdates")
    step_trace[-1] = (step_trace[-1][0], direct)

    result = _result(engine, indices, 'greedy', started, step_trace)
    result.inverses = inverses
    logger.debug(f"Greedy k={k}: Omega={result.objective:.6g} in {result.wall_time:.3f}s")
    return result


def brute_force_rdm(source: GraphSource, k: int, cap: Optional[int] = None) -> SelectionResult:
    """
    Exact RDM optimum by evaluating Omega(X) on every k-subset.

    Subsets are enumerated in lexicographic label order; among equal
    objectives the first (lexicographically smallest) set is kept.

    Raises:
        ParameterError: If k is out of range
        BudgetExceededError: If C(n, k) exceeds the cap
    """
    started = time.perf_counter()
    engine = _engine_of(source)
    g = engine.graph
    _check_k(g.n, k)
    cap = Config.BRUTE_FORCE_CAP if cap is None else cap
    required = math.comb(g.n, k)
    if required > cap:
        raise BudgetExceededError(required, cap)

    order = sorted(range(g.n), key=lambda i: label_sort_key(g.labels[i]))
    L = engine.laplacian
    best_value = math.inf
    best_set: tuple = ()
    for subset in itertools.combinations(order, k):
        sub, _ = submatrix_removing(L, subset)
        value = float(np.trace(inverse(sub)))
        if value < best_value and not math.isclose(value, best_value, rel_tol=10.0 ** -TIE_DIGITS):
            best_value = value
            best_set = subset

    logger.debug(f"Brute force k={k}: {required:,} subsets, Omega={best_value:.6g}")
    return _result(engine, list(best_set), 'exact', started)


def baseline_random(source: GraphSource, k: int, seed: int) -> SelectionResult:
    """k vertices drawn uniformly without replacement from a Philox stream."""
    started = time.perf_counter()
    g = _graph_of(source)
    _check_k(g.n, k)
    rng = np.random.Generator(np.random.Philox(seed))
    indices = [int(i) for i in rng.choice(g.n, size=k, replace=False)]
    return _result(source, indices, 'random', started)


def baseline_top_degree(source: GraphSource, k: int) -> SelectionResult:
    """k vertices with the highest out-degree."""
    started = time.perf_counter()
    g = _graph_of(source)
    _check_k(g.n, k)
    indices = _ranked(-g.out_degrees, g.labels, range(g.n))[:k]
    return _result(source, indices, 'top-degree', started)


def baseline_min_res(source: GraphSource, k: int) -> SelectionResult:
    """k vertices with the lowest vertex resistance Omega(i)."""
    started = time.perf_counter()
    engine = _engine_of(source)
    g = engine.graph
    _check_k(g.n, k)
    indices = _ranked(vertex_resistances(engine), g.labels, range(g.n))[:k]
    return _result(engine, indices, 'min-res', started)


def select(source: GraphSource, k: int, method: str, seed: int = 0,
           cap: Optional[int] = None) -> SelectionResult:
    """
    Run one selection method by label.

    Raises:
        ParameterError: For an unknown method
    """
    if method == 'greedy':
        return greedy_rdm(source, k)
    if method == 'exact':
        return brute_force_rdm(source, k, cap=cap)
    if method == 'random':
        return baseline_random(source, k, seed)
    if method == 'top-degree':
        return baseline_top_degree(source, k)
    if method == 'min-res':
        return baseline_min_res(source, k)
    raise ParameterError(f"Unknown method: {method}. Valid options: {list(METHODS)}")

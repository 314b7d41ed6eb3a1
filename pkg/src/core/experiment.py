"""
Experiment harness: run every selection method for k = 1..k_max on one
network source over a list of seeds, and collect one ResultRow per cell.

For a generator source each seed generates its own network. For a file
source the network is loaded once; the deterministic methods run once
(recorded under the first seed) and the random baseline runs per seed.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from src.config import Config
from src.core.rdm import METHODS, SelectionResult, select
from src.core.resistance import ResistanceEngine, build_engine, group_resistance
from src.data.edgelist import EdgeListOptions, NetworkSummary
from src.data.graph_factory import GraphSource, get_graph, source_label, source_type
from src.exceptions import BudgetExceededError, NumericalBreakdownError, ParameterError

logger = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    """One experiment: a network source, methods, k range and seeds."""
    input: GraphSource
    k_max: int = 6
    methods: Sequence[str] = METHODS
    seeds: Sequence[int] = (0,)
    output: Optional[str] = None
    cap: Optional[int] = None
    tolerance: Optional[float] = None
    options: EdgeListOptions = field(default_factory=EdgeListOptions)
    record_timing: bool = True
    workers: int = 1

    def validate(self) -> None:
        """
        Raises:
            ParameterError: On an empty method list, unknown method, k_max < 1 or no seeds
        """
        if self.k_max < 1:
            raise ParameterError(f"k_max must be >= 1, got {self.k_max}")
        if not self.methods:
            raise ParameterError("At least one method is required")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ParameterError(f"Unknown method(s): {unknown}. Valid options: {list(METHODS)}")
        if not self.seeds:
            raise ParameterError("At least one seed is required")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")

    @property
    def algebraic_tolerance(self) -> float:
        return Config.ALGEBRAIC_TOL if self.tolerance is None else self.tolerance


@dataclass
class ResultRow:
    """One (network, method, k, seed) cell of an experiment."""
    network: str
    n: int
    m: int
    n_scc: int
    m_scc: int
    method: str
    k: int
    objective: float
    chosen: list
    seed: int
    wall_time: float = 0.0
    skipped: bool = False

    @property
    def sort_key(self) -> tuple:
        return (self.network, self.method, self.k, self.seed)


@dataclass
class _Cell:
    source: GraphSource
    seed: int
    methods: tuple


def _cells(cfg: ExperimentConfig) -> list[_Cell]:
    methods = tuple(cfg.methods)
    if source_type(cfg.input) == 'generator':
        return [_Cell(replace(cfg.input, seed=seed), seed, methods) for seed in cfg.seeds]

    cells = [_Cell(cfg.input, cfg.seeds[0], methods)]
    if 'random' in methods:
        cells += [_Cell(cfg.input, seed, ('random',)) for seed in cfg.seeds[1:]]
    return cells


def _row(summary: NetworkSummary, method: str, k: int, seed: int,
         result: Optional[SelectionResult], record_timing: bool) -> ResultRow:
    return ResultRow(
        network=summary.network,
        n=summary.n,
        m=summary.m,
        n_scc=summary.n_scc,
        m_scc=summary.m_scc,
        method=method,
        k=k,
        objective=result.objective if result else float('nan'),
        chosen=list(result.chosen) if result else [],
        seed=seed,
        wall_time=result.wall_time if (result and record_timing) else 0.0,
        skipped=result is None,
    )


def validate_objective(engine: ResistanceEngine, result: SelectionResult, tolerance: float) -> None:
    """
    Recompute Omega(X) independently and compare with the reported objective.

    Raises:
        NumericalBreakdownError: If the relative gap exceeds `tolerance`
    """
    direct = group_resistance(engine, result.indices)
    gap = abs(direct - result.objective) / max(abs(direct), 1e-300)
    if gap > tolerance:
        logger.error(f"❌ {result.method} k={result.k}: objective {result.objective:.12g} "
                     f"vs recomputed {direct:.12g}")
        raise NumericalBreakdownError(
            f"Objective validation failed for {result.method} k={result.k} (relative gap {gap:.2e})"
        )


def _run_cell(cell: _Cell, cfg: ExperimentConfig) -> list[ResultRow]:
    g, summary = get_graph(cell.source, cfg.options)
    engine = build_engine(g)
    k_top = min(cfg.k_max, g.n - 1)
    if k_top < cfg.k_max:
        logger.warning(f"{summary.network}: k capped at {k_top} (n'={g.n})")

    rows = []
    for method in cell.methods:
        for k in range(1, k_top + 1):
            try:
                result = select(engine, k, method, seed=cell.seed, cap=cfg.cap)
            except BudgetExceededError as e:
                logger.info(f"Skipping exact k={k} on {summary.network}: {e}")
                rows.append(_row(summary, method, k, cell.seed, None, cfg.record_timing))
                continue
            validate_objective(engine, result, cfg.algebraic_tolerance)
            rows.append(_row(summary, method, k, cell.seed, result, cfg.record_timing))
    logger.debug(f"{summary.network} seed={cell.seed}: {len(rows)} row(s)")
    return rows


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """
    Run an experiment and optionally write the CSV.

    Rows come back sorted by (network, method, k, seed) regardless of the
    number of workers. Skipped exact rows are returned but not written.

    Args:
        cfg: Experiment configuration

    Returns:
        List of ResultRow
    """
    cfg.validate()
    cells = _cells(cfg)
    logger.info(f"Running {len(cells)} cell(s) on {source_label(cfg.input)}: "
                f"methods={list(cfg.methods)}, k_max={cfg.k_max}")

    if cfg.workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(lambda cell: _run_cell(cell, cfg), cells))
    else:
        batches = [_run_cell(cell, cfg) for cell in cells]

    rows = sorted((row for batch in batches for row in batch), key=lambda r: r.sort_key)

    if cfg.output:
        from src.core.formatters import write_results_csv
        written = write_results_csv(rows, cfg.output)
        logger.info(f"✅ Wrote {written} row(s) to {cfg.output}")
    return rows

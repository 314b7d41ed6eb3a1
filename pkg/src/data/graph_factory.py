"""
Graph source factory.
Provides a unified interface for getting a strongly connected digraph from
either an edge-list file or a generator spec.
"""

import logging
import os
from typing import Literal, Optional, Union

from src.core.digraph import Digraph, largest_scc
from src.data.edgelist import (
    EdgeListOptions, NetworkSummary, load_and_reduce, load_edge_list, summarize_network,
)
from src.data.generators import GenSpec, generate
from src.exceptions import ParameterError

logger = logging.getLogger(__name__)

GraphSource = Union[str, GenSpec]
SourceType = Literal['file', 'generator']


def source_type(source: GraphSource) -> SourceType:
    """
    Classify a graph source.

    Raises:
        ParameterError: If the source is neither a path nor a GenSpec
    """
    if isinstance(source, GenSpec):
        return 'generator'
    elif isinstance(source, (str, os.PathLike)):
        return 'file'
    else:
        raise ParameterError(f"Unsupported graph source: {source!r}")


def source_label(source: GraphSource) -> str:
    """Network label for reports: file base name or generator label."""
    if source_type(source) == 'generator':
        return source.label
    return os.path.basename(os.fspath(source))


def get_raw_graph(source: GraphSource, options: Optional[EdgeListOptions] = None) -> Digraph:
    """
    Build the unreduced digraph of a source.

    Args:
        source: Edge-list path or GenSpec
        options: Edge-list options (ignored for generators)
    """
    if source_type(source) == 'generator':
        return generate(source)
    return load_edge_list(os.fspath(source), options)


def get_graph(source: GraphSource, options: Optional[EdgeListOptions] = None) -> tuple[Digraph, NetworkSummary]:
    """
    Load or generate a digraph and reduce it to its largest SCC.

    Returns:
        (largest SCC digraph, NetworkSummary)
    """
    if source_type(source) == 'file':
        sub, summary = load_and_reduce(os.fspath(source), options)
        return sub, summary

    g = generate(source)
    sub, _ = largest_scc(g)
    summary = summarize_network(g, sub, network=source.label)
    logger.info(f"{summary.network}: n={summary.n}, m={summary.m} -> n'={summary.n_scc}, m'={summary.m_scc}")
    return sub, summary


def source_from_args(args) -> GraphSource:
    """
    Pick the graph source from parsed CLI flags (--input or --gen).

    Raises:
        ParameterError: If neither or both are given
    """
    has_input = getattr(args, 'input', None) is not None
    has_gen = getattr(args, 'gen', None) is not None
    if has_input == has_gen:
        raise ParameterError("Exactly one of --input or --gen is required")
    if has_input:
        return args.input
    if args.n is None:
        raise ParameterError("--gen requires --n")
    return GenSpec.from_args(args)


def options_from_args(args) -> EdgeListOptions:
    return EdgeListOptions(
        weighted=getattr(args, 'weighted', True),
        keep_loops=getattr(args, 'keep_loops', False),
        binarize=getattr(args, 'binarize', False),
    )

"""
Edge-list ingestion in SNAP and KONECT conventions.

Lines are split on arbitrary whitespace; lines starting with a comment
character are skipped. A line holds `src dst [weight [timestamp]]`;
vertex ids are kept as written and compacted later by build_digraph.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from src.config import Config
from src.core.digraph import Digraph, build_digraph, largest_scc
from src.exceptions import EdgeListParseError, GraphDataError

logger = logging.getLogger(__name__)

DEFAULT_COMMENT_CHARS = '#%'


@dataclass(frozen=True)
class EdgeListOptions:
    """How to read an edge list and normalize the resulting digraph."""
    weighted: bool = True
    comment_chars: str = DEFAULT_COMMENT_CHARS
    keep_loops: bool = False
    binarize: bool = False


@dataclass(frozen=True)
class NetworkSummary:
    """Size of a network before and after reduction to its largest SCC."""
    network: str
    n: int
    m: int
    n_scc: int
    m_scc: int
    loops_dropped: int = 0
    arcs_merged: int = 0

    def __str__(self) -> str:
        return f"{self.n} {self.m} {self.n_scc} {self.m_scc}"


def _parse_id(token: str, line_number: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise EdgeListParseError(line_number, f"vertex id {token!r} is not an integer")
    if value < 0:
        raise EdgeListParseError(line_number, f"negative vertex id {value}")
    return value


def parse_edge_list(text: str, options: Optional[EdgeListOptions] = None) -> list[tuple[int, int, float]]:
    """
    Parse edge-list text into (src, dst, weight) triples.

    Args:
        text: File contents
        options: Parsing options (weighted, comment_chars)

    Returns:
        List of triples; unweighted lines and unweighted mode give weight 1.0

    Raises:
        EdgeListParseError: On a malformed line or a nonpositive weight
    """
    options = options or EdgeListOptions()
    triples = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in options.comment_chars:
            continue
        fields = line.split()
        if len(fields) < 2 or len(fields) > 4:
            raise EdgeListParseError(line_number, f"expected 2 to 4 columns, got {len(fields)}")

        src = _parse_id(fields[0], line_number)
        dst = _parse_id(fields[1], line_number)
        weight = 1.0
        if len(fields) >= 3:
            try:
                parsed = float(fields[2])
            except ValueError:
                raise EdgeListParseError(line_number, f"weight {fields[2]!r} is not a number")
            if not parsed > 0:
                raise EdgeListParseError(line_number, f"weight must be positive, got {fields[2]}")
            if options.weighted:
                weight = parsed
        triples.append((src, dst, weight))
    return triples


def read_edge_list(path: str, options: Optional[EdgeListOptions] = None) -> list[tuple[int, int, float]]:
    """
    Read and parse an edge-list file (bare names fall back to DIRRES_DATA_DIR).

    Raises:
        GraphDataError: If the file cannot be read
        EdgeListParseError: On a malformed line
    """
    resolved = Config.resolve_data_path(path)
    try:
        with open(resolved, encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise GraphDataError(f"Cannot read edge list {path}: {e}")
    triples = parse_edge_list(text, options)
    logger.debug(f"Parsed {len(triples)} arc line(s) from {resolved}")
    return triples


def load_edge_list(path: str, options: Optional[EdgeListOptions] = None) -> Digraph:
    """Read an edge-list file and build the (unreduced) digraph."""
    options = options or EdgeListOptions()
    triples = read_edge_list(path, options)
    return build_digraph(triples, keep_loops=options.keep_loops, binarize=options.binarize)


def summarize_network(g_raw: Digraph, g_scc: Digraph, network: str = '') -> NetworkSummary:
    """Table row (n, m, n', m') for a digraph and its largest SCC."""
    return NetworkSummary(
        network=network,
        n=g_raw.n,
        m=g_raw.m,
        n_scc=g_scc.n,
        m_scc=g_scc.m,
        loops_dropped=g_raw.loops_dropped,
        arcs_merged=g_raw.arcs_merged,
    )


def load_and_reduce(path: str, options: Optional[EdgeListOptions] = None) -> tuple[Digraph, NetworkSummary]:
    """
    Parse, build and reduce an edge-list file to its largest SCC.

    Returns:
        (largest SCC digraph, NetworkSummary)
    """
    g = load_edge_list(path, options)
    sub, _ = largest_scc(g)
    summary = summarize_network(g, sub, network=os.path.basename(path))
    logger.info(
        f"{summary.network}: n={summary.n}, m={summary.m} -> "
        f"n'={summary.n_scc}, m'={summary.m_scc}"
    )
    return sub, summary

"""
Tests for edge-list parsing and SCC reduction.
"""

import os
import textwrap

import pytest

from src.config import Config
from src.data.edgelist import (
    EdgeListOptions, NetworkSummary, load_and_reduce, load_edge_list, parse_edge_list, read_edge_list,
)
from src.exceptions import EdgeListParseError, GraphDataError

SNAP_SAMPLE = textwrap.dedent("""\
    # Directed graph (each unordered pair of nodes is saved once)
    # FromNodeId\tToNodeId
    0\t1
    1\t2
    2\t0
    2\t3
""")

KONECT_SAMPLE = textwrap.dedent("""\
    % asym positive
    % 6 4 4
    1 2 0.6 1190000000
    2 1 0.8 1190000001
    2 2 1.0 1190000002
    3 1 1.0 1190000003
""")


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestParseEdgeList:

    def test_snap_comments_and_tabs(self):
        """Test SNAP comments and tab separators."""
        assert parse_edge_list(SNAP_SAMPLE) == [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 3, 1.0)]

    def test_konect_weights_and_timestamps(self):
        """Test KONECT weights with trailing timestamps."""
        triples = parse_edge_list(KONECT_SAMPLE)
        assert triples == [(1, 2, 0.6), (2, 1, 0.8), (2, 2, 1.0), (3, 1, 1.0)]

    def test_unweighted_mode_ignores_weights(self):
        """Test that unweighted mode ignores the weight column."""
        triples = parse_edge_list(KONECT_SAMPLE, EdgeListOptions(weighted=False))
        assert {w for _, _, w in triples} == {1.0}

    def test_blank_lines_skipped(self):
        """Test that blank lines are skipped."""
        assert parse_edge_list("\n0 1\n\n   \n1 0\n") == [(0, 1, 1.0), (1, 0, 1.0)]

    def test_custom_comment_chars(self):
        """Test custom comment characters."""
        assert parse_edge_list("; header\n0 1\n", EdgeListOptions(comment_chars=';')) == [(0, 1, 1.0)]

    @pytest.mark.parametrize("text,line,fragment", [
        ("0 1\n7\n", 2, "columns"),
        ("0 1 2 3 4\n", 1, "columns"),
        ("a 1\n", 1, "not an integer"),
        ("0 1\n1 -2\n", 2, "negative"),
        ("0 1 heavy\n", 1, "not a number"),
        ("0 1 0\n", 1, "positive"),
        ("0 1\n1 0 -0.5\n", 2, "positive"),
    ])
    def test_malformed_lines(self, text, line, fragment):
        """Test that malformed lines report their line number."""
        with pytest.raises(EdgeListParseError, match=fragment) as info:
            parse_edge_list(text)
        assert info.value.line_number == line
        assert str(info.value).startswith(f"line {line}:")


class TestLoad:

    def test_loops_dropped_and_counted(self, tmp_path):
        """Test that self-loops are dropped and counted."""
        g = load_edge_list(_write(tmp_path, 'out.sample', KONECT_SAMPLE))
        assert g.loops_dropped == 1
        assert g.m == 3

    def test_keep_loops_option(self, tmp_path):
        """Test the keep_loops option."""
        g = load_edge_list(_write(tmp_path, 'out.sample', KONECT_SAMPLE), EdgeListOptions(keep_loops=True))
        assert g.m == 4

    def test_binarize_option(self, tmp_path):
        """Test the binarize option."""
        g = load_edge_list(_write(tmp_path, 'out.sample', KONECT_SAMPLE), EdgeListOptions(binarize=True))
        assert g.adjacency.max() == 1.0

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises GraphDataError."""
        with pytest.raises(GraphDataError, match="Cannot read"):
            read_edge_list(str(tmp_path / 'absent.txt'))

    def test_bare_name_resolved_in_data_dir(self, tmp_path, monkeypatch):
        """Test that a bare file name resolves in the data directory."""
        _write(tmp_path, 'tiny.txt', "0 1\n1 0\n")
        monkeypatch.setattr(Config, 'DATA_DIR', str(tmp_path))
        assert read_edge_list('tiny.txt') == [(0, 1, 1.0), (1, 0, 1.0)]

    def test_load_and_reduce(self, tmp_path):
        """Test loading and reducing to the largest SCC."""
        sub, summary = load_and_reduce(_write(tmp_path, 'snap.txt', SNAP_SAMPLE))
        assert sub.n == 3
        assert summary == NetworkSummary(network='snap.txt', n=4, m=4, n_scc=3, m_scc=3)
        assert str(summary) == "4 4 3 3"

    def test_empty_file_rejected(self, tmp_path):
        """Test that a file without arcs is rejected."""
        with pytest.raises(GraphDataError):
            load_and_reduce(_write(tmp_path, 'empty.txt', "# nothing here\n"))


# (file names tried, n', m') for the published networks
PUBLISHED = [
    (('email-Eu-core.txt',), 803, 24729),
    (('out.maayan-faa', 'air-traffic-control.txt'), 792, 1900),
    (('Wiki-Vote.txt',), 1300, 39456),
]


def _dataset(names) -> str:
    for name in names:
        if Config.DATA_DIR and os.path.exists(os.path.join(Config.DATA_DIR, name)):
            return name
    pytest.skip(f"{names[0]} not found in DIRRES_DATA_DIR")


@pytest.mark.slow
@pytest.mark.parametrize("names,n_scc,m_scc", PUBLISHED)
def test_published_scc_sizes(names, n_scc, m_scc):
    """Test SCC sizes of the published datasets."""
    _, summary = load_and_reduce(_dataset(names))
    assert (summary.n_scc, summary.m_scc) == (n_scc, m_scc)


@pytest.mark.slow
def test_advogato_scc_vertex_count():
    """Test the Advogato SCC vertex count."""
    _, summary = load_and_reduce(_dataset(('out.advogato', 'advogato.txt')))
    assert summary.n_scc == 3140
    assert summary.loops_dropped > 0

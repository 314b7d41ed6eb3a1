"""
Shared fixtures and hypothesis profiles.
"""

import pytest
from hypothesis import HealthCheck, settings

from tests.graphs import (
    bidirected, bidirected_path, bidirected_triangle, directed_cycle, random_strong_digraph,
)

settings.register_profile(
    'default',
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile('default')


@pytest.fixture
def cycle3():
    return directed_cycle(3)


@pytest.fixture
def pair():
    """2-vertex bidirected graph, unit weights."""
    return bidirected([(0, 1, 1.0)])


@pytest.fixture
def path3():
    return bidirected_path(3)


@pytest.fixture
def triangle():
    return bidirected_triangle()


@pytest.fixture
def random_graphs():
    """Twenty fixed random strongly connected digraphs, n in 4..15."""
    return [random_strong_digraph(4 + (s % 12), seed=1000 + s) for s in range(20)]

"""
Graph builders shared by the test modules.
"""

import numpy as np
from hypothesis import strategies as st

from src.core.digraph import Digraph, build_digraph


def directed_cycle(n: int) -> Digraph:
    return build_digraph([(i, (i + 1) % n, 1.0) for i in range(n)])


def bidirected(edges, n=None) -> Digraph:
    """Symmetric digraph from undirected (u, v, w) edges."""
    triples = []
    for u, v, w in edges:
        triples += [(u, v, w), (v, u, w)]
    return build_digraph(triples, vertices=range(n) if n else None)


def bidirected_path(n: int) -> Digraph:
    return bidirected([(i, i + 1, 1.0) for i in range(n - 1)])


def bidirected_triangle() -> Digraph:
    return bidirected([(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])


def random_strong_digraph(n: int, seed: int, density: float = 0.3) -> Digraph:
    """
    Random weighted digraph on 0..n-1 that is strongly connected.

    A Hamiltonian cycle through a random permutation guarantees strong
    connectivity; extra arcs are added independently with `density`.
    """
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    triples = [
        (int(order[t]), int(order[(t + 1) % n]), float(rng.uniform(0.5, 2.0)))
        for t in range(n)
    ]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                triples.append((i, j, float(rng.uniform(0.5, 2.0))))
    return build_digraph(triples, vertices=range(n))


@st.composite
def strong_digraphs(draw, min_n: int = 2, max_n: int = 30):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    density = draw(st.floats(min_value=0.0, max_value=0.6))
    return random_strong_digraph(n, seed, density)

from __future__ import annotations

import numpy as np
import pytest

from hypersync.hypergraph import Hypergraph, is_connected


def _spanning_edges(rng, n, min_size, max_size):
    """Random hypertree: each edge joins one covered vertex to new ones."""
    order = [int(v) for v in rng.permutation(n)]
    covered, edges, i = [order[0]], [], 1
    while i < n:
        s = int(rng.integers(min_size, max_size + 1))
        new = order[i : i + s - 1]
        rest = s - 1 - len(new)
        pool = [v for v in covered if v not in new]
        picked = [int(v) for v in rng.choice(pool, min(rest + 1, len(pool)), replace=False)]
        edges.append(picked + new)
        covered += new
        i += len(new)
    return edges


def random_hypergraph(rng, n, n_edges, min_size=2, max_size=6, weighted=True, connected=False):
    """Random hypergraph with edge sizes in [min_size, max_size] and weights in (0, 5].

    With ``connected=True`` a random spanning hypertree is added first.
    """
    max_size = min(max_size, n)
    edges = _spanning_edges(rng, n, min_size, max_size) if connected else []
    for _ in range(n_edges):
        s = int(rng.integers(min_size, max_size + 1))
        edges.append([int(v) for v in rng.choice(n, s, replace=False)])
    weights = list(5.0 * (1.0 - rng.random(len(edges)))) if weighted else None
    return Hypergraph.from_edges(n, edges, weights)


def random_uniform_connected(rng, n, m, extra):
    """Connected m-uniform hypergraph without repeated edges (needs n >= m)."""
    edges = {tuple(sorted(e)) for e in _spanning_edges(rng, n, m, m)}
    for _ in range(extra):
        edges.add(tuple(sorted(int(v) for v in rng.choice(n, m, replace=False))))
    G = Hypergraph.from_edges(n, sorted(edges))
    assert is_connected(G) and G.is_uniform(m)
    return G


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def triangle():
    return Hypergraph.from_edges(3, [[0, 1, 2]])


@pytest.fixture
def eight():
    # vertices v1..v8 of the worked example, 0-based
    return Hypergraph.from_edges(8, [[0, 1, 2, 3], [1, 4, 5], [2, 6, 7]])

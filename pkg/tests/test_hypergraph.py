import itertools

import pytest

from hypersync.hypergraph import (
    DisconnectedHypergraph,
    DuplicateVertexInEdge,
    EmptyEdge,
    Hypergraph,
    NonpositiveWeight,
    UnknownVertexLabel,
    clique_expansion,
    degree,
    diameter,
    is_connected,
    largest_connected_component,
    validate,
)

from conftest import random_hypergraph


def test_validate_minimal():
    G = validate(["a", "b", "c"], [["a", "b", "c"]])
    assert G.n_vertices == 3
    assert len(G.edges) == 1
    assert G.edges[0].vertices == (0, 1, 2)
    assert G.edges[0].weight == 1.0


@pytest.mark.parametrize(
    "edges, weights, exc",
    [
        ([["a", "a", "b"]], None, DuplicateVertexInEdge),
        ([["a"]], None, EmptyEdge),
        ([["a", "z"]], None, UnknownVertexLabel),
        ([["a", "b"]], [-1.0], NonpositiveWeight),
        ([["a", "b"]], [0.0], NonpositiveWeight),
    ],
)
def test_validate_rejects(edges, weights, exc):
    with pytest.raises(exc):
        validate(["a", "b", "c"], edges, weights)


def test_connectivity(triangle, eight):
    assert is_connected(triangle)
    assert is_connected(eight)
    assert not is_connected(Hypergraph.from_edges(4, [[0, 1], [2, 3]]))


def test_degree(triangle, eight):
    assert degree(eight, 1) == 2  # v2 sits in two hyperedges
    assert all(degree(triangle, u) == 1 for u in range(3))
    assert degree(Hypergraph.from_edges(3, [[0, 1]]), 2) == 0


def test_clique_expansion(triangle, eight):
    assert sorted(e.vertices for e in clique_expansion(triangle).edges) == [(0, 1), (0, 2), (1, 2)]
    K = clique_expansion(eight)
    # C(4,2) + C(3,2) + C(3,2), no pair repeated across edges
    assert len(K.edges) == 12
    path = Hypergraph.from_edges(3, [[0, 1], [1, 2]])
    assert [e.vertices for e in clique_expansion(path).edges] == [(0, 1), (1, 2)]


def test_clique_expansion_idempotent(rng):
    for _ in range(20):
        G = random_hypergraph(rng, 10, 6)
        K = clique_expansion(G)
        assert clique_expansion(K).edges == K.edges


def _bfs_oracle(n, edges):
    adj = {u: set() for u in range(n)}
    for e in edges:
        for u, v in itertools.permutations(e, 2):
            adj[u].add(v)
    best = 0
    for s in range(n):
        dist, frontier = {s: 0}, [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        best = max(best, max(dist.values()))
    return best


def test_diameter(triangle, eight):
    assert diameter(triangle) == 1
    assert diameter(Hypergraph.from_edges(3, [[0, 1], [1, 2]])) == 2
    assert _bfs_oracle(8, [[0, 1, 2, 3], [1, 4, 5], [2, 6, 7]]) == 3
    assert diameter(eight) == 3
    with pytest.raises(DisconnectedHypergraph):
        diameter(Hypergraph.from_edges(4, [[0, 1], [2, 3]]))


def test_diameter_matches_clique_expansion(rng):
    for _ in range(20):
        G = random_hypergraph(rng, 9, 6, connected=True)
        assert diameter(G) == diameter(clique_expansion(G))


def test_largest_component():
    G = Hypergraph.from_edges(5, [[0, 1], [3, 4], [1, 2]], weights=[1.0, 2.0, 3.0])
    H, index = largest_connected_component(G)
    assert index == [0, 1, 2]
    assert H.n_vertices == 3
    assert [e.weight for e in H.edges] == [1.0, 3.0]
    assert is_connected(H)


def test_largest_component_tie_break():
    G = Hypergraph.from_edges(4, [[2, 3], [0, 1]])
    _, index = largest_connected_component(G)
    assert index == [0, 1]


def test_largest_component_of_connected_is_itself(eight):
    H, index = largest_connected_component(eight)
    assert index == list(range(8))
    assert H.edges == eight.edges


def test_largest_component_is_connected(rng):
    for _ in range(30):
        G = random_hypergraph(rng, 15, 5, max_size=3)
        H, _ = largest_connected_component(G)
        assert is_connected(H)

"""Finite weighted hypergraphs and their combinatorial queries.

Vertices carry string labels externally and dense 0-based indices internally;
every matrix in the package is indexed by the internal index.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class HypergraphError(ValueError):
    """Base class for invalid hypergraph input."""


class EmptyEdge(HypergraphError):
    pass


class DuplicateVertexInEdge(HypergraphError):
    pass


class UnknownVertexLabel(HypergraphError):
    pass


class NonpositiveWeight(HypergraphError):
    pass


class DisconnectedHypergraph(HypergraphError):
    pass


@dataclass(frozen=True)
class Hyperedge:
    vertices: tuple[int, ...]
    weight: float = 1.0

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, u: object) -> bool:
        return u in self.vertices


@dataclass(frozen=True)
class Hypergraph:
    """Validated hypergraph; construct through :func:`validate` or :meth:`from_edges`."""

    n_vertices: int
    labels: tuple[str, ...]
    edges: tuple[Hyperedge, ...]
    _incident: tuple[tuple[int, ...], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise HypergraphError("a hypergraph needs at least one vertex")
        if len(self.labels) != self.n_vertices:
            raise HypergraphError("one label per vertex is required")
        if len(set(self.labels)) != self.n_vertices:
            raise HypergraphError("vertex labels must be distinct")
        for e in self.edges:
            _check_edge(e.vertices, e.weight, self.n_vertices)
        incident: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for j, e in enumerate(self.edges):
            for u in e.vertices:
                incident[u].append(j)
        object.__setattr__(self, "_incident", tuple(tuple(x) for x in incident))

    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Iterable[Iterable[int]],
        weights: Sequence[float] | None = None,
        labels: Sequence[str] | None = None,
    ) -> "Hypergraph":
        """Build from integer vertex indices (labels default to ``"0"``, ``"1"``, ...)."""
        edge_list = [list(e) for e in edges]
        if weights is None:
            weights = [1.0] * len(edge_list)
        if len(weights) != len(edge_list):
            raise HypergraphError("one weight per edge is required")
        hedges = []
        for e, w in zip(edge_list, weights):
            _check_edge(e, w, n_vertices)
            hedges.append(Hyperedge(tuple(sorted(e)), float(w)))
        if labels is None:
            labels = [str(i) for i in range(n_vertices)]
        return cls(n_vertices, tuple(labels), tuple(hedges))

    @property
    def weights(self) -> list[float]:
        return [e.weight for e in self.edges]

    @property
    def rank(self) -> int:
        """Largest hyperedge cardinality (0 for an edgeless hypergraph)."""
        return max((len(e) for e in self.edges), default=0)

    def incident_edges(self, u: int) -> tuple[int, ...]:
        return self._incident[u]

    def is_uniform(self, m: int | None = None) -> bool:
        sizes = {len(e) for e in self.edges}
        if m is None:
            return len(sizes) <= 1
        return sizes <= {m}

    def with_weights(self, weights: Sequence[float]) -> "Hypergraph":
        return Hypergraph.from_edges(
            self.n_vertices, [e.vertices for e in self.edges], weights, self.labels
        )

    def unit_weight(self) -> "Hypergraph":
        return self.with_weights([1.0] * len(self.edges))

    def neighbors(self, u: int) -> set[int]:
        out: set[int] = set()
        for j in self._incident[u]:
            out.update(self.edges[j].vertices)
        out.discard(u)
        return out


def _check_edge(vertices: Sequence[int], weight: float, n: int) -> None:
    if len(vertices) < 2:
        raise EmptyEdge(f"hyperedge {list(vertices)} has fewer than two vertices")
    if len(set(vertices)) != len(vertices):
        raise DuplicateVertexInEdge(f"hyperedge {list(vertices)} repeats a vertex")
    for u in vertices:
        if not 0 <= u < n:
            raise UnknownVertexLabel(f"vertex index {u} outside [0, {n})")
    if not weight > 0 or weight != weight or weight == float("inf"):
        raise NonpositiveWeight(f"hyperedge weight must be positive and finite, got {weight}")


def validate(
    raw_vertices: Sequence[str],
    raw_edges: Iterable[Iterable[str]],
    weights: Sequence[float] | None = None,
) -> Hypergraph:
    """Validate labelled input and return a :class:`Hypergraph`.

    ``raw_vertices`` fixes the internal ordering: label ``raw_vertices[i]``
    becomes vertex ``i``.
    """
    labels = [str(v) for v in raw_vertices]
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise HypergraphError("vertex labels must be distinct")
    edges = []
    for raw in raw_edges:
        raw = [str(v) for v in raw]
        for v in raw:
            if v not in index:
                raise UnknownVertexLabel(f"unknown vertex label {v!r}")
        edges.append([index[v] for v in raw])
    return Hypergraph.from_edges(len(labels), edges, weights, labels)


def is_connected(G: Hypergraph) -> bool:
    return len(_bfs_distances(G, 0)) == G.n_vertices


def degree(G: Hypergraph, u: int) -> int:
    """Number of hyperedges containing ``u``."""
    return len(G.incident_edges(u))


def codegree(G: Hypergraph, u: int, v: int) -> int:
    """Number of hyperedges containing both ``u`` and ``v``."""
    return sum(1 for j in G.incident_edges(u) if v in G.edges[j])


def clique_expansion(G: Hypergraph) -> Hypergraph:
    """Simple graph joining every pair of vertices that share a hyperedge."""
    pairs = set()
    for e in G.edges:
        pairs.update(itertools.combinations(e.vertices, 2))
    return Hypergraph.from_edges(G.n_vertices, sorted(pairs), labels=G.labels)


def _bfs_distances(G: Hypergraph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    seen_edges: set[int] = set()
    while queue:
        u = queue.popleft()
        for j in G.incident_edges(u):
            if j in seen_edges:
                continue
            seen_edges.add(j)
            for v in G.edges[j].vertices:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
    return dist


def diameter(G: Hypergraph) -> int:
    """Largest shortest-path length over all vertex pairs."""
    best = 0
    for s in range(G.n_vertices):
        dist = _bfs_distances(G, s)
        if len(dist) != G.n_vertices:
            raise DisconnectedHypergraph("diameter is undefined for a disconnected hypergraph")
        best = max(best, max(dist.values()))
    return best


def connected_components(G: Hypergraph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by their smallest vertex."""
    seen = [False] * G.n_vertices
    comps = []
    for s in range(G.n_vertices):
        if seen[s]:
            continue
        comp = sorted(_bfs_distances(G, s))
        for u in comp:
            seen[u] = True
        comps.append(comp)
    return comps


def induced_subhypergraph(G: Hypergraph, vertices: Sequence[int]) -> tuple[Hypergraph, list[int]]:
    """Keep edges lying entirely inside ``vertices``; returns the new hypergraph and
    the map ``new index -> original index``."""
    keep = sorted(vertices)
    new_index = {u: i for i, u in enumerate(keep)}
    edges, weights = [], []
    for e in G.edges:
        if all(u in new_index for u in e.vertices):
            edges.append([new_index[u] for u in e.vertices])
            weights.append(e.weight)
    labels = [G.labels[u] for u in keep]
    return Hypergraph.from_edges(len(keep), edges, weights, labels), keep


def largest_connected_component(G: Hypergraph) -> tuple[Hypergraph, list[int]]:
    """Largest component; ties go to the component holding the smallest index."""
    comps = connected_components(G)
    # components are ordered by smallest vertex, and max() keeps the first maximum
    best = max(comps, key=len)
    return induced_subhypergraph(G, best)

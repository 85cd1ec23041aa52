"""Diffusion operators built from hypergraph incidence.

All builders return dense symmetric ``numpy`` arrays. Sign convention: every
operator here is negative semidefinite (it is the *negative* of a Laplacian),
so ``x @ L @ x <= 0`` and ``L @ ones == 0``.
"""
from __future__ import annotations

import itertools

import numpy as np

from .hypergraph import Hypergraph, clique_expansion


def _symmetrize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def incidence(G: Hypergraph) -> np.ndarray:
    """``n_vertices x n_edges`` 0/1 matrix with ``chi[u, e] = 1`` iff ``u`` lies in ``e``."""
    chi = np.zeros((G.n_vertices, len(G.edges)))
    for j, e in enumerate(G.edges):
        chi[list(e.vertices), j] = 1.0
    return chi


def edge_operator(e, n: int) -> np.ndarray:
    """Per-edge operator ``H_e = |e|/(|e|-1) * (chi_e chi_e^T / |e| - D_e)``.

    Inside the edge the diagonal is ``-1`` and off-diagonals are ``1/(|e|-1)``;
    rows and columns outside ``e`` are zero.
    """
    verts = list(getattr(e, "vertices", e))
    m = len(verts)
    if m < 2:
        raise ValueError("an edge needs at least two vertices")
    H = np.zeros((n, n))
    idx = np.ix_(verts, verts)
    H[idx] = 1.0 / (m - 1)
    H[verts, verts] = -1.0
    return H


def build_Lw(G: Hypergraph) -> np.ndarray:
    """Weighted diffusion operator ``sum_e w(e) H_e``."""
    n = G.n_vertices
    off = np.zeros((n, n))
    diag = np.zeros(n)
    for e in G.edges:
        verts = list(e.vertices)
        block = np.full((len(verts), len(verts)), e.weight / (len(verts) - 1))
        np.fill_diagonal(block, 0.0)
        off[np.ix_(verts, verts)] += block
        diag[verts] -= e.weight
    # diagonal kept apart so integer-valued entries stay exact
    return _symmetrize(off) + np.diag(diag)


def build_C(G: Hypergraph) -> np.ndarray:
    """Unweighted operator ``sum_m m/(m-1) B_m`` (edge weights are ignored)."""
    return build_Lw(G.unit_weight())


def build_Bm(G: Hypergraph, m: int) -> np.ndarray:
    """``B_m = chi chi^T / m - D`` over the edges of cardinality ``m`` only."""
    cols = [j for j, e in enumerate(G.edges) if len(e) == m]
    chi = incidence(G)[:, cols]
    D = np.diag(chi.sum(axis=1))
    return _symmetrize(chi @ chi.T / m - D)


def clique_laplacian(G: Hypergraph) -> np.ndarray:
    """Negative graph Laplacian of the clique expansion (adjacency minus degree)."""
    n = G.n_vertices
    A = np.zeros((n, n))
    for e in clique_expansion(G).edges:
        u, v = e.vertices
        A[u, v] = A[v, u] = 1.0
    return A - np.diag(A.sum(axis=1))


def _as_vertex_array(G: Hypergraph, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[0] != G.n_vertices:
        raise ValueError(f"expected one value per vertex ({G.n_vertices}), got shape {x.shape}")
    return x


def apply_pointwise(G: Hypergraph, x) -> np.ndarray:
    """``L_w x`` evaluated vertex by vertex without forming ``L_w``.

    ``(L_w x)(u) = sum_{e ∋ u} w(e)/(|e|-1) * sum_{v in e} (x(v) - x(u))``.
    ``x`` may be a vector or an ``(n, k)`` array of per-vertex states.
    """
    x = _as_vertex_array(G, x)
    out = np.zeros_like(x)
    for u in range(G.n_vertices):
        acc = np.zeros_like(x[u])
        for j in G.incident_edges(u):
            e = G.edges[j]
            verts = list(e.vertices)
            acc = acc + e.weight / (len(verts) - 1) * (x[verts] - x[u]).sum(axis=0)
        out[u] = acc
    return out


def dirichlet_energy(G: Hypergraph, x) -> float:
    """Pairwise energy ``sum_e w(e)/(|e|-1) sum_{u<v in e} |x(v)-x(u)|^2``.

    Equals ``-<x, L_w x>``; the minus sign follows from ``L_w`` being
    negative semidefinite.
    """
    x = _as_vertex_array(G, x)
    total = 0.0
    for e in G.edges:
        c = e.weight / (len(e) - 1)
        for u, v in itertools.combinations(e.vertices, 2):
            total += c * float(np.sum((x[v] - x[u]) ** 2))
    return total

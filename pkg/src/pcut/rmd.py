"""Rank-modulated-degree graph families.

Similarity networks rebuild a k-NN graph with a per-node neighbor count
scaled by the node's density rank. Connectivity networks only remove edges:
each node marks its weakest ties (fewest common neighbors) down to a
rank-scaled degree target, and an edge is dropped when either endpoint
marks it.
"""

from __future__ import annotations

import numpy as np

from .construction import (as_features, pairwise_distances,
                           _edges_from_selection, _weighted_edges)
from .errors import ParameterError
from .graph import WeightedGraph
from .ranking import common_neighbor_counts


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def modulated_k(k: int, lam: float, r: float, n_nodes: int) -> int:
    """Per-node neighbor count k * (lam + 2 (1-lam) r), rounded and clamped.

    lam = 1 means no modulation; rank 0.5 reproduces k for any lam.
    """
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"lambda must lie in [0, 1], got {lam}")
    if not 0.0 < r <= 1.0:
        raise ParameterError(f"rank must lie in (0, 1], got {r}")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    raw = k * (lam + 2.0 * (1.0 - lam) * r)
    return max(1, min(_round_half_up(raw), n_nodes - 1))


def rmd_similarity_graph(f, ranks, lam: float, k: int,
                         weights: str = "unit",
                         sigma: float | None = None) -> WeightedGraph:
    """Modulated k-NN graph: node v selects its modulated_k nearest neighbors.

    With lam = 1 (or all ranks 0.5) this reproduces knn_graph bit for bit.
    """
    f = as_features(f)
    ranks = np.asarray(ranks, dtype=float)
    if ranks.size != f.n:
        raise ParameterError(f"got {ranks.size} ranks for {f.n} samples")
    dist = pairwise_distances(f)
    k_per_node = np.array([modulated_k(k, lam, float(r), f.n) for r in ranks])
    pairs = _edges_from_selection(dist, k_per_node)
    return WeightedGraph(f.n, _weighted_edges(pairs, dist, weights, sigma))


def degree_target(d: int, lam: float, r: float) -> int:
    """Connectivity-side retained degree d * (lam + (1-lam) r), clamped to [1, d]."""
    if d <= 0:
        return 0
    raw = d * (lam + (1.0 - lam) * r)
    return max(1, min(_round_half_up(raw), d))


def rmd_connectivity_graph(g: WeightedGraph, ranks, lam: float,
                           counts: np.ndarray | None = None) -> WeightedGraph:
    """Sparsify g by per-node marking of lowest-common-neighbor edges.

    Node v keeps degree_target(d(v), lam, R(v)) of its edges and marks the
    rest, choosing the smallest common-neighbor counts first (ties to the
    lower neighbor id). An edge is removed when at least one endpoint marks
    it, so realized degrees may undershoot the per-node targets. Counts are
    taken on the original graph, never on the partially sparsified one;
    pass them in when sweeping many lambdas over the same graph.
    """
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"lambda must lie in [0, 1], got {lam}")
    ranks = np.asarray(ranks, dtype=float)
    if ranks.size != g.n:
        raise ParameterError(f"got {ranks.size} ranks for {g.n} nodes")
    adj = g.adjacency()
    s = common_neighbor_counts(g) if counts is None else counts
    deg = adj.sum(axis=1)
    marked = set()
    for v in range(g.n):
        dv = int(deg[v])
        if dv == 0:
            continue
        drop = dv - degree_target(dv, lam, float(ranks[v]))
        if drop <= 0:
            continue
        nbrs = np.flatnonzero(adj[v])
        order = sorted(zip(s[v, nbrs].tolist(), nbrs.tolist()))
        for _, w in order[:drop]:
            marked.add((v, w) if v < w else (w, v))
    edges = [(u, v, w) for u, v, w in g.edges() if (u, v) not in marked]
    return WeightedGraph(g.n, edges)

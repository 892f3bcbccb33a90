"""Similarity-network graph construction from feature data.

All neighbor searches are brute force over the full distance matrix; at the
sample sizes this package targets (a few thousand points) that is faster and
simpler than a spatial index, and it keeps results exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InputError, ParameterError
from .graph import WeightedGraph


@dataclass(frozen=True)
class FeatureMatrix:
    """n points in d-dimensional real feature space."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        object.__setattr__(self, "x", x)
        if x.shape[0] < 2:
            raise InputError("feature matrix needs at least two samples")
        if not np.isfinite(x).all():
            raise InputError("feature matrix contains non-finite values")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]


def as_features(f) -> FeatureMatrix:
    if isinstance(f, FeatureMatrix):
        return f
    return FeatureMatrix(np.asarray(f))


def pairwise_distances(f) -> np.ndarray:
    """Euclidean distance matrix with an exactly zero diagonal."""
    f = as_features(f)
    d = cdist(f.x, f.x)
    np.fill_diagonal(d, 0.0)
    return d


def rbf_weight(dist, sigma: float):
    """exp(-dist^2 / (2 sigma^2)); lies in (0, 1] and decreases in dist."""
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    dist = np.asarray(dist, dtype=float)
    return np.exp(-(dist * dist) / (2.0 * sigma * sigma))


def _edges_from_selection(dist, k_per_node):
    """Union-symmetrized nearest-neighbor edge set with per-node counts.

    Ties at the k-th distance break toward the lower node id (stable sort).
    """
    n = dist.shape[0]
    d = dist.copy()
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1, kind="stable")
    pairs = set()
    for v in range(n):
        kv = int(k_per_node[v])
        for w in order[v, :kv]:
            w = int(w)
            pairs.add((v, w) if v < w else (w, v))
    return sorted(pairs)


def _weighted_edges(pairs, dist, weights, sigma):
    if weights == "unit":
        return [(u, v, 1.0) for u, v in pairs]
    if weights == "rbf":
        out = []
        for u, v in pairs:
            w = float(rbf_weight(dist[u, v], sigma))
            if w > 0.0:  # exp underflow at extreme distances means "no edge"
                out.append((u, v, w))
        return out
    raise ParameterError(f"unknown weighting {weights!r}")


def knn_graph(f, k: int, weights: str = "unit", sigma: float | None = None) -> WeightedGraph:
    """k-nearest-neighbor graph, union-symmetrized."""
    f = as_features(f)
    if not 1 <= k < f.n:
        raise ParameterError(f"k must satisfy 1 <= k < n, got k={k}, n={f.n}")
    dist = pairwise_distances(f)
    pairs = _edges_from_selection(dist, np.full(f.n, k))
    return WeightedGraph(f.n, _weighted_edges(pairs, dist, weights, sigma))


def epsilon_graph(f, eps: float, weights: str = "unit", sigma: float | None = None) -> WeightedGraph:
    """Graph joining every pair at distance <= eps."""
    f = as_features(f)
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    dist = pairwise_distances(f)
    iu, iv = np.triu_indices(f.n, 1)
    mask = dist[iu, iv] <= eps
    pairs = list(zip(iu[mask].tolist(), iv[mask].tolist()))
    return WeightedGraph(f.n, _weighted_edges(pairs, dist, weights, sigma))


def full_rbf_graph(f, sigma: float) -> WeightedGraph:
    """Complete graph with RBF weights."""
    f = as_features(f)
    dist = pairwise_distances(f)
    iu, iv = np.triu_indices(f.n, 1)
    pairs = list(zip(iu.tolist(), iv.tolist()))
    return WeightedGraph(f.n, _weighted_edges(pairs, dist, "rbf", sigma))


def avg_knn_distance(f, k: int) -> float:
    """Mean over all nodes of the distance to the k-th nearest neighbor."""
    f = as_features(f)
    if not 1 <= k < f.n:
        raise ParameterError(f"k must satisfy 1 <= k < n, got k={k}, n={f.n}")
    dist = pairwise_distances(f)
    d = dist.copy()
    np.fill_diagonal(d, np.inf)
    kth = np.sort(d, axis=1)[:, k - 1]
    return float(kth.mean())


def construction_k0(n: int) -> int:
    """Neighbor count for the rank-stage baseline graph: round(sqrt(n))."""
    return max(1, min(int(np.floor(np.sqrt(n) + 0.5)), n - 1))


def selection_k0(n: int) -> int:
    """Neighbor count for the model-selection baseline graph."""
    return min(30, n - 1)


def baseline_graph(f, kind: str = "construction") -> WeightedGraph:
    """Baseline k-NN graphs used by the selection pipeline.

    "construction": unit-weight k0-NN graph with k0 = round(sqrt(n)); this is
    the graph the density ranks are computed on.
    "selection": k0 = min(30, n-1) with RBF weights at sigma equal to the
    average k0-NN distance; candidate cut values are compared on this graph.
    """
    f = as_features(f)
    if f.n < 4:
        raise ParameterError(f"baseline graphs need n >= 4, got {f.n}")
    if kind == "construction":
        return knn_graph(f, construction_k0(f.n))
    if kind == "selection":
        k0 = selection_k0(f.n)
        sigma = avg_knn_distance(f, k0)
        if sigma <= 0.0:
            raise InputError("all points coincide; selection baseline undefined")
        return knn_graph(f, k0, weights="rbf", sigma=sigma)
    raise ParameterError(f"unknown baseline kind {kind!r}")

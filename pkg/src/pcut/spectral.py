"""Spectral clustering: Laplacians, eigenvectors, k-means, and sweep cuts.

Three embedding variants are supported:

- "rcut_unnormalized": eigenvectors of L = D - W.
- "ncut_normalized":   eigenvectors of L_sym with L2-normalized rows.
- "ncut_rw":           random-walk scaling D^{-1/2} of the L_sym eigenvectors
                       (the classic normalized-cut discretization).

The eigendecomposition runs on the positive-degree subgraph; isolated nodes
get an all-zero embedding row and join whichever cluster k-means assigns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericError, ParameterError
from .graph import Partition, WeightedGraph

VARIANTS = ("rcut_unnormalized", "ncut_normalized", "ncut_rw")


@dataclass(frozen=True)
class SpectralConfig:
    K: int
    variant: str = "ncut_normalized"
    kmeans_restarts: int = 10
    kmeans_max_iters: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.K < 2:
            raise ParameterError(f"cluster count must be >= 2, got {self.K}")
        if self.variant not in VARIANTS:
            raise ParameterError(f"variant must be one of {VARIANTS}")


def laplacian(g: WeightedGraph, variant: str = "rcut_unnormalized") -> np.ndarray:
    """Graph Laplacian; the normalized form puts 0 on isolated diagonals."""
    w = g.weight_matrix()
    d = w.sum(axis=1)
    if variant == "rcut_unnormalized":
        lap = -w.copy()
        np.fill_diagonal(lap, d)
        return lap
    if variant in ("ncut_normalized", "ncut_rw"):
        inv_sqrt = np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
        lap = -w * inv_sqrt[:, None] * inv_sqrt[None, :]
        np.fill_diagonal(lap, np.where(d > 0, 1.0, 0.0))
        return lap
    raise ParameterError(f"variant must be one of {VARIANTS}")


def smallest_eigenvectors(m: np.ndarray, K: int):
    """K eigenpairs with smallest eigenvalues of a symmetric matrix.

    Eigenvalues come back ascending; each eigenvector's first component with
    magnitude above 1e-12 is made nonnegative so signs are deterministic.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError("expected a square matrix")
    if m.size and np.abs(m - m.T).max() > 1e-9:
        raise InputError("matrix is not symmetric to tolerance 1e-9")
    if not 1 <= K <= m.shape[0]:
        raise ParameterError(f"K must lie in [1, {m.shape[0]}], got {K}")
    sym = 0.5 * (m + m.T)
    try:
        vals, vecs = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    vals = vals[:K]
    vecs = vecs[:, :K].copy()
    for j in range(K):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            vecs[:, j] = -col
    scale = max(np.abs(vals).max() if vals.size else 0.0,
                np.abs(sym).max() if sym.size else 0.0, 1.0)
    residual = np.linalg.norm(sym @ vecs - vecs * vals[None, :], axis=0)
    if residual.size and residual.max() > 1e-8 * scale:
        raise NumericError(
            f"eigenpair residual {residual.max():.3e} exceeds 1e-8 * {scale:.3e}")
    return vecs, vals


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream]))


def _wcss(points, labels, K):
    total = 0.0
    for k in range(K):
        mask = labels == k
        if mask.any():
            center = points[mask].mean(axis=0)
            total += float(((points[mask] - center) ** 2).sum())
    return total


def kmeans(points: np.ndarray, K: int, restarts: int = 10,
           max_iters: int = 100, seed: int = 0) -> Partition:
    """Best-of-restarts Lloyd iterations with careful seeding.

    Initial centers are drawn with probability proportional to the squared
    distance from the chosen ones; ties across restarts keep the earlier
    restart. Deterministic given the seed.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = points.shape[0]
    if n < K:
        raise ParameterError(f"need at least K={K} points, got {n}")
    best_labels = None
    best_w = np.inf
    for restart in range(restarts):
        rng = _rng(seed, restart)
        centers = [points[int(rng.integers(n))]]
        while len(centers) < K:
            d2 = np.min([((points - c) ** 2).sum(axis=1) for c in centers], axis=0)
            total = float(d2.sum())
            if total <= 0.0:
                centers.append(points[int(rng.integers(n))])
                continue
            centers.append(points[int(rng.choice(n, p=d2 / total))])
        centers = np.asarray(centers)
        labels = None
        for _ in range(max_iters):
            d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_labels = d2.argmin(axis=1)
            if labels is not None and np.array_equal(new_labels, labels):
                break
            labels = new_labels
            for k in range(K):
                mask = labels == k
                if mask.any():
                    centers[k] = points[mask].mean(axis=0)
                else:
                    centers[k] = points[int(d2.min(axis=1).argmax())]
        w = _wcss(points, labels, K)
        if w < best_w:
            best_w = w
            best_labels = labels
    return Partition(assignment=best_labels, K=K)


def normalized_bundle(g: WeightedGraph, K: int):
    """Shared eigendecomposition of the normalized Laplacian.

    Returns None for graphs with no edges. The bundle carries enough
    eigenvectors for both the K-dimensional embeddings and the sweep cut,
    so candidate generators can reuse a single decomposition.
    """
    deg = g.degrees()
    active = np.flatnonzero(deg > 0)
    if active.size < 2:
        return None
    sub = g.subgraph(active)
    keff = min(max(K, 4), sub.n)
    vecs, vals = smallest_eigenvectors(laplacian(sub, "ncut_normalized"), keff)
    return {"active": active, "sub": sub, "deg": sub.degrees(),
            "vecs": vecs, "vals": vals}


def _embedding_rows(bundle, K: int, variant: str, n: int) -> np.ndarray:
    out = np.zeros((n, K))
    if bundle is None:
        return out
    keff = min(K, bundle["vecs"].shape[1])
    vecs = bundle["vecs"][:, :keff]
    if variant == "ncut_normalized":
        norms = np.linalg.norm(vecs, axis=1)
        vecs = vecs / np.where(norms > 1e-12, norms, 1.0)[:, None]
    elif variant == "ncut_rw":
        vecs = vecs / np.sqrt(bundle["deg"])[:, None]
    out[bundle["active"], :keff] = vecs
    return out


def spectral_embedding(g: WeightedGraph, K: int, variant: str) -> np.ndarray:
    """Rows of the K smallest eigenvectors; zero rows for isolated nodes."""
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}")
    if variant in ("ncut_normalized", "ncut_rw"):
        return _embedding_rows(normalized_bundle(g, K), K, variant, g.n)
    deg = g.degrees()
    active = np.flatnonzero(deg > 0)
    out = np.zeros((g.n, K))
    if active.size == 0:
        return out
    sub = g.subgraph(active)
    keff = min(K, sub.n)
    vecs, _ = smallest_eigenvectors(laplacian(sub, variant), keff)
    out[active, :keff] = vecs
    return out


def spectral_clustering(g: WeightedGraph, cfg: SpectralConfig) -> Partition:
    """Embed with the K smallest eigenvectors, then k-means."""
    points = spectral_embedding(g, cfg.K, cfg.variant)
    return kmeans(points, cfg.K, restarts=cfg.kmeans_restarts,
                  max_iters=cfg.kmeans_max_iters, seed=cfg.seed)


def sweep_from_bundle(bundle, n: int, min_side: float) -> Partition | None:
    """Minimum-cut prefix of the random-walk Fiedler ordering.

    Scans prefixes of the sorted first nontrivial eigenvector (random-walk
    scaling) and returns the bipartition with the smallest cut among those
    whose sides both exceed min_side nodes; isolated nodes count toward the
    complement side. Returns None when no prefix qualifies.
    """
    if bundle is None:
        return None
    vals = bundle["vals"]
    nontrivial = next((j for j in range(len(vals)) if vals[j] > 1e-8), None)
    if nontrivial is None:
        return None
    active = bundle["active"]
    sub = bundle["sub"]
    w = sub.weight_matrix()
    d = bundle["deg"]
    coords = bundle["vecs"][:, nontrivial] / np.sqrt(d)
    order = np.argsort(coords, kind="stable")
    w_ordered = w[order][:, order]
    d_ordered = d[order]
    # prefix cut: add each node's degree, subtract twice its ties into the prefix
    internal = np.tril(w_ordered, -1).sum(axis=1)
    cuts = np.cumsum(d_ordered - 2.0 * internal)
    sizes0 = np.arange(1, sub.n + 1)
    sizes1 = n - sizes0
    ok = (sizes0 > min_side) & (sizes1 > min_side)
    ok[-1] = False  # the full prefix is not a bipartition
    if not ok.any():
        return None
    masked = np.where(ok, cuts, np.inf)
    best_pos = int(masked.argmin())
    if not np.isfinite(masked[best_pos]):
        return None
    labels = np.ones(n, dtype=np.int64)
    labels[active[order[:best_pos + 1]]] = 0
    return Partition(assignment=labels, K=2)


def sweep_min_cut(g: WeightedGraph, min_side: float) -> Partition | None:
    """Convenience wrapper building the decomposition for a single sweep."""
    return sweep_from_bundle(normalized_bundle(g, 2), g.n, min_side)

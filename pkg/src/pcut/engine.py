"""Candidate generation over the graph-parameter grid and cut-based selection.

Candidates are spectral partitions of rank-modulated graphs across the
parameter grid; the selected partition minimizes the cut value on a fixed
baseline graph among candidates whose smallest cluster strictly exceeds
delta * n nodes. Partitions at exactly the threshold count as "smaller than
delta n" and are discarded, which keeps degenerate boundary clusters out.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .construction import (FeatureMatrix, as_features, avg_knn_distance,
                           baseline_graph)
from .errors import (ConstraintError, InputError, NoFeasiblePartitionError,
                     ParameterError, UndefinedRatioError)
from .graph import Partition, WeightedGraph, cut_value
from .propagation import LabelSet, grf_propagate
from .ranking import (common_neighbor_counts, eta_connectivity,
                      eta_similarity, rank)
from .rmd import rmd_connectivity_graph, rmd_similarity_graph
from .spectral import (VARIANTS, SpectralConfig, _embedding_rows, kmeans,
                       normalized_bundle, spectral_clustering, sweep_from_bundle)

DEFAULT_SIMILARITY_LAMBDAS = tuple(round(0.2 * i, 1) for i in range(6))
DEFAULT_CONNECTIVITY_LAMBDAS = tuple(round(0.5 + 0.025 * i, 3) for i in range(21))
DEFAULT_K_GRID = (5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 120, 150)
DEFAULT_SIGMA_EXPONENTS = tuple(range(-3, 4))

_GENERATOR_PRIORITY = {"sc": 0, "sc_alt": 1, "sweep": 2, "grf": 0}


def mix_seed(seed: int, index: int) -> int:
    """Derive a per-candidate seed from the run seed and the grid index."""
    x = (index + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    x ^= x >> 31
    return (seed ^ x) & 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class PCutConfig:
    """Grid, constraint, and black-box configuration for one run."""

    K: int
    task: str = "clustering"              # clustering | ssl
    modality: str = "similarity"          # similarity | connectivity
    delta: float = 0.05
    lambda_grid: tuple = ()
    k_grid: tuple = ()
    sigma_exponents: tuple = ()
    variant: str = "ncut_rw"              # spectral flavor of the SC black box
    extra_variants: tuple = ()            # additional k-means flavors per grid point
    sweep_cuts: bool = False              # add min-cut sweep candidates (K=2 only)
    kmeans_restarts: int = 10
    kmeans_max_iters: int = 100
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.K < 2:
            raise ParameterError(f"cluster count must be >= 2, got {self.K}")
        if self.task not in ("clustering", "ssl"):
            raise ParameterError(f"unknown task {self.task!r}")
        if self.modality not in ("similarity", "connectivity"):
            raise ParameterError(f"unknown modality {self.modality!r}")
        if not 0.0 < self.delta <= 0.5:
            raise ParameterError(f"delta must lie in (0, 0.5], got {self.delta}")
        if self.variant not in VARIANTS:
            raise ParameterError(f"variant must be one of {VARIANTS}")
        for v in self.extra_variants:
            if v not in VARIANTS:
                raise ParameterError(f"variant must be one of {VARIANTS}")

    def lambdas(self) -> tuple:
        if self.lambda_grid:
            return tuple(self.lambda_grid)
        if self.modality == "similarity":
            return DEFAULT_SIMILARITY_LAMBDAS
        return DEFAULT_CONNECTIVITY_LAMBDAS

    def ks(self, n: int) -> tuple:
        grid = self.k_grid if self.k_grid else DEFAULT_K_GRID
        out = tuple(k for k in grid if 1 <= k <= n - 1)
        if not out:
            raise ParameterError("k grid is empty after clipping to [1, n-1]")
        return out

    def sigma_exps(self) -> tuple:
        return tuple(self.sigma_exponents) if self.sigma_exponents else DEFAULT_SIGMA_EXPONENTS


@dataclass(frozen=True)
class CandidateCut:
    """A candidate partition plus the parameters that generated it."""

    partition: Partition
    lam: float
    k: int | None
    sigma: float | None
    generator: str
    feasible: bool
    min_cluster_size: int
    baseline_cut: float
    normalized_cut: float
    index: int

    def params(self) -> dict:
        return {"lambda": self.lam, "k": self.k, "sigma": self.sigma,
                "generator": self.generator}


def _feasible(min_size: int, delta: float, n: int) -> bool:
    return min_size > delta * n


def _candidate(partition, lam, k, sigma, generator, cfg, n, baseline,
               baseline_edges, index):
    sizes = partition.sizes()
    min_size = int(sizes.min())
    cut = cut_value(baseline, partition)
    return CandidateCut(
        partition=partition, lam=lam, k=k, sigma=sigma, generator=generator,
        feasible=_feasible(min_size, cfg.delta, n),
        min_cluster_size=min_size, baseline_cut=cut,
        normalized_cut=cut / baseline_edges if baseline_edges else 0.0,
        index=index)


def generate_candidates(data, cfg: PCutConfig,
                        labels: LabelSet | None = None) -> list[CandidateCut]:
    """Build the RMD family over the grid and score every partition.

    The density rank vector is computed once (on the construction baseline
    for features, on the input graph for networks) and reused across the
    grid. Cut values are taken on the model-selection baseline graph for the
    similarity modality and on the original input graph for connectivity.
    """
    if cfg.task == "ssl" and labels is None:
        raise ParameterError("ssl task needs a label set")
    if cfg.modality == "similarity":
        return _similarity_candidates(as_features(data), cfg, labels)
    if not isinstance(data, WeightedGraph):
        raise InputError("connectivity modality expects a WeightedGraph")
    return _connectivity_candidates(data, cfg, labels)


def _partitions_for_graph(graph, cfg, labels, cand_seed, min_side):
    """One partition per enabled generator on a single candidate graph.

    The normalized flavors and the sweep share one eigendecomposition.
    """
    out = []
    if cfg.task == "ssl":
        try:
            out.append(("grf", grf_propagate(graph, labels)))
        except ConstraintError:
            # a modulated graph may strand unlabeled components; that grid
            # point simply contributes no candidate
            pass
        return out
    flavors = [("sc", cfg.variant)]
    for extra in cfg.extra_variants:
        if extra != cfg.variant:
            flavors.append(("sc_alt", extra))
    needs_bundle = (cfg.sweep_cuts and cfg.K == 2) or any(
        v in ("ncut_normalized", "ncut_rw") for _, v in flavors)
    bundle = normalized_bundle(graph, cfg.K) if needs_bundle else None
    for gen, variant in flavors:
        if variant in ("ncut_normalized", "ncut_rw"):
            points = _embedding_rows(bundle, cfg.K, variant, graph.n)
            part = kmeans(points, cfg.K, restarts=cfg.kmeans_restarts,
                          max_iters=cfg.kmeans_max_iters, seed=cand_seed)
        else:
            sc = SpectralConfig(K=cfg.K, variant=variant,
                                kmeans_restarts=cfg.kmeans_restarts,
                                kmeans_max_iters=cfg.kmeans_max_iters,
                                seed=cand_seed)
            part = spectral_clustering(graph, sc)
        out.append((gen, part))
    if cfg.sweep_cuts and cfg.K == 2:
        swept = sweep_from_bundle(bundle, graph.n, min_side)
        if swept is not None:
            out.append(("sweep", swept))
    return out


def _run_grid(points, build_graph, cfg, labels, n, baseline, baseline_edges):
    min_side = cfg.delta * n

    def job(item):
        grid_index, params = item
        graph = build_graph(params)
        cand_seed = mix_seed(cfg.seed, grid_index)
        produced = _partitions_for_graph(graph, cfg, labels, cand_seed, min_side)
        return grid_index, params, produced

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(job, enumerate(points)))
    else:
        results = [job(item) for item in enumerate(points)]
    results.sort(key=lambda r: r[0])
    candidates = []
    index = 0
    for grid_index, params, produced in results:
        lam, k, sigma = params
        for generator, partition in produced:
            candidates.append(_candidate(partition, lam, k, sigma, generator,
                                         cfg, n, baseline, baseline_edges, index))
            index += 1
    return candidates


def _similarity_candidates(f: FeatureMatrix, cfg, labels):
    ranks = rank(eta_similarity(f, baseline_graph(f, "construction")))
    selection = baseline_graph(f, "selection")
    baseline_edges = selection.m
    ks = cfg.ks(f.n)
    dk = {k: avg_knn_distance(f, k) for k in ks}
    points = [(lam, k, (2.0 ** j) * dk[k])
              for lam, k, j in itertools.product(cfg.lambdas(), ks, cfg.sigma_exps())]

    def build(params):
        lam, k, sigma = params
        return rmd_similarity_graph(f, ranks, lam, k, weights="rbf", sigma=sigma)

    return _run_grid(points, build, cfg, labels, f.n, selection, baseline_edges)


def _connectivity_candidates(g: WeightedGraph, cfg, labels):
    counts = common_neighbor_counts(g)
    ranks = rank(eta_connectivity(g))
    points = [(lam, None, None) for lam in cfg.lambdas()]

    def build(params):
        lam, _, _ = params
        return rmd_connectivity_graph(g, ranks, lam, counts=counts)

    return _run_grid(points, build, cfg, labels, g.n, g, g.m)


def pcut_select(candidates: list[CandidateCut]) -> CandidateCut:
    """Minimum baseline cut among feasible candidates.

    Ties break toward larger lambda, then the primary generator, then larger
    smallest cluster, then grid order.
    """
    if not candidates:
        raise ParameterError("candidate list is empty")
    feasible = [c for c in candidates if c.feasible]
    if not feasible:
        best_bad = min(candidates,
                       key=lambda c: (c.baseline_cut, -c.min_cluster_size, c.index))
        raise NoFeasiblePartitionError(
            "no candidate satisfies the minimum-cluster-size constraint; "
            f"best infeasible: params={best_bad.params()}, "
            f"min cluster size {best_bad.min_cluster_size}, "
            f"cut {best_bad.baseline_cut}",
            best_infeasible=best_bad)
    return min(feasible, key=lambda c: (
        c.baseline_cut, -c.lam, _GENERATOR_PRIORITY.get(c.generator, 9),
        -c.min_cluster_size, c.index))


def cut_ratio_diagnostics(g: WeightedGraph, p: Partition,
                          p_balanced: Partition):
    """(q, y, rcut_ratio) of a binary partition against a balanced one.

    q is the cut-value ratio, y the share of the smaller side, and a
    rcut_ratio below 1 means the cardinality-normalized objective prefers
    the imbalanced partition.
    """
    if p.K != 2 or p_balanced.K != 2:
        raise ParameterError("diagnostics are defined for binary partitions")
    balanced_cut = cut_value(g, p_balanced)
    if balanced_cut <= 0.0:
        raise UndefinedRatioError("balanced partition has zero cut value")
    q = cut_value(g, p) / balanced_cut
    y = p.min_size() / p.n
    return q, y, q / (4.0 * y * (1.0 - y))

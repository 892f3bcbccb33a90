"""Harmonic label propagation over Gaussian random fields.

Unlabeled scores solve L_uu F_u = W_ul F_l with one-hot labeled rows, so each
unlabeled node's score is the weighted mean of its neighbors' scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ConstraintError, InputError, NumericError
from .graph import Partition, WeightedGraph, connected_components


@dataclass(frozen=True)
class LabelSet:
    """Seed labels: (node id, class) pairs covering every class at least once."""

    labeled: tuple
    K: int

    def __post_init__(self):
        pairs = tuple((int(n), int(c)) for n, c in self.labeled)
        object.__setattr__(self, "labeled", pairs)
        if self.K < 2:
            raise InputError(f"class count must be >= 2, got {self.K}")
        nodes = [n for n, _ in pairs]
        if len(set(nodes)) != len(nodes):
            raise InputError("a node appears twice in the label set")
        classes = {c for _, c in pairs}
        if not classes <= set(range(self.K)):
            raise InputError("class indices must lie in [0, K)")
        missing = set(range(self.K)) - classes
        if missing:
            raise InputError(f"classes {sorted(missing)} have no labeled node")

    def nodes(self) -> np.ndarray:
        return np.asarray([n for n, _ in self.labeled], dtype=np.int64)

    def classes(self) -> np.ndarray:
        return np.asarray([c for _, c in self.labeled], dtype=np.int64)


def grf_scores(g: WeightedGraph, labels: LabelSet) -> np.ndarray:
    """Per-node class scores; labeled rows are one-hot."""
    nodes = labels.nodes()
    if nodes.size and (nodes.min() < 0 or nodes.max() >= g.n):
        raise InputError("labeled node id outside the graph")
    comps = connected_components(g)
    labeled_comps = set(comps.assignment[nodes].tolist())
    for comp in range(comps.K):
        if comp not in labeled_comps:
            members = np.flatnonzero(comps.assignment == comp).tolist()
            raise ConstraintError(
                f"connected component {comp} (nodes {members}) has no labeled node")
    w = g.weight_matrix()
    deg = w.sum(axis=1)
    scores = np.zeros((g.n, labels.K))
    scores[nodes, labels.classes()] = 1.0
    unlabeled = np.setdiff1d(np.arange(g.n), nodes)
    if unlabeled.size:
        l_uu = -w[np.ix_(unlabeled, unlabeled)]
        np.fill_diagonal(l_uu, deg[unlabeled])
        w_ul = w[np.ix_(unlabeled, nodes)]
        rhs = w_ul @ scores[nodes]
        try:
            factor = cho_factor(l_uu)
            scores[unlabeled] = cho_solve(factor, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"harmonic system is singular: {exc}") from exc
    return scores


def grf_propagate(g: WeightedGraph, labels: LabelSet) -> Partition:
    """Assign every node the argmax class of the harmonic scores.

    Ties resolve to the lower class index; labeled nodes keep their labels.
    """
    scores = grf_scores(g, labels)
    assignment = scores.argmax(axis=1)  # argmax takes the first maximum
    assignment[labels.nodes()] = labels.classes()
    return Partition(assignment=assignment, K=labels.K)

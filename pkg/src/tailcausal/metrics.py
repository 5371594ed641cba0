"""Structural Intervention Distance and bootstrap evaluation of orderings.

SID counts ordered node pairs (i, j) for which the estimated graph's parent
set of i fails to be a valid adjustment set for the effect of i on j in the
true graph. Validity uses the complete graphical criterion: the set must
avoid descendants of nodes on proper causal paths and must d-separate i from
j once the first edges of those causal paths are removed; a set containing j
itself is valid exactly when j is not a descendant of i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discovery import AlgoParams, causal_order
from .extremes import SampleMatrix, pit_frechet2
from .graph import Dag, d_separated

__all__ = ["SidScore", "full_dag_from_order", "sid", "bootstrap_sid"]


@dataclass(frozen=True)
class SidScore:
    """Count of wrongly adjusted pairs plus its d(d-1) normalisation."""

    raw: int
    normalized: float

    def __post_init__(self):
        if not 0.0 <= self.normalized <= 1.0:
            raise ValueError("normalised SID must lie in [0, 1]")


def full_dag_from_order(ordering) -> Dag:
    """Fully connected DAG consistent with an ancestral-order permutation.

    Every node receives an edge from each node listed before it, giving
    d(d-1)/2 edges.
    """
    order = [int(v) for v in ordering]
    d = len(order)
    if sorted(order) != list(range(1, d + 1)):
        raise ValueError("ordering must be a permutation of 1..d")
    edges = [
        (order[r], order[s]) for r in range(d) for s in range(r + 1, d)
    ]
    return Dag(d, edges)


def _adjustment_valid(true_dag: Dag, i: int, j: int, zset, desc, anc_inc, children) -> bool:
    if j in zset:
        return j not in desc[i]
    causal_nodes = (desc[i] & anc_inc[j]) - {i}
    if causal_nodes:
        forbidden = set(causal_nodes)
        for v in causal_nodes:
            forbidden |= desc[v]
        if zset & forbidden:
            return False
    # drop the first edge of every proper causal path i -> ... -> j
    removed = frozenset((i, c) for c in children[i] if c in anc_inc[j])
    return d_separated(true_dag, i, j, zset, removed_edges=removed)


def sid(true_dag: Dag, est_dag: Dag) -> SidScore:
    """Structural Intervention Distance between two DAGs on the same nodes."""
    if true_dag.d != est_dag.d:
        raise ValueError("graphs must share the node count")
    d = true_dag.d
    desc = {v: true_dag.descendants(v) for v in range(1, d + 1)}
    anc_inc = {v: true_dag.ancestors_inclusive(v) for v in range(1, d + 1)}
    children = {v: true_dag.children(v) for v in range(1, d + 1)}
    raw = 0
    for i in range(1, d + 1):
        zset = est_dag.parents(i)
        for j in range(1, d + 1):
            if i == j:
                continue
            if not _adjustment_valid(true_dag, i, j, zset, desc, anc_inc, children):
                raw += 1
    pairs = d * (d - 1)
    return SidScore(raw=raw, normalized=raw / pairs if pairs else 0.0)


def bootstrap_sid(
    X: SampleMatrix,
    true_dag: Dag,
    params: AlgoParams,
    replicates: int,
    rng: np.random.Generator,
) -> list[SidScore]:
    """SID distribution over row resamples of the data.

    Each replicate resamples n rows with replacement, re-standardises the
    margins, estimates an ordering and scores its induced full DAG against
    the truth. Deterministic for a fixed generator state.
    """
    if replicates < 1:
        raise ValueError("replicate count must be positive")
    n = X.n
    scores = []
    for _ in range(replicates):
        idx = rng.integers(0, n, size=n)
        resample = SampleMatrix(X.values[idx], margins="raw")
        result = causal_order(pit_frechet2(resample), params)
        est = full_dag_from_order(result.ancestral_order)
        scores.append(sid(true_dag, est))
    return scores

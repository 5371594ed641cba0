"""Causal tail coefficient and a simple ordering baseline built on it.

The coefficient Gamma_ij averages the empirical distribution function of one
variable over the rows where the other is largest; its asymmetry under the
causal direction drives the baseline. The ordering rule here is a deliberately
plain greedy scheme labelled "gamma baseline" in all outputs; it is a
comparison stand-in, not a reimplementation of any published algorithm.
"""

from __future__ import annotations

import io

import numpy as np

from .extremes import SampleMatrix

__all__ = ["causal_tail_coefficient", "gamma_matrix", "gamma_matrix_csv", "gamma_order"]


def causal_tail_coefficient(X: SampleMatrix, i: int, j: int, k: int) -> float:
    """Mean empirical CDF value of column j over the k rows where column i
    is largest.

    Rows are ranked by column i; ties keep the earlier row. The empirical CDF
    uses denominator n + 1, so the result always lies in (0, 1).
    """
    if i == j:
        raise ValueError("coefficient needs two distinct columns")
    values = X.values
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"threshold count k={k} outside 1..{n}")
    xi = values[:, i - 1]
    xj = values[:, j - 1]
    top = np.argsort(-xi, kind="stable")[:k]
    cdf = np.searchsorted(np.sort(xj), xj[top], side="right") / (n + 1.0)
    return float(cdf.mean())


def gamma_matrix(X: SampleMatrix, k: int) -> np.ndarray:
    """All pairwise coefficients; the diagonal is NaN."""
    d = X.d
    G = np.full((d, d), np.nan)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if i != j:
                G[i - 1, j - 1] = causal_tail_coefficient(X, i, j, k)
    return G


def gamma_matrix_csv(G: np.ndarray) -> str:
    """Serialise a coefficient matrix to CSV; diagonal cells stay empty."""
    buffer = io.StringIO()
    for row in G:
        buffer.write(",".join("" if np.isnan(v) else repr(float(v)) for v in row))
        buffer.write("\n")
    return buffer.getvalue()


def gamma_order(X: SampleMatrix, k: int) -> tuple[int, ...]:
    """Greedy ancestral ordering from the coefficient matrix.

    Repeatedly emits the remaining node p maximising min_q Gamma_pq over the
    other remaining nodes (ties broken by label), so likely causes come
    first. Always returns a permutation.
    """
    d = X.d
    if d < 2:
        raise ValueError("ordering needs at least two columns")
    G = gamma_matrix(X, k)
    remaining = list(range(1, d + 1))
    order = []
    while len(remaining) > 1:
        best, best_score = None, -np.inf
        for p in remaining:
            others = [q - 1 for q in remaining if q != p]
            score = float(G[p - 1, others].min())
            if score > best_score or (score == best_score and p < best):
                best, best_score = p, score
        order.append(best)
        remaining.remove(best)
    order.append(remaining[0])
    return tuple(order)

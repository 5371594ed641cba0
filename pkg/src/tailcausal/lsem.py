"""Heavy-tailed linear structural equation models with nonnegative weights.

Builds the innovation coefficient matrix by two independent routes (nilpotent
power sum and path-weight summation), standardises it to unit row norms, and
simulates samples with absolute Student-t innovations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .extremes import RAW, SampleMatrix
from .graph import DEFAULT_PATH_CAP, Dag, enumerate_paths, random_dag

__all__ = [
    "LsemModel",
    "CoefficientMatrix",
    "coefficient_matrix",
    "coefficient_matrix_paths",
    "standardize",
    "verify_path_inequality",
    "random_lsem",
    "simulate",
    "model_to_json",
    "model_from_json",
]

WEIGHT_LOW = 0.1
WEIGHT_HIGH = 1.5


@dataclass(frozen=True)
class LsemModel:
    """Edge-weight matrix C, innovation weights s and tail index alpha on a DAG.

    C[i-1, j-1] is the weight of edge j -> i and must be positive exactly on
    the DAG's edges; s holds the diagonal of the innovation weight matrix.
    """

    dag: Dag
    C: np.ndarray
    s: np.ndarray
    alpha: float = 2.0

    def __post_init__(self):
        C = np.asarray(self.C, dtype=float)
        s = np.asarray(self.s, dtype=float)
        d = self.dag.d
        if C.shape != (d, d):
            raise ValueError(f"C must be {d}x{d}, got {C.shape}")
        if s.shape != (d,):
            raise ValueError(f"s must have length {d}, got {s.shape}")
        if np.any(C < 0):
            raise ValueError("edge weights must be nonnegative")
        if np.any(s <= 0):
            raise ValueError("innovation weights must be positive")
        if self.alpha <= 0:
            raise ValueError("tail index must be positive")
        # np.nonzero yields (row, col) = (i-1, j-1); edges are 1-based (j, i)
        support = {(int(j) + 1, int(i) + 1) for i, j in zip(*np.nonzero(C > 0))}
        if support != set(self.dag.edges):
            raise ValueError("positive entries of C must match the edge set exactly")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "s", s)

    @property
    def d(self) -> int:
        return self.dag.d


@dataclass(frozen=True)
class CoefficientMatrix:
    """Innovation coefficient matrix, optionally row-standardised."""

    values: np.ndarray
    standardized: bool = False
    alpha: float | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("coefficient matrix must be square")
        if np.any(values < 0):
            raise ValueError("coefficient matrix must be nonnegative")
        object.__setattr__(self, "values", values)

    @property
    def d(self) -> int:
        return self.values.shape[0]


def coefficient_matrix(model: LsemModel) -> CoefficientMatrix:
    """A = (I - C)^-1 S via the finite power sum of the nilpotent C."""
    d = model.d
    acc = np.eye(d)
    power = np.eye(d)
    for _ in range(d - 1):
        power = power @ model.C
        acc += power
    return CoefficientMatrix(acc * model.s[None, :])


def coefficient_matrix_paths(
    model: LsemModel, cap: int = DEFAULT_PATH_CAP
) -> CoefficientMatrix:
    """A entrywise from path weights: a_ij sums s_jj times edge products.

    Independent route to :func:`coefficient_matrix`; cost grows with the path
    count, which is capped.
    """
    d = model.d
    A = np.zeros((d, d))
    for i in range(1, d + 1):
        A[i - 1, i - 1] = model.s[i - 1]
        for j in model.dag.ancestors(i):
            total = 0.0
            for path in enumerate_paths(model.dag, j, i, cap=cap):
                weight = model.s[j - 1]
                for parent, child in zip(path, path[1:]):
                    weight *= model.C[child - 1, parent - 1]
                total += weight
            A[i - 1, j - 1] = total
    return CoefficientMatrix(A)


def standardize(A: CoefficientMatrix, alpha: float = 2.0) -> CoefficientMatrix:
    """Rescale each row to unit alpha-norm."""
    if alpha <= 0:
        raise ValueError("tail index must be positive")
    values = A.values
    if np.any(np.diag(values) <= 0):
        raise ValueError("standardisation needs a positive diagonal")
    norms = (values**alpha).sum(axis=1) ** (1.0 / alpha)
    return CoefficientMatrix(values / norms[:, None], standardized=True, alpha=alpha)


def verify_path_inequality(A: CoefficientMatrix, tol: float = 1e-12) -> bool:
    """Check a_ij >= a_ik a_kj / a_kk for all i, j, k (with slack tol)."""
    values = A.values
    diag = np.diag(values)
    if np.any(diag <= 0):
        raise ValueError("inequality check needs a positive diagonal")
    # bound[i, j] = max_k a_ik a_kj / a_kk
    bound = ((values / diag[None, :])[:, :, None] * values[None, :, :]).max(axis=1)
    return bool(np.all(values >= bound - tol))


def random_lsem(
    d: int, p: float, rng: np.random.Generator, alpha: float = 2.0
) -> LsemModel:
    """Random model of the simulation protocol: Bernoulli(p) well-ordered DAG,
    edge and innovation weights i.i.d. Uniform[0.1, 1.5].

    Draw order is fixed (adjacency, then edge weights in row-major
    upper-triangular order, then the s diagonal) so output is reproducible.
    """
    dag = random_dag(d, p, rng)
    C = np.zeros((d, d))
    slots = [(i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1) if (j, i) in dag.edges]
    weights = rng.uniform(WEIGHT_LOW, WEIGHT_HIGH, size=len(slots))
    for (i, j), w in zip(slots, weights):
        C[i - 1, j - 1] = w
    s = rng.uniform(WEIGHT_LOW, WEIGHT_HIGH, size=d)
    return LsemModel(dag=dag, C=C, s=s, alpha=alpha)


def simulate(
    Abar: CoefficientMatrix, n: int, alpha: float, rng: np.random.Generator
) -> SampleMatrix:
    """Draw n observations X = Abar Z with i.i.d. |t_alpha| innovations.

    The Student-t variates come from the normal / chi-square ratio, drawn in
    that order from the generator stream; margins of the output are flagged
    raw because |t_alpha| is only tail-equivalent to the standardised form.
    """
    if n < 1:
        raise ValueError("sample size must be positive")
    if not Abar.standardized:
        raise ValueError("simulation expects a standardised coefficient matrix")
    d = Abar.d
    normals = rng.standard_normal((n, d))
    chisq = rng.chisquare(alpha, (n, d))
    innovations = np.abs(normals / np.sqrt(chisq / alpha))
    return SampleMatrix(innovations @ Abar.values.T, margins=RAW)


def model_to_json(model: LsemModel) -> str:
    """Serialise to the text format with fields d, edges, s, alpha."""
    edges = [[j, i, model.C[i - 1, j - 1]] for j, i in sorted(model.dag.edges)]
    payload = {
        "d": model.d,
        "edges": edges,
        "s": model.s.tolist(),
        "alpha": model.alpha,
    }
    return json.dumps(payload, indent=2) + "\n"


def model_from_json(text: str) -> LsemModel:
    payload = json.loads(text)
    d = int(payload["d"])
    dag = Dag(d, [(int(j), int(i)) for j, i, _ in payload["edges"]])
    C = np.zeros((d, d))
    for j, i, w in payload["edges"]:
        C[int(i) - 1, int(j) - 1] = float(w)
    s = np.asarray(payload["s"], dtype=float)
    return LsemModel(dag=dag, C=C, s=s, alpha=float(payload.get("alpha", 2.0)))

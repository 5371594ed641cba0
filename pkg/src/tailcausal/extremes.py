"""Angular measure, extremal scalings and their empirical estimators.

Theoretical quantities are computed from an innovation coefficient matrix;
empirical ones from a sample with Frechet(2)-standardised margins. Estimation
always uses the Euclidean norm and tail index 2, matching the rank-based
standardisation in :func:`pit_frechet2`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AngularMeasure",
    "SampleMatrix",
    "AngularRepresentation",
    "angular_measure",
    "theoretical_scaling",
    "theoretical_max_scaling",
    "theoretical_scaled_max_scaling",
    "pit_frechet2",
    "angular_decomposition",
    "estimate_scaling_scaled",
    "estimate_scaling_unscaled",
    "estimate_scaling_init",
    "default_threshold_count",
]

RAW = "raw"
FRECHET2 = "frechet2"

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class AngularMeasure:
    """Discrete measure on the positive unit sphere.

    atoms: (m, dim) array of unit vectors (rows), entries >= 0.
    masses: (m,) array of positive weights.
    """

    atoms: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if atoms.ndim != 2 or masses.ndim != 1 or atoms.shape[0] != masses.shape[0]:
            raise ValueError("atoms must be (m, dim) and masses (m,)")
        if np.any(atoms < 0):
            raise ValueError("atoms must lie on the positive sphere")
        norms = np.linalg.norm(atoms, axis=1)
        if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
            raise ValueError("atoms must have unit Euclidean norm")
        if np.any(masses <= 0):
            raise ValueError("masses must be positive")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "masses", masses)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())


@dataclass(frozen=True)
class SampleMatrix:
    """n x d nonnegative observations with a margin-state flag."""

    values: np.ndarray
    margins: str = RAW

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array")
        if np.any(values < 0):
            raise ValueError("sample entries must be nonnegative")
        if self.margins not in (RAW, FRECHET2):
            raise ValueError(f"unknown margin state {self.margins!r}")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class AngularRepresentation:
    """Radii and unit-sphere angles of the sample rows."""

    radii: np.ndarray
    angles: np.ndarray


def _matrix(A) -> np.ndarray:
    values = A.values if hasattr(A, "values") else A
    return np.asarray(values, dtype=float)


def default_threshold_count(n: int) -> int:
    """Default number of thresholded observations, floor(n^0.4)."""
    if n < 1:
        raise ValueError("sample size must be positive")
    return max(1, int(np.floor(n**0.4)))


def angular_measure(A, alpha: float = 2.0) -> AngularMeasure:
    """Discrete angular measure of A Z for independent standardised Z.

    Atom k is the k-th column of A scaled to unit Euclidean norm; its mass is
    the alpha-th power of that column norm. For a standardised matrix with
    alpha = 2, the total mass equals the dimension.
    """
    values = _matrix(A)
    norms = np.linalg.norm(values, axis=0)
    if np.any(norms == 0):
        raise ValueError("coefficient matrix has a zero column")
    atoms = (values / norms).T
    masses = norms**alpha
    return AngularMeasure(atoms=atoms, masses=masses)


def theoretical_scaling(A, i: int, j: int) -> float:
    """Extremal dependence scaling sigma^2_{ij} = sum_k a_ik a_jk (1-based)."""
    values = _matrix(A)
    return float(values[i - 1] @ values[j - 1])


def theoretical_max_scaling(A, subset: Sequence[int]) -> float:
    """Squared scaling of max(X_i : i in subset): sum_k max_i a_ik^2."""
    idx = _indices(subset, _matrix(A).shape[0])
    if not idx:
        raise ValueError("subset must be nonempty")
    sq = _matrix(A)[idx] ** 2
    return float(sq.max(axis=0).sum())


def theoretical_scaled_max_scaling(
    A, i: int, j: int, subset: Sequence[int], a: float
) -> float:
    """Squared scaling of max(X_i, a X_j, a X_subset) for a scalar a > 1."""
    values = _matrix(A)
    d = values.shape[0]
    idx = _indices(subset, d)
    if i == j or (i - 1) in idx or (j - 1) in idx:
        raise ValueError("indices i, j and the identified set must not overlap")
    sq = values**2
    a2 = a * a
    m = a2 * sq[j - 1]
    if idx:
        m = np.maximum(m, a2 * sq[idx].max(axis=0))
    return float(np.maximum(sq[i - 1], m).sum())


def _indices(subset: Sequence[int], d: int) -> list[int]:
    idx = [int(v) - 1 for v in subset]
    for v in idx:
        if not 0 <= v < d:
            raise ValueError(f"node {v + 1} outside range 1..{d}")
    if len(set(idx)) != len(idx):
        raise ValueError("node set contains duplicates")
    return idx


def pit_frechet2(raw: SampleMatrix) -> SampleMatrix:
    """Columnwise empirical PIT to standard Frechet(2) margins.

    Entry (l, i) becomes {-log(r/(n+1))}^{-1/2} where r counts sample values
    in column i that are <= the original entry. Invariant under strictly
    increasing marginal transforms of the input.
    """
    if raw.margins != RAW:
        raise ValueError("input margins are already standardised")
    values = raw.values
    n = values.shape[0]
    out = np.empty_like(values)
    for col in range(values.shape[1]):
        x = values[:, col]
        ranks = np.searchsorted(np.sort(x), x, side="right")
        out[:, col] = (-np.log(ranks / (n + 1.0))) ** -0.5
    return SampleMatrix(out, margins=FRECHET2)


def angular_decomposition(X: SampleMatrix) -> AngularRepresentation:
    """Euclidean radii and angles of each sample row; rejects all-zero rows."""
    values = X.values
    radii = np.linalg.norm(values, axis=1)
    if np.any(radii == 0):
        raise ValueError("sample contains an all-zero row")
    return AngularRepresentation(radii=radii, angles=values / radii[:, None])


def _require_frechet2(X: SampleMatrix) -> np.ndarray:
    if X.margins != FRECHET2:
        raise ValueError("estimator requires Frechet(2)-standardised margins")
    return X.values


def _scaling_pair(
    values: np.ndarray, first: int, rest: tuple[int, ...], a: float, k: int
) -> tuple[float, float]:
    """Scaled and unscaled scaling estimates from the vector (X_first, a X_rest).

    Thresholds on the k-th largest radius of the rescaled vector; ties keep
    every row at the threshold while the divisor stays exactly k. Indices are
    0-based here.
    """
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"threshold count k={k} outside 1..{n}")
    if a < 1.0:
        raise ValueError(f"scale factor must be >= 1, got {a}")
    cols = values[:, (first,) + rest]
    sq = cols * cols
    a2 = a * a
    sq_scaled = sq.copy()
    sq_scaled[:, 1:] *= a2
    r2 = sq_scaled.sum(axis=1)
    thr = np.partition(r2, n - k)[n - k]
    keep = r2 >= thr
    r2_kept = r2[keep]
    prefactor = 1.0 + a2 * len(rest)
    est_scaled = prefactor / k * float((sq_scaled[keep].max(axis=1) / r2_kept).sum())
    est_unscaled = prefactor / k * float((sq[keep].max(axis=1) / r2_kept).sum())
    return est_scaled, est_unscaled


def _split_indices(X: SampleMatrix, i: int, j: int, subset: Sequence[int]):
    d = X.d
    idx = _indices(subset, d)
    i0, j0 = i - 1, j - 1
    if not (0 <= i0 < d and 0 <= j0 < d):
        raise ValueError(f"nodes ({i}, {j}) outside range 1..{d}")
    if i0 == j0 or i0 in idx or j0 in idx:
        raise ValueError("indices i, j and the identified set must not overlap")
    return i0, j0, tuple(idx)


def estimate_scaling_scaled(
    X: SampleMatrix, i: int, j: int, subset: Sequence[int], a: float, k: int
) -> float:
    """Estimate the squared scaling of max(X_i, a X_j, a X_subset)."""
    values = _require_frechet2(X)
    i0, j0, idx = _split_indices(X, i, j, subset)
    return _scaling_pair(values, i0, (j0,) + idx, a, k)[0]


def estimate_scaling_unscaled(
    X: SampleMatrix, i: int, j: int, subset: Sequence[int], a: float, k: int
) -> float:
    """Estimate the squared scaling of max(X_i, X_j, X_subset).

    Uses the rescaled vector's radii for thresholding but divides the angle
    entries of the rescaled coordinates by a, so the estimator targets the
    unscaled maximum.
    """
    values = _require_frechet2(X)
    i0, j0, idx = _split_indices(X, i, j, subset)
    return _scaling_pair(values, i0, (j0,) + idx, a, k)[1]


def estimate_scaling_init(X: SampleMatrix, indices: Sequence[int], k: int) -> float:
    """Direct estimate of the squared scaling of max(X_r : r in indices).

    Works on the unscaled subvector with prefactor equal to its dimension;
    intended for the initial step when no nodes have been identified yet.
    """
    values = _require_frechet2(X)
    idx = _indices(indices, X.d)
    if not idx:
        raise ValueError("indices must be nonempty")
    n = values.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"threshold count k={k} outside 1..{n}")
    sq = values[:, idx] ** 2
    r2 = sq.sum(axis=1)
    thr = np.partition(r2, n - k)[n - k]
    keep = r2 >= thr
    return len(idx) / k * float((sq[keep].max(axis=1) / r2[keep]).sum())

"""Weighted binary samples and their first two moments."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

# Marginal variances below this are treated as zero.
_VAR_FLOOR = 1e-14


@dataclass(frozen=True)
class WeightedSample:
    """Binary rows ``X`` (n x d) with normalized nonnegative weights ``w``."""

    X: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=np.uint8)
        w = np.asarray(self.w, dtype=float).ravel()
        if X.ndim != 2:
            raise ValueError(f"X must be a matrix, got shape {X.shape}")
        if X.shape[0] != w.shape[0] or X.shape[0] < 1:
            raise ValueError(f"Need n >= 1 rows with one weight each, got {X.shape[0]}/{w.shape[0]}")
        if np.any(X > 1):
            raise ValueError("X must be binary")
        if np.any(w < 0) or not np.isfinite(w).all():
            raise ValueError("Weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"Weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "w", w)

    @classmethod
    def uniform(cls, X: np.ndarray) -> "WeightedSample":
        X = np.asarray(X, dtype=np.uint8)
        return cls(X, np.full(X.shape[0], 1.0 / X.shape[0]))

    @classmethod
    def from_unnormalized(cls, X: np.ndarray, weights: np.ndarray) -> "WeightedSample":
        weights = np.asarray(weights, dtype=float)
        return cls(X, weights / weights.sum())

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def d(self) -> int:
        return int(self.X.shape[1])

    def permuted(self, order: np.ndarray) -> "WeightedSample":
        """Columns rearranged so that column ``i`` is component ``order[i]``."""
        return WeightedSample(self.X[:, order], self.w)


def weighted_moments(sample: WeightedSample) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weighted mean ``xbar`` and correlation matrix ``R``.

    ``r_ij = (xbar_ij - xbar_i xbar_j) / sqrt(xbar_i(1-xbar_i) xbar_j(1-xbar_j))``
    with ``xbar_ij`` the weighted frequency of ``x_i = x_j = 1``. Rows and
    columns of constant components are 0 with a unit diagonal.
    """
    X = sample.X.astype(float)
    w = sample.w
    xbar = w @ X
    cross = (X * w[:, None]).T @ X
    var = xbar * (1.0 - xbar)
    live = var > _VAR_FLOOR
    scale = np.sqrt(np.where(live, var, 1.0))
    R = (cross - np.outer(xbar, xbar)) / np.outer(scale, scale)
    R[~live, :] = 0.0
    R[:, ~live] = 0.0
    np.clip(R, -1.0, 1.0, out=R)
    np.fill_diagonal(R, 1.0)
    return xbar, R

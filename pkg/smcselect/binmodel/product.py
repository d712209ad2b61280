"""Product of independent Bernoulli components."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .sample import WeightedSample


@dataclass(frozen=True, eq=False)
class ProductModel:
    """Independent components with probabilities clamped to ``[p_min, 1 - p_min]``."""

    p: np.ndarray
    p_min: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_min <= 0.5:
            raise ValueError(f"p_min must lie in [0, 1/2], got {self.p_min}")
        p = np.clip(np.asarray(self.p, dtype=float).ravel(), self.p_min, 1.0 - self.p_min)
        if np.any((p < 0) | (p > 1)):
            raise ValueError("Probabilities must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        with np.errstate(divide="ignore"):
            object.__setattr__(self, "_log_p", np.log(p))
            object.__setattr__(self, "_log_1mp", np.log1p(-p))

    @property
    def d(self) -> int:
        return int(self.p.shape[0])

    def marginals(self) -> np.ndarray:
        return self.p.copy()

    def log_density_many(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.uint8))
        return np.sum(np.where(X == 1, self._log_p, self._log_1mp), axis=1)

    def log_density(self, gamma: np.ndarray) -> float:
        return float(self.log_density_many(np.asarray(gamma)[None, :])[0])

    def sample(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        """``size`` iid draws and their log densities."""
        X = (rng.random((size, self.d)) < self.p).astype(np.uint8)
        return X, self.log_density_many(X)


def fit_product(sample: WeightedSample, p_min: Optional[float] = None) -> ProductModel:
    """Weighted mean, clamped by ``p_min`` (default ``1/(2n)``)."""
    if p_min is None:
        p_min = 1.0 / (2.0 * sample.n)
    return ProductModel(sample.w @ sample.X.astype(float), p_min=p_min)

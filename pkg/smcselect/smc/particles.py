"""Particle systems, systematic resampling and particle diversity."""

from dataclasses import dataclass

import numpy as np

from smcselect.utils import row_keys


@dataclass
class ParticleSystem:
    """
    Binary particles with normalized weights and cached log scores.

    ``log_pi`` holds the target log scores, ``log_q`` the log density under
    the current proposal (NaN before the first fit), ``rho`` the tempering
    exponent the weights refer to.
    """

    X: np.ndarray
    w: np.ndarray
    log_pi: np.ndarray
    log_q: np.ndarray
    rho: float = 0.0

    @classmethod
    def unweighted(cls, X: np.ndarray, log_pi: np.ndarray, rho: float = 0.0) -> "ParticleSystem":
        n = X.shape[0]
        return cls(
            X=np.asarray(X, dtype=np.uint8),
            w=np.full(n, 1.0 / n),
            log_pi=np.asarray(log_pi, dtype=float),
            log_q=np.full(n, np.nan),
            rho=rho,
        )

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def d(self) -> int:
        return int(self.X.shape[1])

    def weighted_mean(self) -> np.ndarray:
        return self.w @ self.X

    def diversity(self) -> float:
        return particle_diversity(self.X)

    def resampled(self, idx: np.ndarray) -> "ParticleSystem":
        """Offspring ``idx`` with uniform weights, caches carried along."""
        n = idx.shape[0]
        return ParticleSystem(
            X=self.X[idx],
            w=np.full(n, 1.0 / n),
            log_pi=self.log_pi[idx],
            log_q=self.log_q[idx],
            rho=self.rho,
        )


def systematic_indices(w: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Offspring indices of systematic resampling, in nondecreasing order.

    One uniform ``u`` in (0, 1] is shifted by 1 for each offspring and
    matched against the cumulative sums of ``n w``; particle ``k`` gets
    ``floor(n w_k)`` or ``ceil(n w_k)`` copies, which end up adjacent.
    """
    w = np.asarray(w, dtype=float)
    n = w.shape[0]
    cum = np.cumsum(n * w)
    cum *= n / cum[-1]
    u = 1.0 - rng.random()
    idx = np.searchsorted(cum, u + np.arange(n), side="left")
    last = int(np.flatnonzero(w > 0)[-1])
    return np.minimum(idx, last)


def resample_systematic(w: np.ndarray, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Unweighted system of n offspring drawn systematically from ``(w, X)``."""
    return X[systematic_indices(w, rng)]


def particle_diversity(X: np.ndarray) -> float:
    """Fraction of distinct rows."""
    n = X.shape[0]
    return len(set(row_keys(X))) / n

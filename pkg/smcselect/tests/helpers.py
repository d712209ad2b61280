"""Small stand-in targets with known mass functions."""

from typing import Sequence

import numpy as np

from smcselect.utils import all_states


class TableTarget:
    """
    Target given by a table of log masses indexed like ``all_states``
    (bit ``k`` of the row index is component ``k``).
    """

    constraints = ()
    always_included = ()

    def __init__(self, log_table: Sequence[float]):
        self.log_table = np.asarray(log_table, dtype=float)
        self.d = int(np.log2(self.log_table.shape[0]))
        if 2**self.d != self.log_table.shape[0]:
            raise ValueError("Table length must be a power of two")
        self.names = tuple(f"x{k + 1}" for k in range(self.d))
        self._weights = 1 << np.arange(self.d)
        self.calls = 0

    @classmethod
    def random(cls, d: int, seed: int, scale: float = 2.0) -> "TableTarget":
        rng = np.random.default_rng(seed)
        return cls(scale * rng.standard_normal(2**d))

    @classmethod
    def flat(cls, d: int, value: float = 0.0) -> "TableTarget":
        return cls(np.full(2**d, value))

    # Every state is a valid starting point.
    restricted = False

    def index(self, gamma: np.ndarray) -> int:
        return int(np.asarray(gamma, dtype=np.int64) @ self._weights)

    def score(self, gamma: np.ndarray) -> float:
        self.calls += 1
        return float(self.log_table[self.index(gamma)])

    __call__ = score

    def feasible_rows(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        return ~np.isneginf(self.log_table[X @ self._weights])

    def probabilities(self) -> np.ndarray:
        p = np.exp(self.log_table - np.max(self.log_table))
        return p / p.sum()

    def marginals(self) -> np.ndarray:
        return self.probabilities() @ all_states(self.d)

    def log_evidence(self) -> float:
        top = np.max(self.log_table)
        return float(top + np.log(np.sum(np.exp(self.log_table - top))))


def total_variation(counts: np.ndarray, p: np.ndarray) -> float:
    """Distance between empirical frequencies ``counts`` and the law ``p``."""
    freq = counts / counts.sum()
    return 0.5 * float(np.abs(freq - p).sum())

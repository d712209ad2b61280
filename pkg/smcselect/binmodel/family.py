"""Operations shared by the parametric families on B^d."""

from typing import Protocol, Tuple

import numpy as np

from smcselect.posterior.exact import EnumerationLimitError
from smcselect.utils import iter_state_blocks


class BinaryModel(Protocol):
    """What the move kernel needs from a proposal family."""

    @property
    def d(self) -> int: ...

    def sample(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]: ...

    def log_density_many(self, X: np.ndarray) -> np.ndarray: ...

    def log_density(self, gamma: np.ndarray) -> float: ...


def sample_and_evaluate(model: BinaryModel, rng: np.random.Generator) -> Tuple[np.ndarray, float]:
    """One draw and its log density in a single pass."""
    X, logq = model.sample(rng, 1)
    return X[0], float(logq[0])


def log_density(model: BinaryModel, gamma: np.ndarray) -> float:
    return model.log_density(gamma)


def brute_force_table(model: BinaryModel, limit: int = 20) -> Tuple[np.ndarray, np.ndarray]:
    """Every state of B^d with its probability (small ``d`` only)."""
    if model.d > limit:
        raise EnumerationLimitError(f"d={model.d} exceeds the enumeration limit {limit}")
    states = np.concatenate(list(iter_state_blocks(model.d)))
    return states, np.exp(model.log_density_many(states))


def brute_force_marginals(model: BinaryModel, limit: int = 20) -> np.ndarray:
    """Exact ``E_q[gamma]`` by enumeration."""
    if model.d > limit:
        raise EnumerationLimitError(f"d={model.d} exceeds the enumeration limit {limit}")
    total = np.zeros(model.d)
    for X in iter_state_blocks(model.d):
        total += np.exp(model.log_density_many(X)) @ X
    return total

"""
Initial law on the feasible set of a restricted selection problem.

Free components and forced components are drawn first; an interaction is
then switched on with probability 1/2 only when both of its parents are on.
Every feasible state has positive mass, but the law is not uniform on the
feasible set; the sampler corrects for that with importance weights.
"""

import numpy as np

from .model import PosteriorModel

_LOG_HALF = -np.log(2.0)


def _children(model: PosteriorModel) -> np.ndarray:
    return np.array(sorted(k for _, _, k in model.constraints), dtype=np.intp)


def sample_prior(model: PosteriorModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` iid feasible states as an ``(n, d)`` uint8 matrix."""
    d = model.d
    X = (rng.random((n, d)) < 0.5).astype(np.uint8)
    if model.always_included:
        X[:, list(model.always_included)] = 1
    # Parents always precede their interaction column.
    for i, j, k in sorted(model.constraints, key=lambda t: t[2]):
        X[:, k] &= X[:, i] & X[:, j]
    return X


def log_prior_density(model: PosteriorModel, X: np.ndarray) -> np.ndarray:
    """Log mass of each row of ``X`` under ``sample_prior``'s law."""
    X = np.atleast_2d(np.asarray(X, dtype=np.uint8))
    children = _children(model)
    forced = np.array(model.always_included, dtype=np.intp)
    n_free = model.d - children.size - forced.size
    logq = np.full(X.shape[0], n_free * _LOG_HALF)
    for i, j, k in model.constraints:
        active = (X[:, i] & X[:, j]).astype(bool)
        logq += np.where(active, _LOG_HALF, 0.0)
    logq[~model.feasible_rows(X)] = -np.inf
    return logq

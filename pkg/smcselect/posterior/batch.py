"""Batch scoring of many model indicators."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .model import PosteriorModel


def _score_block(model: PosteriorModel, X: np.ndarray) -> np.ndarray:
    return np.fromiter((model.score(x) for x in X), dtype=float, count=X.shape[0])


def evaluate_many(model: PosteriorModel, X: np.ndarray, jobs: int = 1) -> np.ndarray:
    """
    Log scores of every row of ``X``, in row order.

    With ``jobs > 1`` rows are split into contiguous blocks scored on a
    thread pool; the factorizations release the GIL. Results do not depend
    on ``jobs``.
    """
    X = np.asarray(X, dtype=np.uint8)
    n = X.shape[0]
    if n == 0:
        return np.empty(0)
    if jobs <= 1 or n < 2 * jobs:
        return _score_block(model, X)
    blocks = np.array_split(X, min(n, 4 * jobs))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(lambda b: _score_block(model, b), blocks))
    return np.concatenate(parts)

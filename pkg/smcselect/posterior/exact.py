"""Exact posterior summaries by full enumeration of small model spaces."""

import logging
from typing import NamedTuple, Tuple

import numpy as np

from smcselect.utils import all_states, iter_state_blocks

from .batch import evaluate_many
from .model import PosteriorError, PosteriorModel

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 20


class EnumerationLimitError(ValueError):
    """Model space too large to enumerate."""


class ExactPosterior(NamedTuple):
    marginals: np.ndarray
    log_evidence: float
    n_states: int


def _check_limit(d: int, limit: int) -> None:
    if d > limit:
        raise EnumerationLimitError(f"d={d} exceeds the enumeration limit {limit}")


def enumerate_scores(model: PosteriorModel, limit: int = 12) -> Tuple[np.ndarray, np.ndarray]:
    """All feasible states and their log scores (small ``d`` only)."""
    _check_limit(model.d, limit)
    X = all_states(model.d)
    if model.restricted:
        X = X[model.feasible_rows(X)]
    return X, evaluate_many(model, X)


def enumerate_exact(
    model: PosteriorModel, limit: int = DEFAULT_LIMIT, jobs: int = 1
) -> ExactPosterior:
    """
    Exact marginal inclusion probabilities and log evidence.

    States are scored block by block with a running log-sum-exp, so memory
    stays bounded for ``d`` up to ``limit``. Infeasible states are skipped.

    Raises:
        EnumerationLimitError: ``d > limit``.
    """
    d = model.d
    _check_limit(d, limit)
    shift = -np.inf
    total = 0.0
    weighted = np.zeros(d)
    n_states = 0
    for X in iter_state_blocks(d):
        if model.restricted:
            X = X[model.feasible_rows(X)]
            if X.shape[0] == 0:
                continue
        scores = evaluate_many(model, X, jobs=jobs)
        n_states += X.shape[0]
        block_max = np.max(scores)
        if not np.isfinite(block_max):
            continue
        new_shift = max(shift, block_max)
        scale = np.exp(shift - new_shift) if np.isfinite(shift) else 0.0
        u = np.exp(scores - new_shift)
        total = total * scale + u.sum()
        weighted = weighted * scale + u @ X
        shift = new_shift
    if not np.isfinite(shift):
        raise PosteriorError("Every state has zero posterior mass")
    logger.debug("Enumerated %d states (d=%d)", n_states, d)
    return ExactPosterior(weighted / total, float(shift + np.log(total)), n_states)

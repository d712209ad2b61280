"""Posterior mass functions on model indicators."""

from .batch import evaluate_many
from .exact import (
    DEFAULT_LIMIT,
    EnumerationLimitError,
    ExactPosterior,
    enumerate_exact,
    enumerate_scores,
)
from .model import (
    Hyperparameters,
    PosteriorError,
    PosteriorModel,
    default_hyperparameters,
    log_bic,
    log_posterior,
)
from .prior import log_prior_density, sample_prior

__all__ = [
    "PosteriorModel",
    "PosteriorError",
    "Hyperparameters",
    "default_hyperparameters",
    "log_posterior",
    "log_bic",
    "evaluate_many",
    "enumerate_exact",
    "enumerate_scores",
    "ExactPosterior",
    "EnumerationLimitError",
    "DEFAULT_LIMIT",
    "sample_prior",
    "log_prior_density",
]

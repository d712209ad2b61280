"""Problem construction from an experiment configuration."""

import logging
from typing import Tuple

from smcselect.data import (
    DesignMatrix,
    RawDataset,
    correlated_dataset,
    expand_design,
    load_csv,
    toy_dataset,
)
from smcselect.model import ExperimentConfig, ProblemConfig, ProblemSource
from smcselect.posterior import PosteriorModel

logger = logging.getLogger(__name__)


def load_raw(problem: ProblemConfig) -> RawDataset:
    """Raw covariates and response of a problem, before expansion."""
    if problem.source == ProblemSource.CSV:
        raw = load_csv(problem.path, problem.response)
    elif problem.source == ProblemSource.SYNTHETIC:
        raw = correlated_dataset(
            problem.seed,
            n_latent=problem.n_latent,
            proxies=problem.proxies,
            m=problem.m,
            mu=problem.mu,
            noise=problem.noise,
            response_noise=problem.response_noise,
        )
    else:
        raw = toy_dataset(
            problem.seed, m=problem.m, mu=problem.mu,
            noise=problem.noise, response_noise=problem.response_noise,
        )
    if problem.log_response:
        raw = raw.with_log_response()
    return raw


def build_design(problem: ProblemConfig) -> DesignMatrix:
    """Expanded design of a problem; covariates are used as-is without expansion."""
    raw = load_raw(problem)
    spec = problem.expansion_spec()
    design = DesignMatrix.from_raw(raw) if spec is None else expand_design(raw, spec)
    logger.info(
        "Problem '%s': m=%d observations, d=%d predictors%s",
        problem.source.value, design.m, design.d,
        f" ({len(design.dropped)} degenerate columns dropped)" if design.dropped else "",
    )
    return design


def build_problem(cfg: ExperimentConfig) -> Tuple[DesignMatrix, PosteriorModel]:
    """Design and target posterior of an experiment."""
    design = build_design(cfg.problem)
    target = PosteriorModel.from_design(
        design,
        criterion=cfg.criterion,
        constrained=cfg.constraints,
        always_include_constant=cfg.always_include_constant,
    )
    return design, target

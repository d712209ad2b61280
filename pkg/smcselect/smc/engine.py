"""
Resample-move sampler on the geometric bridge from the uniform law to the
posterior.

The loop order is: initialize, choose the first step and reweight, then
repeat {fit proposal, resample, move, choose step, reweight} until the
exponent reaches 1.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import logsumexp

from smcselect.binmodel import (
    LogisticConditionalsModel,
    ProductModel,
    WeightedSample,
    fit_logistic_conditionals,
    fit_product,
)
from smcselect.model.base import ProposalFamily
from smcselect.model.experiment import SmcConfig
from smcselect.posterior import PosteriorModel, evaluate_many, log_prior_density, sample_prior
from smcselect.utils import as_generator

from .move import move
from .particles import ParticleSystem, systematic_indices
from .trace import RunTrace, StepRecord, log_evidence_estimate
from .weights import (
    effective_sample_size,
    find_step_length,
    importance_weights,
    log_mean_increment,
)

logger = logging.getLogger(__name__)

Proposal = Union[LogisticConditionalsModel, ProductModel]


@dataclass
class SmcResult:
    """Outcome of one run. ``log_evidence`` is NaN for runs cut short by the budget."""

    marginals: np.ndarray
    log_evidence: float
    trace: RunTrace
    system: ParticleSystem
    budget_exhausted: bool = False
    proposal: Optional[Proposal] = None

    @property
    def complete(self) -> bool:
        return self.trace.complete


def _initial_system(target: PosteriorModel, n: int, rng: np.random.Generator):
    """
    Draw the starting particles.

    Unrestricted problems start iid uniform on B^d. Restricted ones start
    from the prior draw and carry ``-log q0`` as base log weights, which
    makes the weighted system uniform on the feasible set. Returns the
    draw, its base log weights (or ``None``) and the log base mass.
    """
    d = target.d
    if not target.restricted:
        X = (rng.random((n, d)) < 0.5).astype(np.uint8)
        return X, None, d * np.log(2.0)
    X = sample_prior(target, n, rng)
    log_base = -log_prior_density(target, X)
    return X, log_base, float(logsumexp(log_base) - np.log(n))


def _fit(
    system: ParticleSystem, cfg: SmcConfig, previous: Optional[Proposal]
) -> Proposal:
    sample = WeightedSample(system.X, system.w)
    if cfg.proposal == ProposalFamily.PRODUCT:
        return fit_product(sample)
    init = previous if cfg.warm_start and isinstance(previous, LogisticConditionalsModel) else None
    return fit_logistic_conditionals(
        sample,
        init=init,
        eps=cfg.eps,
        delta=cfg.delta,
        penalty=cfg.penalty,
        b_max=cfg.b_max,
        max_iter=cfg.max_iter,
        jobs=cfg.jobs,
    )


def _independent_count(proposal: Proposal) -> int:
    if isinstance(proposal, LogisticConditionalsModel):
        return int(np.count_nonzero(proposal.independent))
    return proposal.d


def run_resample_move(
    target: PosteriorModel,
    cfg: Optional[SmcConfig] = None,
    rng: Optional[np.random.Generator] = None,
    budget: Optional[int] = None,
) -> SmcResult:
    """
    Estimate the marginal inclusion probabilities of ``target``.

    ``budget`` caps the number of target evaluations (``cfg.budget`` when
    omitted, unlimited when both are unset). The initial draw costs ``n``
    evaluations and every move sweep another ``n``; a run whose budget
    runs out before the exponent reaches 1 returns the current weighted
    estimate with ``budget_exhausted`` set and a NaN evidence.

    Raises:
        ValueError: the budget does not cover the initial draw.
        DegenerateSystemError: every particle has zero mass.
    """
    cfg = cfg or SmcConfig()
    if rng is None:
        rng = as_generator(cfg.seed)
    if budget is None:
        budget = cfg.budget
    n, d = cfg.n, target.d
    if budget is not None and budget < n:
        raise ValueError(f"Budget {budget} does not cover the {n} initial evaluations")

    started = time.perf_counter()
    X, log_base, log_base_mass = _initial_system(target, n, rng)
    log_pi = evaluate_many(target, X, jobs=cfg.jobs)
    trace = RunTrace(n=n, d=d, log_base_mass=log_base_mass, evaluations=n)

    system = ParticleSystem.unweighted(X, log_pi)
    if log_base is not None:
        # Equal weights before the first step search; the base mass keeps the correction.
        system = system.resampled(systematic_indices(importance_weights(0.0, log_pi, log_base), rng))
    log_pi = system.log_pi
    alpha = find_step_length(0.0, log_pi, cfg.eta, cfg.bisect_tol)
    system.w = importance_weights(alpha, log_pi)
    system.rho = 1.0 if alpha >= 1.0 else alpha
    trace.steps.append(
        StepRecord(
            rho=system.rho,
            alpha=alpha,
            ess=effective_sample_size(alpha, log_pi),
            log_increment=log_mean_increment(alpha, log_pi),
            diversity=system.diversity(),
            evaluations=n,
        )
    )
    _log_step(trace.steps[-1], len(trace.steps))

    proposal: Optional[Proposal] = None
    exhausted = False
    while system.rho < 1.0:
        proposal = _fit(system, cfg, proposal)
        system = system.resampled(systematic_indices(system.w, rng))
        remaining = None if budget is None else budget - trace.evaluations
        moved = move(
            system,
            target,
            proposal,
            rng,
            diversity_delta=cfg.diversity_delta,
            diversity_high=cfg.diversity_high,
            budget=remaining,
            jobs=cfg.jobs,
        )
        trace.evaluations += moved.evaluations
        if moved.budget_exhausted:
            exhausted = True
            logger.warning(
                "Budget of %d evaluations exhausted at rho=%.4f", budget, system.rho
            )
            break

        rho = system.rho
        alpha = find_step_length(rho, system.log_pi, cfg.eta, cfg.bisect_tol)
        system.w = importance_weights(alpha, system.log_pi)
        system.rho = 1.0 if alpha >= 1.0 - rho else rho + alpha
        trace.steps.append(
            StepRecord(
                rho=system.rho,
                alpha=alpha,
                ess=effective_sample_size(alpha, system.log_pi),
                log_increment=log_mean_increment(alpha, system.log_pi),
                diversity=system.diversity(),
                evaluations=moved.evaluations,
                sweeps=moved.sweeps,
                independent=_independent_count(proposal),
            )
        )
        _log_step(trace.steps[-1], len(trace.steps))

    trace.complete = system.rho >= 1.0
    trace.wall_time = time.perf_counter() - started
    log_evidence = log_evidence_estimate(trace) if trace.complete else float("nan")
    logger.info(
        "Resample-move finished: %d steps, %d evaluations, acceptance %.3f, %.1fs",
        len(trace.steps), trace.evaluations, trace.acceptance_rate, trace.wall_time,
    )
    return SmcResult(
        marginals=system.weighted_mean(),
        log_evidence=log_evidence,
        trace=trace,
        system=system,
        budget_exhausted=exhausted,
        proposal=proposal,
    )


def _log_step(step: StepRecord, t: int) -> None:
    logger.info(
        "step %d: rho=%.4f alpha=%.4g ess=%.3f acceptance=%.3f diversity=%.3f evaluations=%d",
        t, step.rho, step.alpha, step.ess, step.acceptance, step.diversity, step.evaluations,
    )

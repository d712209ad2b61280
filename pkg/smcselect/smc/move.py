"""Independent Metropolis-Hastings moves of a resampled particle system."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from smcselect.binmodel.family import BinaryModel
from smcselect.posterior import PosteriorModel, evaluate_many

from .particles import ParticleSystem, particle_diversity
from .trace import SweepRecord

logger = logging.getLogger(__name__)

DIVERSITY_DELTA = 0.02
DIVERSITY_HIGH = 0.95


def log_acceptance(
    log_pi_x: np.ndarray,
    log_q_x: np.ndarray,
    log_pi_y: np.ndarray,
    log_q_y: np.ndarray,
    exponent: float = 1.0,
) -> np.ndarray:
    """
    ``min(0, exponent (log pi(y) - log pi(x)) + log q(x) - log q(y))``.

    Proposals with ``log pi(y) = -inf`` get ``-inf``; a current state with
    zero mass accepts any proposal with positive mass.
    """
    log_pi_x = np.asarray(log_pi_x, dtype=float)
    log_pi_y = np.asarray(log_pi_y, dtype=float)
    dead_y = np.isneginf(log_pi_y)
    dead_x = np.isneginf(log_pi_x)
    with np.errstate(invalid="ignore"):
        ratio = exponent * (log_pi_y - log_pi_x) + np.asarray(log_q_x) - np.asarray(log_q_y)
    ratio = np.where(dead_x & ~dead_y, 0.0, ratio)
    ratio = np.where(dead_y, -np.inf, ratio)
    return np.minimum(ratio, 0.0)


def mh_independent_step(
    x: np.ndarray,
    log_pi_x: float,
    log_q_x: float,
    proposal: Tuple[np.ndarray, float],
    log_pi_y: float,
    rng: np.random.Generator,
    exponent: float = 1.0,
) -> Tuple[Tuple[np.ndarray, float, float], bool]:
    """One independent MH transition; returns ``((state, log pi, log q), accepted)``."""
    y, log_q_y = proposal
    log_a = log_acceptance(log_pi_x, log_q_x, log_pi_y, log_q_y, exponent)
    if np.log(rng.random()) < log_a:
        return (y, log_pi_y, log_q_y), True
    return (x, log_pi_x, log_q_x), False


def log_q_of_resampled(X: np.ndarray, proposal: BinaryModel) -> np.ndarray:
    """Proposal log densities, computed once per block of adjacent identical rows."""
    n = X.shape[0]
    if n == 0:
        return np.empty(0)
    change = np.any(X[1:] != X[:-1], axis=1)
    starts = np.flatnonzero(np.concatenate(([True], change)))
    counts = np.diff(np.append(starts, n))
    return np.repeat(proposal.log_density_many(X[starts]), counts)


@dataclass
class MoveResult:
    sweeps: List[SweepRecord] = field(default_factory=list)
    evaluations: int = 0
    budget_exhausted: bool = False

    @property
    def acceptance(self) -> float:
        proposed = sum(s.proposals for s in self.sweeps)
        if proposed == 0:
            return float("nan")
        return sum(s.acceptance * s.proposals for s in self.sweeps) / proposed


def move(
    system: ParticleSystem,
    target: PosteriorModel,
    proposal: BinaryModel,
    rng: np.random.Generator,
    diversity_delta: float = DIVERSITY_DELTA,
    diversity_high: float = DIVERSITY_HIGH,
    budget: Optional[int] = None,
    jobs: int = 1,
) -> MoveResult:
    """
    Diversify a resampled system in place.

    Every sweep proposes one independent draw per particle, scores all
    proposals and accepts each with the MH probability for ``pi^rho``.
    Sweeps stop once the particle diversity changes by less than
    ``diversity_delta`` or exceeds ``diversity_high``. A sweep is only
    started when ``budget`` (remaining target evaluations) covers it.
    """
    n = system.n
    system.log_q = log_q_of_resampled(system.X, proposal)
    zeta = particle_diversity(system.X)
    result = MoveResult()
    while True:
        if budget is not None and result.evaluations + n > budget:
            result.budget_exhausted = True
            logger.info("Evaluation budget exhausted during the move step")
            break
        Y, log_q_y = proposal.sample(rng, n)
        u = rng.random(n)
        log_pi_y = evaluate_many(target, Y, jobs=jobs)
        result.evaluations += n
        log_a = log_acceptance(system.log_pi, system.log_q, log_pi_y, log_q_y, system.rho)
        accept = np.log(u) < log_a
        system.X[accept] = Y[accept]
        system.log_pi[accept] = log_pi_y[accept]
        system.log_q[accept] = log_q_y[accept]

        new_zeta = particle_diversity(system.X)
        result.sweeps.append(SweepRecord(float(accept.mean()), new_zeta, n))
        logger.debug(
            "sweep %d: acceptance=%.3f diversity=%.3f", len(result.sweeps), accept.mean(), new_zeta
        )
        done = abs(new_zeta - zeta) < diversity_delta or new_zeta > diversity_high
        zeta = new_zeta
        if done:
            break
    return result

"""Budgeted Markov chain runs and their ergodic averages."""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from smcselect.model.base import KernelKind
from smcselect.model.experiment import McmcConfig
from smcselect.posterior import PosteriorModel, sample_prior
from smcselect.utils import as_generator

from .kernels import AdaptiveStats, ChainState, mg_step

logger = logging.getLogger(__name__)


class _Moments:
    """Running sums of a piecewise constant trajectory."""

    def __init__(self, d: int, second: bool) -> None:
        self.count = 0
        self.total = np.zeros(d)
        self.outer = np.zeros((d, d)) if second else None

    def add(self, x: np.ndarray, times: int) -> None:
        if times <= 0:
            return
        xf = x.astype(float)
        self.count += times
        self.total += times * xf
        if self.outer is not None:
            self.outer += times * np.outer(xf, xf)

    def mean(self) -> np.ndarray:
        return self.total / self.count

    def cov(self) -> np.ndarray:
        mu = self.mean()
        return self.outer / self.count - np.outer(mu, mu)


@dataclass
class ChainTrace:
    kernel: KernelKind
    steps: int = 0
    evaluations: int = 0
    moves: int = 0
    proposed: int = 0
    accepted: int = 0
    burn_in: int = 0
    refreshes: List[int] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else float("nan")


@dataclass
class ChainResult:
    marginals: np.ndarray
    trace: ChainTrace
    state: ChainState
    stats: Optional[AdaptiveStats] = None


def _initial_state(target: PosteriorModel, rng: np.random.Generator) -> ChainState:
    if target.restricted:
        x = sample_prior(target, 1, rng)[0]
    else:
        x = (rng.random(target.d) < 0.5).astype(np.uint8)
    return ChainState(x=x, log_pi=target.score(x), evals=1)


def run_chain(
    target: PosteriorModel,
    cfg: Optional[McmcConfig] = None,
    rng: Optional[np.random.Generator] = None,
    budget: Optional[int] = None,
) -> ChainResult:
    """
    Run one chain until ``budget`` target evaluations (or ``cfg.max_steps``
    steps) and average the states visited after burn-in.

    The adaptive kernel runs the modified kernel for ``pre_adapt`` steps
    after burn-in, then switches to the linear predictor estimated from all
    post-burn-in states and re-estimates it every ``adapt_every`` steps.
    """
    cfg = cfg or McmcConfig()
    if rng is None:
        rng = as_generator(cfg.seed)
    if budget is None:
        budget = cfg.budget
    if budget is None and cfg.max_steps is None:
        raise ValueError("A chain needs an evaluation budget or max_steps")

    started = time.perf_counter()
    d = target.d
    adaptive = cfg.kernel == KernelKind.AMG
    state = _initial_state(target, rng)
    moments = _Moments(d, second=adaptive)
    trace = ChainTrace(kernel=cfg.kernel, burn_in=cfg.burn_in)
    stats: Optional[AdaptiveStats] = None
    kernel = KernelKind.MMG if adaptive else cfg.kernel
    first_refresh = cfg.burn_in + cfg.pre_adapt
    held = 0

    def done() -> bool:
        if budget is not None and state.evals >= budget:
            return True
        return cfg.max_steps is not None and state.t >= cfg.max_steps

    while not done():
        t = state.t
        if adaptive and t >= first_refresh and (t - first_refresh) % cfg.adapt_every == 0:
            moments.add(state.x, held)
            held = 0
            if moments.count > 0:
                stats = AdaptiveStats.from_moments(
                    moments.mean(), moments.cov(), moments.count,
                    delta=cfg.delta, ridge=cfg.ridge, centered=cfg.centered,
                )
                kernel = KernelKind.AMG
                trace.refreshes.append(t)
                logger.info(
                    "Adaptive estimate refreshed at step %d from %d states", t, moments.count
                )

        previous = state.x
        changed = mg_step(target, state, kernel, rng, kstar=cfg.kstar, stats=stats)
        if state.t > cfg.burn_in:
            if changed:
                moments.add(previous, held)
                held = 0
            held += 1

    moments.add(state.x, held)
    trace.steps = state.t
    trace.evaluations = state.evals
    trace.moves = state.moves
    trace.proposed = state.proposed
    trace.accepted = state.accepted
    trace.wall_time = time.perf_counter() - started
    if moments.count == 0:
        logger.warning("Chain stopped during burn-in; averaging the final state only")
        marginals = state.x.astype(float)
    else:
        marginals = moments.mean()
    logger.info(
        "%s chain finished: %d steps, %d evaluations, %d moves, acceptance %.4f, %.1fs",
        cfg.kernel.value, trace.steps, trace.evaluations, trace.moves,
        trace.acceptance_rate, trace.wall_time,
    )
    return ChainResult(marginals=marginals, trace=trace, state=state, stats=stats)

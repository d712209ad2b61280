"""Seeded repetitions of every sampler of an experiment."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, NamedTuple, Optional

import numpy as np

from smcselect.mcmc import run_chain
from smcselect.model import ExperimentConfig, SamplerConfig, SamplerKind
from smcselect.posterior import PosteriorModel
from smcselect.smc import run_resample_move
from smcselect.utils import spawn_seeds

from .problem import build_problem
from .report import Indicators, RunReport

logger = logging.getLogger(__name__)


class RunTask(NamedTuple):
    """Everything one repetition needs; picklable for worker processes."""

    target: PosteriorModel
    sampler: SamplerConfig
    repetition: int
    seed: np.random.SeedSequence
    master_seed: int
    budget: int


def run_task(task: RunTask) -> RunReport:
    rng = np.random.default_rng(task.seed)
    sampler = task.sampler
    names = list(task.target.names)
    if sampler.kind == SamplerKind.SMC:
        result = run_resample_move(task.target, sampler.smc, rng, budget=task.budget)
        trace = result.trace
        accepted = sum(s.acceptance * s.proposals for step in trace.steps for s in step.sweeps)
        indicators = Indicators(
            wall_time=trace.wall_time,
            evaluations=trace.evaluations,
            acceptance_rate=trace.acceptance_rate,
            moves=round(accepted),
        )
        marginals = result.marginals
        extra = dict(
            log_evidence=result.log_evidence,
            complete=result.complete,
            steps=len(trace.steps),
        )
    else:
        result = run_chain(task.target, sampler.mcmc, rng, budget=task.budget)
        trace = result.trace
        indicators = Indicators(
            wall_time=trace.wall_time,
            evaluations=trace.evaluations,
            acceptance_rate=trace.acceptance_rate,
            chain_length=trace.steps,
            moves=trace.moves,
        )
        marginals = result.marginals
        extra = {}
    return RunReport(
        sampler=sampler.id,
        kind=sampler.kind,
        repetition=task.repetition,
        seed=task.master_seed,
        components=names,
        marginals=np.clip(marginals, 0.0, 1.0).tolist(),
        indicators=indicators,
        **extra,
    )


def plan_tasks(cfg: ExperimentConfig, target: PosteriorModel) -> List[RunTask]:
    """
    One task per (sampler, repetition) in config order.

    Seeds are spawned from the master seed by task index, so a task's
    stream never depends on scheduling.
    """
    seeds = spawn_seeds(cfg.seed, len(cfg.samplers) * cfg.repetitions)
    tasks = []
    for s, sampler in enumerate(cfg.samplers):
        for r in range(cfg.repetitions):
            tasks.append(
                RunTask(
                    target=target,
                    sampler=sampler,
                    repetition=r,
                    seed=seeds[s * cfg.repetitions + r],
                    master_seed=cfg.seed,
                    budget=cfg.sampler_budget(sampler),
                )
            )
    return tasks


def run_experiment(
    cfg: ExperimentConfig,
    jobs: Optional[int] = None,
    target: Optional[PosteriorModel] = None,
) -> List[RunReport]:
    """
    Run every sampler ``cfg.repetitions`` times.

    With ``jobs > 1`` repetitions run in worker processes. Reports come back
    in (sampler, repetition) order whatever the completion order.
    """
    jobs = jobs or cfg.jobs
    if target is None:
        _, target = build_problem(cfg)
    tasks = plan_tasks(cfg, target)
    logger.info(
        "Experiment '%s': %d samplers x %d repetitions, budget %d, %d worker(s)",
        cfg.name, len(cfg.samplers), cfg.repetitions, cfg.budget, jobs,
    )
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_task, tasks))
    else:
        reports = []
        for task in tasks:
            reports.append(run_task(task))
            logger.info(
                "Finished %s repetition %d (%d evaluations)",
                task.sampler.id, task.repetition, reports[-1].indicators.evaluations,
            )
    return reports

"""Per-step records of a resample-move run and the evidence estimate."""

from dataclasses import dataclass, field
from typing import List

import numpy as np


class IncompleteTraceError(ValueError):
    """Evidence requested from a run that stopped before rho = 1."""


@dataclass
class SweepRecord:
    """One pass of the independent Metropolis-Hastings kernel over all particles."""

    acceptance: float
    diversity: float
    proposals: int


@dataclass
class StepRecord:
    """One reweighting: the move that preceded it and the resulting weights."""

    rho: float
    alpha: float
    ess: float
    log_increment: float
    diversity: float
    evaluations: int
    sweeps: List[SweepRecord] = field(default_factory=list)
    independent: int = 0

    @property
    def acceptance(self) -> float:
        """Acceptance rate over the sweeps of this step (NaN without a move)."""
        proposed = sum(s.proposals for s in self.sweeps)
        if proposed == 0:
            return float("nan")
        return sum(s.acceptance * s.proposals for s in self.sweeps) / proposed


@dataclass
class RunTrace:
    """
    History of a run. ``log_base_mass`` is the log total mass of the
    initial base measure (``d log 2`` for the uniform start).
    """

    n: int
    d: int
    log_base_mass: float = 0.0
    steps: List[StepRecord] = field(default_factory=list)
    evaluations: int = 0
    wall_time: float = 0.0
    complete: bool = False

    @property
    def rho(self) -> float:
        return self.steps[-1].rho if self.steps else 0.0

    @property
    def alphas(self) -> np.ndarray:
        return np.array([s.alpha for s in self.steps])

    @property
    def acceptance_rate(self) -> float:
        """Accepted over proposed moves across the whole run."""
        sweeps = [s for step in self.steps for s in step.sweeps]
        proposed = sum(s.proposals for s in sweeps)
        if proposed == 0:
            return float("nan")
        return sum(s.acceptance * s.proposals for s in sweeps) / proposed

    @property
    def moves(self) -> int:
        """Number of move sweeps."""
        return sum(len(step.sweeps) for step in self.steps)


def log_evidence_estimate(trace: RunTrace) -> float:
    """
    Sum of the log mean incremental weights of every reweighting plus the
    log mass of the base measure.

    Raises:
        IncompleteTraceError: the run did not reach rho = 1.
    """
    if not trace.complete or not trace.steps:
        raise IncompleteTraceError(
            f"Run stopped at rho={trace.rho:.4g}; the evidence needs a complete run"
        )
    return float(trace.log_base_mass + sum(s.log_increment for s in trace.steps))

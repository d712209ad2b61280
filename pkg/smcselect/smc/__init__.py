"""Resample-move sequential Monte Carlo on binary model spaces."""

from .engine import SmcResult, run_resample_move
from .move import MoveResult, log_acceptance, mh_independent_step, move
from .particles import (
    ParticleSystem,
    particle_diversity,
    resample_systematic,
    systematic_indices,
)
from .trace import (
    IncompleteTraceError,
    RunTrace,
    StepRecord,
    SweepRecord,
    log_evidence_estimate,
)
from .weights import (
    BISECT_TOL,
    DegenerateSystemError,
    effective_sample_size,
    find_step_length,
    importance_weights,
    log_mean_increment,
)

__all__ = [
    "run_resample_move",
    "SmcResult",
    "ParticleSystem",
    "systematic_indices",
    "resample_systematic",
    "particle_diversity",
    "effective_sample_size",
    "importance_weights",
    "log_mean_increment",
    "find_step_length",
    "BISECT_TOL",
    "DegenerateSystemError",
    "log_acceptance",
    "mh_independent_step",
    "move",
    "MoveResult",
    "RunTrace",
    "StepRecord",
    "SweepRecord",
    "IncompleteTraceError",
    "log_evidence_estimate",
]

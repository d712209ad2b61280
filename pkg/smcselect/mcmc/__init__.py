"""Metropolised Gibbs baselines."""

from .chain import ChainResult, ChainTrace, run_chain
from .kernels import (
    AdaptiveStats,
    ChainState,
    InfeasibleSliceError,
    conditional_prob_amg,
    conditional_prob_gibbs,
    conditional_prob_mmg,
    mg_step,
    sample_block_size,
)

__all__ = [
    "ChainState",
    "AdaptiveStats",
    "InfeasibleSliceError",
    "conditional_prob_gibbs",
    "conditional_prob_mmg",
    "conditional_prob_amg",
    "sample_block_size",
    "mg_step",
    "run_chain",
    "ChainResult",
    "ChainTrace",
]

"""
Pydantic configuration models for variable-selection experiments.

The experiment file is the single source of truth for a benchmark run:
problem construction, sampler parameters, budget, seeds and output.
"""

from .base import (
    Criterion,
    FlexibleModel,
    KernelKind,
    ProblemSource,
    ProposalFamily,
    ReportFormat,
    SamplerKind,
    SelectionBaseModel,
    StrictModel,
)
from .expansion import PRESETS, ExpansionSpec
from .experiment import (
    ExperimentConfig,
    McmcConfig,
    OutputConfig,
    ProblemConfig,
    SamplerConfig,
    SmcConfig,
)
from .validators import ExperimentValidator, ValidationError

__all__ = [
    # Base
    "SelectionBaseModel",
    "StrictModel",
    "FlexibleModel",
    # Enums
    "Criterion",
    "KernelKind",
    "ProblemSource",
    "ProposalFamily",
    "ReportFormat",
    "SamplerKind",
    # Expansion
    "ExpansionSpec",
    "PRESETS",
    # Experiment
    "ExperimentConfig",
    "ProblemConfig",
    "SamplerConfig",
    "SmcConfig",
    "McmcConfig",
    "OutputConfig",
    # Validation
    "ExperimentValidator",
    "ValidationError",
]

"""
Experiment configuration models.

An experiment names one regression problem, the samplers to compare on it
and how many seeded repetitions to run under a common evaluation budget.
Defaults follow the reference protocol: 1.5e4 particles with target ESS 0.9,
block size k* = 2 for the Markov chains, 2.5e6 evaluations of the target.
"""

from typing import Any, List, Optional

from pydantic import Field, field_validator, model_validator

from .base import (
    Criterion,
    KernelKind,
    ProblemSource,
    ProposalFamily,
    ReportFormat,
    SamplerKind,
    StrictModel,
)
from .expansion import PRESETS, ExpansionSpec


def _as_count(v: Any) -> Any:
    """Accept counts written in scientific notation (``2.5e6``, ``"1e6"``)."""
    if isinstance(v, str):
        try:
            v = float(v)
        except ValueError:
            return v
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


class SmcConfig(StrictModel):
    """Resample-move sampler parameters."""

    n: int = Field(default=15000, ge=2, description="Number of particles")
    eta: float = Field(default=0.9, gt=0.0, lt=1.0, description="Target effective sample size")
    bisect_tol: float = Field(default=1e-4, gt=0.0, description="Step length bisection tolerance")
    diversity_delta: float = Field(
        default=0.02, gt=0.0, lt=1.0, description="Stop moving when diversity changes less"
    )
    diversity_high: float = Field(
        default=0.95, gt=0.0, le=1.0, description="Stop moving above this diversity"
    )
    budget: Optional[int] = Field(
        default=None, ge=1, description="Evaluation budget, experiment budget when unset"
    )
    eps: float = Field(
        default=0.02, ge=0.0, lt=0.5, description="Marginals outside (eps, 1-eps) are independent"
    )
    delta: float = Field(
        default=0.075, ge=0.0, le=1.0, description="Correlation threshold for predictors"
    )
    penalty: float = Field(default=0.1, gt=0.0, description="Quadratic penalty of the fits")
    b_max: float = Field(default=25.0, gt=0.0, description="Coefficient size forcing demotion")
    max_iter: int = Field(default=50, ge=1, description="Newton iterations per row")
    proposal: ProposalFamily = Field(default=ProposalFamily.LOGISTIC)
    warm_start: bool = Field(default=True, description="Start each fit at the previous model")
    jobs: int = Field(default=1, ge=1, description="Worker threads for fitting and scoring")
    seed: Optional[int] = Field(default=None, ge=0, description="Seed when no generator is passed")

    normalize_counts = field_validator("n", "budget", mode="before")(_as_count)


class McmcConfig(StrictModel):
    """Metropolised Gibbs chain parameters."""

    kernel: KernelKind = Field(default=KernelKind.MMG)
    kstar: float = Field(default=2.0, ge=1.0, description="Mean of the block size law")
    burn_in: int = Field(default=25000, ge=0, description="Discarded initial steps")
    pre_adapt: int = Field(
        default=250000, ge=0, description="MMG steps before the first adaptive estimate"
    )
    adapt_every: int = Field(default=200000, ge=1, description="Steps between refreshes")
    delta: float = Field(default=0.01, gt=0.0, lt=0.5, description="AMG probability clamp")
    ridge: float = Field(
        default=0.01, gt=0.0, alias="lambda", description="Covariance regularization"
    )
    centered: bool = Field(
        default=False, description="Center the AMG predictor at the estimated mean"
    )
    budget: Optional[int] = Field(default=None, ge=1)
    max_steps: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, description="Seed when no generator is passed")

    normalize_counts = field_validator(
        "burn_in", "pre_adapt", "adapt_every", "budget", "max_steps", mode="before"
    )(_as_count)


class SamplerConfig(StrictModel):
    """One sampler entry of an experiment."""

    id: str = Field(..., pattern=r"^[A-Za-z][A-Za-z0-9_-]*$")
    kind: SamplerKind
    smc: Optional[SmcConfig] = None
    mcmc: Optional[McmcConfig] = None

    @model_validator(mode="before")
    @classmethod
    def fill_section(cls, data: Any) -> Any:
        """Create the default parameter section for the declared kind."""
        if isinstance(data, dict):
            kind = str(data.get("kind", "")).lower()
            if kind in ("smc", "mcmc") and data.get(kind) is None:
                data = {**data, kind: {}}
        return data

    @model_validator(mode="after")
    def check_section(self) -> "SamplerConfig":
        other = "mcmc" if self.kind == SamplerKind.SMC else "smc"
        if getattr(self, other) is not None:
            raise ValueError(f"Sampler '{self.id}' of kind {self.kind.value} has a '{other}' section")
        return self

    @property
    def params(self) -> Any:
        return self.smc if self.kind == SamplerKind.SMC else self.mcmc


class ProblemConfig(StrictModel):
    """Regression problem definition."""

    source: ProblemSource = Field(default=ProblemSource.TOY)
    path: Optional[str] = Field(default=None, description="CSV file, relative to the config")
    response: Optional[str] = Field(default=None, description="Response column name")
    log_response: bool = Field(default=False, description="Regress the logarithm of the response")
    preset: Optional[str] = Field(default=None, description="Named expansion (boston, ...)")
    expansion: Optional[ExpansionSpec] = None
    seed: int = Field(default=0, ge=0, description="Generator seed for toy/synthetic data")
    m: int = Field(default=100, ge=2, description="Generated observations")
    mu: float = Field(default=10.0, gt=0.0, description="Latent factor offset")
    n_latent: int = Field(default=5, ge=1, description="Latent factors (synthetic)")
    proxies: int = Field(default=2, ge=1, description="Noisy proxies per factor (synthetic)")
    noise: Optional[float] = Field(
        default=0.15, gt=0.0, description="Proxy noise standard deviation (null: mu/2)"
    )
    response_noise: float = Field(default=1.0, ge=0.0, description="Response noise standard deviation")

    @field_validator("preset")
    @classmethod
    def validate_preset(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v.lower() not in PRESETS:
            raise ValueError(f"Unknown preset '{v}'. Available: {', '.join(sorted(PRESETS))}")
        return v

    @model_validator(mode="after")
    def check_source(self) -> "ProblemConfig":
        if self.source == ProblemSource.CSV and (not self.path or not self.response):
            raise ValueError("csv problems need both 'path' and 'response'")
        if self.preset is not None and self.expansion is not None:
            raise ValueError("Give either 'preset' or 'expansion', not both")
        return self

    def expansion_spec(self) -> Optional[ExpansionSpec]:
        """Explicit expansion, else the preset, else None (use columns as they are)."""
        if self.expansion is not None:
            return self.expansion
        if self.preset is not None:
            return ExpansionSpec.preset(self.preset)
        return None


class OutputConfig(StrictModel):
    directory: str = Field(default="results")
    format: ReportFormat = Field(default=ReportFormat.CSV)


class ExperimentConfig(StrictModel):
    """Top-level experiment file."""

    name: str = Field(default="experiment")
    problem: ProblemConfig = Field(default_factory=ProblemConfig)
    criterion: Criterion = Field(default=Criterion.HB)
    constraints: bool = Field(
        default=False, description="Admit interactions only with both main effects"
    )
    always_include_constant: bool = Field(default=False)
    samplers: List[SamplerConfig] = Field(..., min_length=1)
    repetitions: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, description="Master seed of all repetitions")
    budget: int = Field(default=2_500_000, ge=1, description="Evaluations of the target")
    jobs: int = Field(default=1, ge=1, description="Parallel repetitions")
    enumeration_limit: int = Field(default=20, ge=1, le=30)
    output: OutputConfig = Field(default_factory=OutputConfig)

    normalize_counts = field_validator("budget", "repetitions", mode="before")(_as_count)

    @field_validator("criterion", mode="before")
    @classmethod
    def parse_criterion(cls, v: Any) -> Any:
        return Criterion.from_string(v) if isinstance(v, str) else v

    @model_validator(mode="after")
    def check_samplers(self) -> "ExperimentConfig":
        ids = [s.id for s in self.samplers]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"Duplicate sampler ids: {', '.join(duplicates)}")
        for sampler in self.samplers:
            if sampler.smc is not None and self.sampler_budget(sampler) < sampler.smc.n:
                raise ValueError(
                    f"Sampler '{sampler.id}': budget {self.sampler_budget(sampler)} "
                    f"is smaller than n={sampler.smc.n}"
                )
        return self

    def sampler_budget(self, sampler: SamplerConfig) -> int:
        """Budget of one sampler; its own setting overrides the experiment's."""
        own = sampler.params.budget if sampler.params is not None else None
        return own if own is not None else self.budget

    def sampler(self, sampler_id: str) -> SamplerConfig:
        for s in self.samplers:
            if s.id == sampler_id:
                return s
        raise KeyError(sampler_id)

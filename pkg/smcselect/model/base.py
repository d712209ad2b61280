"""
Base models for experiment configuration.

Provides shared base models with centralized configuration for all
configuration schema classes, so ``model_config`` is declared once.

Architecture Decision:
    Two ``extra`` policies exist on purpose:
    StrictModel (extra="forbid") is for everything a user writes by hand
    (experiment files, sampler sections) where extra fields indicate typos.
    FlexibleModel (extra="ignore") is for records read back from result
    files, which may carry columns added by newer versions.
"""

from enum import Enum

from pydantic import BaseModel
from pydantic.alias_generators import to_camel


class SelectionBaseModel(BaseModel):
    """Base model with shared configuration for all configuration models.

    Provides camelCase aliasing, assignment validation, and allows field
    population by either alias or Python name.
    """

    model_config = {
        "validate_assignment": True,
        "alias_generator": to_camel,
        "populate_by_name": True,
    }


class StrictModel(SelectionBaseModel):
    """Base model that forbids unknown fields."""

    model_config = {
        **SelectionBaseModel.model_config,
        "extra": "forbid",
    }


class FlexibleModel(SelectionBaseModel):
    """Base model that silently ignores unknown fields."""

    model_config = {
        **SelectionBaseModel.model_config,
        "extra": "ignore",
    }


class Criterion(str, Enum):
    """Model score used as the target mass function."""

    HB = "hb"
    BIC = "bic"

    @classmethod
    def from_string(cls, value: str) -> "Criterion":
        """Normalize common spellings (``HB``, ``hierarchical``, ``BIC``)."""
        normalized = value.lower().strip()
        mapping = {
            "hb": cls.HB,
            "hierarchical": cls.HB,
            "bayes": cls.HB,
            "bic": cls.BIC,
            "schwarz": cls.BIC,
        }
        if normalized not in mapping:
            raise ValueError(f"Unknown criterion '{value}' (expected 'hb' or 'bic')")
        return mapping[normalized]


class ProblemSource(str, Enum):
    """Where the regression data comes from."""

    CSV = "csv"
    TOY = "toy"
    SYNTHETIC = "synthetic"


class SamplerKind(str, Enum):
    """Sampler family of an experiment entry."""

    SMC = "smc"
    MCMC = "mcmc"


class KernelKind(str, Enum):
    """Metropolised Gibbs variants.

    GIBBS draws from the full conditional, MMG always proposes a flip and
    AMG uses the adaptive linear predictor.
    """

    GIBBS = "gibbs"
    MMG = "mmg"
    AMG = "amg"


class ProposalFamily(str, Enum):
    """Parametric family used by the SMC move kernel."""

    LOGISTIC = "logistic"
    PRODUCT = "product"


class ReportFormat(str, Enum):
    """Output table format."""

    CSV = "csv"
    JSON = "json"

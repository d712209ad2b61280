"""Design-matrix expansion settings and the dataset presets."""

from typing import Dict, List

from pydantic import Field, field_validator

from .base import StrictModel


class ExpansionSpec(StrictModel):
    """How raw covariates are turned into the candidate predictors.

    Columns are produced in the order constant, mains, squares, logs,
    interactions. Interactions run over every pair of mains and log columns.
    """

    add_constant: bool = Field(default=True, description="Prepend a column of ones")
    add_squares: bool = Field(default=False, description="Add x^2 for each main effect")
    square_exclude: List[str] = Field(
        default_factory=list,
        description="Covariates without a square term (typically binary columns)",
    )
    add_logs: List[str] = Field(
        default_factory=list, description="Covariates receiving an lg_ column"
    )
    add_interactions: bool = Field(
        default=True, description="Add first order interactions between all covariates"
    )
    drop_degenerate: bool = Field(
        default=True, description="Remove all-zero and duplicated columns"
    )

    @field_validator("square_exclude", "add_logs")
    @classmethod
    def validate_unique(cls, v: List[str]) -> List[str]:
        """Reject repeated names."""
        if len(set(v)) != len(v):
            raise ValueError(f"Repeated covariate names: {v}")
        return v

    @classmethod
    def preset(cls, name: str) -> "ExpansionSpec":
        """Return a copy of one of the named dataset expansions."""
        key = name.lower().strip()
        if key not in PRESETS:
            raise ValueError(f"Unknown preset '{name}'. Available: {', '.join(sorted(PRESETS))}")
        return PRESETS[key].model_copy(deep=True)


PRESETS: Dict[str, ExpansionSpec] = {
    # 1 + 13 + 12 + 78 = 104 predictors
    "boston": ExpansionSpec(
        add_constant=True,
        add_squares=True,
        square_exclude=["chas"],
        add_interactions=True,
        drop_degenerate=True,
    ),
    "concrete": ExpansionSpec(
        add_constant=True,
        add_logs=["c", "w", "ca", "fa", "age"],
        add_interactions=True,
        drop_degenerate=True,
    ),
    # Factor dummies of one factor never co-occur, their products vanish.
    "protein": ExpansionSpec(
        add_constant=True,
        add_interactions=True,
        drop_degenerate=True,
    ),
}

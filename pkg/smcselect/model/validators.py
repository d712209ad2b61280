"""
Validation utilities for experiment configurations.

Provides checks beyond basic Pydantic validation: data files that must
exist, budgets that cannot do useful work and problems small enough for
the exact oracle.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .base import KernelKind, ProblemSource, SamplerKind
from .experiment import ExperimentConfig


@dataclass
class ValidationError:
    """Validation finding with context."""

    severity: str  # 'error', 'warning', 'info'
    message: str
    location: str  # e.g. 'problem.path', 'sampler:smc'
    suggestion: str = ""

    def __str__(self) -> str:
        s = f"{self.message} ({self.location})"
        if self.suggestion:
            s += f"\n    → {self.suggestion}"
        return s


class ExperimentValidator:
    """
    Semantic experiment validator.

    Findings land in ``errors``, ``warnings`` and ``infos``; only errors
    make ``validate_all`` fail.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.errors: List[ValidationError] = []
        self.warnings: List[ValidationError] = []
        self.infos: List[ValidationError] = []
        self._header: Optional[List[str]] = None

    def validate_all(self) -> bool:
        """
        Run all validation checks.

        Returns:
            True if no errors (warnings are allowed)
        """
        self.errors.clear()
        self.warnings.clear()
        self.infos.clear()
        self._header = None

        self.validate_data_source()
        self.validate_budgets()
        self.validate_enumeration()

        return len(self.errors) == 0

    def _add(self, severity: str, message: str, location: str, suggestion: str = "") -> None:
        target = {"error": self.errors, "warning": self.warnings}.get(severity, self.infos)
        target.append(ValidationError(severity, message, location, suggestion))

    def validate_data_source(self) -> None:
        """CSV problems: the file exists and carries the referenced columns."""
        problem = self.config.problem
        if problem.source != ProblemSource.CSV:
            return
        path = Path(problem.path)
        if not path.is_file():
            self._add(
                "error",
                f"Data file not found: {path}",
                "problem.path",
                "Relative paths are resolved against the experiment file",
            )
            return
        try:
            header = list(pd.read_csv(path, nrows=0).columns)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            self._add("error", f"Cannot read header of {path}: {e}", "problem.path")
            return
        self._header = [str(h).strip() for h in header]

        if problem.response not in self._header:
            self._add(
                "error",
                f"Response column '{problem.response}' not in {path.name}",
                "problem.response",
                f"Available columns: {', '.join(self._header)}",
            )
        spec = problem.expansion_spec()
        if spec is None:
            return
        for name in list(spec.add_logs) + list(spec.square_exclude):
            if name not in self._header:
                self._add(
                    "error",
                    f"Expansion refers to unknown covariate '{name}'",
                    "problem.expansion",
                )

    def validate_budgets(self) -> None:
        """Budgets too small to finish a run or to leave burn-in."""
        cfg = self.config
        for sampler in cfg.samplers:
            budget = cfg.sampler_budget(sampler)
            location = f"sampler:{sampler.id}"
            if sampler.kind == SamplerKind.SMC:
                n = sampler.smc.n
                if budget < 10 * n:
                    self._add(
                        "warning",
                        f"Budget {budget} allows fewer than 10 move sweeps of {n} particles",
                        location,
                        "Runs will likely stop before rho reaches 1",
                    )
                continue
            mc = sampler.mcmc
            steps = mc.max_steps if mc.max_steps is not None else budget
            if steps <= mc.burn_in:
                self._add(
                    "error",
                    f"Chain of at most {steps} steps never leaves the burn-in of {mc.burn_in}",
                    location,
                    "Raise the budget or lower burnIn",
                )
            elif mc.kernel == KernelKind.AMG and mc.max_steps is not None and (
                mc.max_steps <= mc.burn_in + mc.pre_adapt
            ):
                self._add(
                    "warning",
                    "Adaptive chain stops before its first adaptive estimate",
                    location,
                    "Lower preAdapt or raise maxSteps",
                )

    def validate_enumeration(self) -> None:
        """Report whether the exact oracle can handle the problem."""
        d = self.estimated_dimension()
        if d is None:
            return
        limit = self.config.enumeration_limit
        if d <= limit:
            self._add("info", f"At most {d} predictors, exact enumeration available", "problem")
        else:
            self._add(
                "info",
                f"About {d} predictors exceed the enumeration limit {limit}",
                "problem",
            )

    def estimated_dimension(self) -> Optional[int]:
        """
        Upper bound on the number of predictors before degenerate columns
        are dropped; ``None`` when the data could not be inspected.
        """
        problem = self.config.problem
        if problem.source == ProblemSource.TOY:
            mains = 4
        elif problem.source == ProblemSource.SYNTHETIC:
            mains = problem.n_latent * problem.proxies
        elif self._header is not None:
            mains = len(self._header) - 1
        else:
            return None
        spec = problem.expansion_spec()
        if spec is None:
            return mains
        d = mains + len(spec.add_logs)
        inputs = d
        if spec.add_squares:
            d += mains - len(spec.square_exclude)
        if spec.add_interactions:
            d += inputs * (inputs - 1) // 2
        return d + int(spec.add_constant)

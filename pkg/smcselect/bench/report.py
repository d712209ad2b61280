"""
Run reports, their summary statistics and the result files.

Per component the summary holds the median, the 10% and 90% quantiles
(the band holding 80% of the runs), the minimum and the maximum of the
estimates over repetitions. Quantiles interpolate linearly between order
statistics.
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import Field, field_validator, model_validator
from rich.console import Console
from rich.table import Table

from smcselect.model.base import FlexibleModel, ReportFormat, SamplerKind

logger = logging.getLogger(__name__)

QUANTILE_RULE = "linear"
MARGINALS_FILE = "marginals.csv"
INDICATORS_FILE = "indicators.csv"
SUMMARY_FILE = "summary.json"
REPORTS_FILE = "reports.jsonl"

MARGINAL_COLUMNS = ["component", "sampler", "median", "q10", "q90", "min", "max"]
INDICATOR_ROWS = {
    "wall_time": "time",
    "evaluations": "evaluations",
    "acceptance_rate": "acceptance rate",
    "chain_length": "chain length",
    "moves": "moves",
}


def _finite_or_none(v: Optional[float]) -> Optional[float]:
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


class Indicators(FlexibleModel):
    """Key indicators of one run, or their means over runs."""

    wall_time: Optional[float] = Field(default=None, description="Seconds")
    evaluations: Optional[float] = Field(default=None, description="Target evaluations")
    acceptance_rate: Optional[float] = None
    chain_length: Optional[float] = Field(default=None, description="Markov chain steps")
    moves: Optional[float] = Field(default=None, description="Accepted state changes")

    normalize = field_validator("*", mode="before")(_finite_or_none)


class RunReport(FlexibleModel):
    """Outcome of one repetition of one sampler."""

    sampler: str
    kind: SamplerKind
    repetition: int = Field(..., ge=0)
    seed: int = Field(..., ge=0, description="Master seed of the experiment")
    components: List[str]
    marginals: List[float]
    log_evidence: Optional[float] = None
    complete: bool = True
    steps: Optional[int] = Field(default=None, description="Tempering steps (SMC)")
    indicators: Indicators = Field(default_factory=Indicators)

    @field_validator("log_evidence", mode="before")
    @classmethod
    def finite_evidence(cls, v: Optional[float]) -> Optional[float]:
        return _finite_or_none(v)

    @model_validator(mode="after")
    def check_marginals(self) -> "RunReport":
        if len(self.marginals) != len(self.components):
            raise ValueError(
                f"{len(self.marginals)} marginals for {len(self.components)} components"
            )
        if any(not 0.0 <= p <= 1.0 for p in self.marginals):
            raise ValueError("Marginal estimates must lie in [0, 1]")
        return self

    def fingerprint(self) -> str:
        """JSON of everything except timing, equal for reproduced runs."""
        return self.model_dump_json(exclude={"indicators": {"wall_time"}})


class ComponentStats(FlexibleModel):
    component: str
    median: float
    q10: float
    q90: float
    min: float
    max: float

    @model_validator(mode="after")
    def check_order(self) -> "ComponentStats":
        eps = 1e-12
        values = [self.min, self.q10, self.median, self.q90, self.max]
        if any(b < a - eps for a, b in zip(values, values[1:])):
            raise ValueError(f"Quantiles out of order for '{self.component}': {values}")
        return self


class SamplerSummary(FlexibleModel):
    sampler: str
    kind: SamplerKind
    runs: int
    complete_runs: int
    components: List[ComponentStats]
    indicators: Indicators
    log_evidence_median: Optional[float] = None


class SummaryStats(FlexibleModel):
    quantile_rule: str = QUANTILE_RULE
    samplers: List[SamplerSummary]

    def sampler(self, sampler_id: str) -> SamplerSummary:
        for s in self.samplers:
            if s.sampler == sampler_id:
                return s
        raise KeyError(sampler_id)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


def _mean(values: Iterable[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def summarize(reports: Iterable[RunReport]) -> SummaryStats:
    """
    Per-sampler component statistics and indicator means.

    The result does not depend on the order of ``reports``.
    """
    grouped: Dict[str, List[RunReport]] = {}
    for r in sorted(reports, key=lambda r: (r.sampler, r.repetition)):
        grouped.setdefault(r.sampler, []).append(r)
    if not grouped:
        raise ValueError("No reports to summarize")

    summaries = []
    for sampler, runs in grouped.items():
        names = runs[0].components
        if any(r.components != names for r in runs):
            raise ValueError(f"Reports of sampler '{sampler}' disagree on the components")
        M = np.array([r.marginals for r in runs], dtype=float)
        q10, median, q90 = np.quantile(M, [0.1, 0.5, 0.9], axis=0, method=QUANTILE_RULE)
        lo, hi = M.min(axis=0), M.max(axis=0)
        components = [
            ComponentStats(
                component=name,
                median=float(median[k]),
                q10=float(q10[k]),
                q90=float(q90[k]),
                min=float(lo[k]),
                max=float(hi[k]),
            )
            for k, name in enumerate(names)
        ]
        indicators = Indicators(
            **{
                key: _mean(getattr(r.indicators, key) for r in runs)
                for key in Indicators.model_fields
            }
        )
        evidence = [r.log_evidence for r in runs if r.log_evidence is not None]
        summaries.append(
            SamplerSummary(
                sampler=sampler,
                kind=runs[0].kind,
                runs=len(runs),
                complete_runs=sum(r.complete for r in runs),
                components=components,
                indicators=indicators,
                log_evidence_median=float(np.median(evidence)) if evidence else None,
            )
        )
    return SummaryStats(samplers=summaries)


def spread_dominance(stats: SummaryStats, sampler: str, baseline: str) -> float:
    """
    Fraction of the shared components whose q10-q90 band under ``sampler``
    is no wider than under ``baseline``.
    """
    widths = {c.component: c.q90 - c.q10 for c in stats.sampler(baseline).components}
    wins = [
        c.q90 - c.q10 <= widths[c.component] + 1e-12
        for c in stats.sampler(sampler).components
        if c.component in widths
    ]
    if not wins:
        raise ValueError(f"Samplers '{sampler}' and '{baseline}' share no components")
    return float(np.mean(wins))


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------


def marginals_frame(stats: SummaryStats) -> pd.DataFrame:
    rows = [
        {"sampler": s.sampler, **c.model_dump()}
        for s in stats.samplers
        for c in s.components
    ]
    return pd.DataFrame(rows, columns=MARGINAL_COLUMNS)


def indicators_frame(stats: SummaryStats) -> pd.DataFrame:
    """One row per indicator, one column per sampler."""
    data = {
        s.sampler: [getattr(s.indicators, key) for key in INDICATOR_ROWS] for s in stats.samplers
    }
    frame = pd.DataFrame(data, index=pd.Index(list(INDICATOR_ROWS.values()), name="indicator"))
    return frame.astype(float)


def emit_report(
    stats: SummaryStats, fmt: Union[ReportFormat, str], directory: Union[str, Path]
) -> List[Path]:
    """
    Write the summary as ``marginals.csv`` + ``indicators.csv`` or as
    ``summary.json``; returns the written paths.

    Raises:
        OSError: the directory cannot be created or written.
    """
    fmt = ReportFormat(fmt)
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == ReportFormat.JSON:
        path = out / SUMMARY_FILE
        path.write_text(stats.model_dump_json(by_alias=True, indent=2) + "\n", encoding="utf-8")
        written = [path]
    else:
        marginals = out / MARGINALS_FILE
        indicators = out / INDICATORS_FILE
        marginals_frame(stats).to_csv(marginals, index=False)
        indicators_frame(stats).to_csv(indicators)
        written = [marginals, indicators]
    for path in written:
        logger.info("Wrote %s", path)
    return written


def load_summary(directory: Union[str, Path]) -> SummaryStats:
    """Read back ``summary.json`` from a result directory."""
    path = Path(directory) / SUMMARY_FILE
    return SummaryStats.model_validate_json(path.read_text(encoding="utf-8"))


def load_marginals(directory: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(Path(directory) / MARGINALS_FILE)


def write_reports(reports: Iterable[RunReport], directory: Union[str, Path]) -> Path:
    """Persist raw reports as JSON Lines, one run per line."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    path = out / REPORTS_FILE
    with open(path, "w", encoding="utf-8") as f:
        for r in reports:
            f.write(r.model_dump_json(by_alias=True) + "\n")
    logger.info("Wrote %s", path)
    return path


def load_reports(source: Union[str, Path]) -> List[RunReport]:
    """Read reports from a ``reports.jsonl`` file or a directory holding one."""
    path = Path(source)
    if path.is_dir():
        path = path / REPORTS_FILE
    reports = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                reports.append(RunReport.model_validate(json.loads(line)))
    return reports


# ---------------------------------------------------------------------------
# Console
# ---------------------------------------------------------------------------


def _fmt(v: Optional[float], key: str) -> str:
    if v is None:
        return "-"
    if key == "acceptance_rate":
        return f"{100 * v:.2f}%"
    if key == "wall_time":
        return f"{v:.1f}s"
    return f"{v:.3g}"


def render_summary(stats: SummaryStats, console: Optional[Console] = None, top: int = 20) -> None:
    """Print indicator and marginal tables; only the ``top`` components by median."""
    console = console or Console()
    table = Table(title="Key indicators (means over runs)")
    table.add_column("indicator")
    for s in stats.samplers:
        table.add_column(s.sampler, justify="right")
    for key, label in INDICATOR_ROWS.items():
        table.add_row(label, *(_fmt(getattr(s.indicators, key), key) for s in stats.samplers))
    console.print(table)

    smc = [s.sampler for s in stats.samplers if s.kind == SamplerKind.SMC]
    mcmc = [s.sampler for s in stats.samplers if s.kind == SamplerKind.MCMC]
    for a in smc:
        for b in mcmc:
            share = spread_dominance(stats, a, b)
            console.print(f"{a} band no wider than {b} on {100 * share:.0f}% of components")

    for s in stats.samplers:
        ranked = sorted(s.components, key=lambda c: c.median, reverse=True)[:top]
        t = Table(title=f"{s.sampler}: inclusion probabilities ({s.runs} runs)")
        for col in MARGINAL_COLUMNS[:1] + MARGINAL_COLUMNS[2:]:
            t.add_column(col, justify="left" if col == "component" else "right")
        for c in ranked:
            t.add_row(c.component, *(f"{getattr(c, k):.3f}" for k in MARGINAL_COLUMNS[2:]))
        console.print(t)

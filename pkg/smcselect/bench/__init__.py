"""Experiment harness: problems, repeated runs, summaries and result files."""

from .problem import build_design, build_problem, load_raw
from .report import (
    QUANTILE_RULE,
    ComponentStats,
    Indicators,
    RunReport,
    SamplerSummary,
    SummaryStats,
    emit_report,
    indicators_frame,
    load_marginals,
    load_reports,
    load_summary,
    marginals_frame,
    render_summary,
    spread_dominance,
    summarize,
    write_reports,
)
from .runner import RunTask, plan_tasks, run_experiment, run_task

__all__ = [
    "build_problem",
    "build_design",
    "load_raw",
    "run_experiment",
    "run_task",
    "plan_tasks",
    "RunTask",
    "RunReport",
    "Indicators",
    "ComponentStats",
    "SamplerSummary",
    "SummaryStats",
    "QUANTILE_RULE",
    "summarize",
    "emit_report",
    "write_reports",
    "load_reports",
    "load_summary",
    "load_marginals",
    "marginals_frame",
    "indicators_frame",
    "render_summary",
    "spread_dominance",
]

"""
Tests for run reports, summary statistics and result files.
"""

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError
from rich.console import Console

from smcselect.bench import (
    RunReport,
    emit_report,
    load_marginals,
    load_reports,
    load_summary,
    render_summary,
    spread_dominance,
    summarize,
    write_reports,
)
from smcselect.bench.report import Indicators, indicators_frame


def report(sampler="smc", repetition=0, marginals=(0.5, 0.5), **kwargs):
    data = dict(
        sampler=sampler,
        kind="smc",
        repetition=repetition,
        seed=0,
        components=[f"x{k + 1}" for k in range(len(marginals))],
        marginals=list(marginals),
    )
    data.update(kwargs)
    return RunReport(**data)


@pytest.fixture
def ten_runs():
    values = np.linspace(0.1, 1.0, 10)
    return [
        report(repetition=r, marginals=(v, 1 - v), indicators={"evaluations": 100 * (r + 1)})
        for r, v in enumerate(values)
    ]


class TestRunReport:
    def test_marginals_in_unit_interval(self):
        with pytest.raises(ValidationError, match=r"\[0, 1\]"):
            report(marginals=(0.5, 1.2))

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="marginals for"):
            report(components=["a"], marginals=(0.1, 0.2))

    def test_non_finite_values_become_none(self):
        r = report(log_evidence=float("nan"), indicators={"acceptance_rate": float("nan")})
        assert r.log_evidence is None
        assert r.indicators.acceptance_rate is None

    def test_fingerprint_ignores_timing(self):
        a = report(indicators={"wall_time": 1.0, "evaluations": 10})
        b = report(indicators={"wall_time": 2.0, "evaluations": 10})
        c = report(indicators={"wall_time": 1.0, "evaluations": 11})
        assert a.fingerprint() == b.fingerprint()
        assert a.fingerprint() != c.fingerprint()

    def test_extra_fields_ignored(self):
        r = RunReport.model_validate({**report().model_dump(), "future": 1})
        assert not hasattr(r, "future")


class TestSummarize:
    def test_linear_quantiles(self, ten_runs):
        stats = summarize(ten_runs)
        first = stats.sampler("smc").components[0]
        assert first.median == pytest.approx(0.55)
        assert first.q10 == pytest.approx(0.19)
        assert first.q90 == pytest.approx(0.91)
        assert (first.min, first.max) == pytest.approx((0.1, 1.0))

    def test_order_independent(self, ten_runs):
        a = summarize(ten_runs)
        b = summarize(list(reversed(ten_runs)))
        assert a.model_dump() == b.model_dump()

    def test_indicator_means(self, ten_runs):
        stats = summarize(ten_runs)
        summary = stats.sampler("smc")
        assert summary.indicators.evaluations == pytest.approx(550.0)
        assert summary.indicators.chain_length is None
        assert summary.runs == 10

    def test_samplers_are_kept_apart(self):
        stats = summarize([report("a", marginals=(0.2, 0.4)), report("b", marginals=(0.6, 0.8))])
        assert [s.sampler for s in stats.samplers] == ["a", "b"]
        assert stats.sampler("b").components[1].median == pytest.approx(0.8)

    def test_incomplete_runs_counted(self):
        stats = summarize([report(complete=False), report(repetition=1, log_evidence=-3.0)])
        summary = stats.sampler("smc")
        assert summary.complete_runs == 1
        assert summary.log_evidence_median == -3.0

    def test_component_mismatch(self):
        with pytest.raises(ValueError, match="disagree"):
            summarize([report(), report(repetition=1, components=["a", "b"])])

    def test_empty(self):
        with pytest.raises(ValueError, match="No reports"):
            summarize([])


class TestFiles:
    def test_csv_layout(self, ten_runs, tmp_path):
        written = emit_report(summarize(ten_runs), "csv", tmp_path)
        assert [p.name for p in written] == ["marginals.csv", "indicators.csv"]
        header = (tmp_path / "marginals.csv").read_text().splitlines()[0]
        assert header == "component,sampler,median,q10,q90,min,max"
        frame = load_marginals(tmp_path)
        assert frame.loc[0, "median"] == pytest.approx(0.55)

    def test_indicator_table_rows(self, ten_runs, tmp_path):
        emit_report(summarize(ten_runs), "csv", tmp_path)
        frame = pd.read_csv(tmp_path / "indicators.csv", index_col="indicator")
        assert list(frame.index) == ["time", "evaluations", "acceptance rate", "chain length", "moves"]
        assert frame.loc["evaluations", "smc"] == pytest.approx(550.0)

    def test_json_round_trip(self, ten_runs, tmp_path):
        stats = summarize(ten_runs)
        emit_report(stats, "json", tmp_path)
        assert load_summary(tmp_path) == stats
        assert '"quantileRule": "linear"' in (tmp_path / "summary.json").read_text()

    def test_reports_round_trip(self, ten_runs, tmp_path):
        path = write_reports(ten_runs, tmp_path)
        assert load_reports(path) == ten_runs
        assert load_reports(tmp_path) == ten_runs

    def test_indicators_frame_missing_values(self):
        stats = summarize([report(indicators=Indicators(evaluations=5))])
        frame = indicators_frame(stats)
        assert np.isnan(frame.loc["chain length", "smc"])


class TestRender:
    def test_tables_printed(self, ten_runs):
        console = Console(record=True, width=120)
        render_summary(summarize(ten_runs), console=console, top=1)
        text = console.export_text()
        assert "Key indicators" in text
        assert "acceptance rate" in text
        assert "x1" in text
        assert "x2" not in text


def banded(sampler, first, second, kind="smc"):
    """Eleven runs spread evenly over the given (low, high) ranges."""
    a = np.linspace(*first, 11)
    b = np.linspace(*second, 11)
    return [report(sampler, r, (a[r], b[r]), kind=kind) for r in range(11)]


class TestSpreadDominance:
    @pytest.fixture
    def stats(self):
        # bands: smc x1 0.0, x2 0.32; mmg 0.16 on both
        runs = banded("smc", (0.5, 0.5), (0.3, 0.7)) + banded(
            "mmg", (0.4, 0.6), (0.4, 0.6), kind="mcmc"
        )
        return summarize(runs)

    def test_fraction_of_narrower_bands(self, stats):
        assert spread_dominance(stats, "smc", "mmg") == pytest.approx(0.5)
        assert spread_dominance(stats, "mmg", "smc") == pytest.approx(0.5)

    def test_equal_bands_count_as_dominated(self, stats):
        assert spread_dominance(stats, "mmg", "mmg") == 1.0

    def test_unknown_sampler(self, stats):
        with pytest.raises(KeyError):
            spread_dominance(stats, "smc", "amg")

    def test_disjoint_components(self):
        stats = summarize([report("a"), report("b", components=["u", "v"])])
        with pytest.raises(ValueError, match="share no components"):
            spread_dominance(stats, "a", "b")

    def test_printed_for_smc_against_mcmc(self, stats):
        console = Console(record=True, width=120)
        render_summary(stats, console=console)
        assert "smc band no wider than mmg on 50% of components" in console.export_text()

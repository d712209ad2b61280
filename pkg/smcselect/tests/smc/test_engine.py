"""
Tests for the resample-move sampler.
"""

import logging

import numpy as np
import pytest

from smcselect.model import ProposalFamily, SmcConfig
from smcselect.posterior import enumerate_exact
from smcselect.smc import IncompleteTraceError, log_evidence_estimate, run_resample_move
from smcselect.tests.helpers import TableTarget


class TestFlatTarget:
    def test_single_exact_step(self):
        target = TableTarget.flat(5, value=1.5)
        result = run_resample_move(target, SmcConfig(n=1000, seed=0))
        assert len(result.trace.steps) == 1
        assert result.trace.steps[0].alpha == 1.0
        assert result.complete
        assert result.log_evidence == pytest.approx(1.5 + 5 * np.log(2.0), abs=1e-12)
        np.testing.assert_allclose(result.marginals, 0.5, atol=0.06)
        assert result.trace.evaluations == 1000


class TestTableTargets:
    def test_marginals_and_evidence(self):
        target = TableTarget.random(6, seed=11)
        result = run_resample_move(target, SmcConfig(n=3000, seed=1))
        assert result.complete
        assert result.trace.rho == 1.0
        np.testing.assert_allclose(result.marginals, target.marginals(), atol=0.03)
        assert result.log_evidence == pytest.approx(target.log_evidence(), abs=0.1)

    def test_evaluations_are_counted(self):
        target = TableTarget.random(5, seed=12)
        result = run_resample_move(target, SmcConfig(n=500, seed=2))
        assert result.trace.evaluations == target.calls
        assert result.trace.evaluations == sum(s.evaluations for s in result.trace.steps)

    def test_exponents_increase_to_one(self):
        result = run_resample_move(TableTarget.random(6, seed=13, scale=3.0), SmcConfig(n=500, seed=3))
        rhos = [s.rho for s in result.trace.steps]
        assert np.all(np.diff(rhos) > 0)
        assert rhos[-1] == 1.0
        assert result.trace.alphas.sum() == pytest.approx(1.0)

    def test_product_proposal(self):
        target = TableTarget.random(5, seed=14)
        cfg = SmcConfig(n=2000, seed=4, proposal=ProposalFamily.PRODUCT)
        result = run_resample_move(target, cfg)
        np.testing.assert_allclose(result.marginals, target.marginals(), atol=0.04)
        assert result.proposal is not None

    def test_seed_reproducibility(self):
        target = TableTarget.random(6, seed=15)
        a = run_resample_move(target, SmcConfig(n=400, seed=7))
        b = run_resample_move(target, SmcConfig(n=400, seed=7))
        np.testing.assert_array_equal(a.marginals, b.marginals)
        assert a.log_evidence == b.log_evidence

    def test_threads_do_not_change_result(self):
        target = TableTarget.random(6, seed=16)
        a = run_resample_move(target, SmcConfig(n=400, seed=8, jobs=1))
        b = run_resample_move(target, SmcConfig(n=400, seed=8, jobs=3))
        np.testing.assert_array_equal(a.marginals, b.marginals)

    def test_explicit_generator(self):
        target = TableTarget.random(4, seed=17)
        a = run_resample_move(target, SmcConfig(n=300), rng=np.random.default_rng(5))
        b = run_resample_move(target, SmcConfig(n=300), rng=np.random.default_rng(5))
        np.testing.assert_array_equal(a.marginals, b.marginals)


class TestBudget:
    def test_exhausted_run(self, toy_target, caplog):
        with caplog.at_level(logging.WARNING, logger="smcselect.smc.engine"):
            result = run_resample_move(toy_target, SmcConfig(n=200, seed=0), budget=300)
        assert result.budget_exhausted
        assert not result.complete
        assert np.isnan(result.log_evidence)
        assert result.trace.evaluations <= 300
        assert np.all((result.marginals >= 0) & (result.marginals <= 1))
        assert "exhausted" in caplog.text
        with pytest.raises(IncompleteTraceError):
            log_evidence_estimate(result.trace)

    def test_budget_below_initial_draw(self, toy_target):
        with pytest.raises(ValueError, match="initial"):
            run_resample_move(toy_target, SmcConfig(n=200, seed=0), budget=100)

    def test_config_budget_is_used(self, toy_target):
        result = run_resample_move(toy_target, SmcConfig(n=200, seed=0, budget=300))
        assert result.budget_exhausted


class TestRegressionTargets:
    def test_toy_matches_enumeration(self, toy_target):
        exact = enumerate_exact(toy_target)
        result = run_resample_move(toy_target, SmcConfig(n=2000, seed=21))
        assert result.complete
        np.testing.assert_allclose(result.marginals, exact.marginals, atol=0.02)
        assert result.log_evidence == pytest.approx(exact.log_evidence, abs=0.2)

    @pytest.mark.slow
    def test_correlated_matches_enumeration(self, synthetic_target):
        exact = enumerate_exact(synthetic_target)
        result = run_resample_move(synthetic_target, SmcConfig(n=3000, seed=22))
        np.testing.assert_allclose(result.marginals, exact.marginals, atol=0.03)
        assert result.trace.acceptance_rate > 0.0

    @pytest.mark.slow
    def test_constrained_matches_enumeration(self, constrained_target):
        exact = enumerate_exact(constrained_target)
        result = run_resample_move(constrained_target, SmcConfig(n=3000, seed=23))
        assert constrained_target.feasible_rows(result.system.X).all()
        np.testing.assert_allclose(result.marginals, exact.marginals, atol=0.03)
        assert result.log_evidence == pytest.approx(exact.log_evidence, abs=0.3)


class TestEvidenceScaling:
    def test_doubling_the_target_adds_log_two(self):
        table = TableTarget.random(6, seed=18).log_table
        a = run_resample_move(TableTarget(table), SmcConfig(n=500, seed=9))
        b = run_resample_move(TableTarget(table + np.log(2.0)), SmcConfig(n=500, seed=9))
        np.testing.assert_allclose(a.marginals, b.marginals, atol=1e-12)
        assert b.log_evidence - a.log_evidence == pytest.approx(np.log(2.0), abs=1e-8)


class TestRestrictedStart:
    def test_every_step_keeps_target_ess(self, constrained_target):
        cfg = SmcConfig(n=1000, seed=24)
        result = run_resample_move(constrained_target, cfg)
        assert result.complete
        assert min(s.ess for s in result.trace.steps) >= cfg.eta - 1e-3

    def test_initial_particles_stay_feasible(self, constrained_target):
        result = run_resample_move(constrained_target, SmcConfig(n=500, seed=26))
        assert constrained_target.feasible_rows(result.system.X).all()
        assert result.trace.evaluations == sum(s.evaluations for s in result.trace.steps)


def moves_from(trace, rho):
    """Steps whose move ran at an exponent of at least ``rho``."""
    return [step for prev, step in zip(trace.steps, trace.steps[1:]) if prev.rho >= rho]


@pytest.mark.slow
class TestProposalFamilies:
    """Logistic against product move kernels on eight coupled proxy pairs."""

    @pytest.fixture(scope="class")
    def runs(self, collinear_target):
        return {
            family: run_resample_move(collinear_target, SmcConfig(n=3000, seed=31, proposal=family))
            for family in ProposalFamily
        }

    def test_logistic_acceptance_stays_high(self, runs):
        sweeps = [s for step in runs[ProposalFamily.LOGISTIC].trace.steps for s in step.sweeps]
        assert sweeps
        assert min(s.acceptance for s in sweeps) > 0.2

    def test_product_acceptance_collapses_late(self, runs):
        late = moves_from(runs[ProposalFamily.PRODUCT].trace, 2.0 / 3.0)
        assert late
        assert min(step.acceptance for step in late) < 0.1

    def test_logistic_keeps_more_diversity(self, runs):
        logistic = moves_from(runs[ProposalFamily.LOGISTIC].trace, 0.8)[0]
        product = moves_from(runs[ProposalFamily.PRODUCT].trace, 0.8)[0]
        assert logistic.diversity > product.diversity

    def test_both_complete(self, runs):
        assert all(r.complete for r in runs.values())


@pytest.mark.slow
class TestAcrossSeeds:
    def test_toy_marginals_for_every_seed(self, toy_target):
        exact = enumerate_exact(toy_target)
        for seed in range(20):
            result = run_resample_move(toy_target, SmcConfig(n=20000, eta=0.9, seed=seed))
            np.testing.assert_allclose(result.marginals, exact.marginals, atol=0.02, err_msg=f"seed {seed}")

    def test_correlated_marginals_and_evidence(self, synthetic_target):
        exact = enumerate_exact(synthetic_target)
        close, errors = 0, []
        for seed in range(20):
            result = run_resample_move(synthetic_target, SmcConfig(n=5000, seed=100 + seed))
            close += bool(np.all(np.abs(result.marginals - exact.marginals) <= 0.03))
            errors.append(abs(result.log_evidence - exact.log_evidence) / abs(exact.log_evidence))
        assert close >= 18
        assert np.median(errors) < 0.05

"""
Tests for importance weights, effective sample size and the step search.
"""

import numpy as np
import pytest

from smcselect.smc import (
    DegenerateSystemError,
    effective_sample_size,
    find_step_length,
    importance_weights,
    log_mean_increment,
)


class TestEffectiveSampleSize:
    def test_known_value(self):
        log_pi = np.log([1.0, 2.0, 4.0])
        assert effective_sample_size(1.0, log_pi) == pytest.approx(49 / 63)

    def test_zero_step_is_one(self, rng):
        assert effective_sample_size(0.0, rng.normal(size=20)) == pytest.approx(1.0)

    def test_bounds(self, rng):
        log_pi = 30 * rng.normal(size=100)
        ess = effective_sample_size(1.0, log_pi)
        assert 1 / 100 <= ess <= 1.0

    def test_dead_particles_get_no_weight(self):
        log_pi = np.array([0.0, -np.inf, 0.0, -np.inf])
        assert effective_sample_size(1.0, log_pi) == pytest.approx(0.5)

    def test_all_dead(self):
        with pytest.raises(DegenerateSystemError):
            effective_sample_size(1.0, np.full(3, -np.inf))

    def test_base_weights(self):
        log_pi = np.zeros(2)
        log_base = np.log([1.0, 3.0])
        assert effective_sample_size(1.0, log_pi, log_base) == pytest.approx(16 / 20)


class TestImportanceWeights:
    def test_known_value(self):
        np.testing.assert_allclose(importance_weights(1.0, np.log([1.0, 3.0])), [0.25, 0.75])

    def test_large_scores_do_not_overflow(self):
        w = importance_weights(1.0, np.array([1000.0, 1000.0 + np.log(3.0)]))
        np.testing.assert_allclose(w, [0.25, 0.75])

    def test_sum_to_one(self, rng):
        w = importance_weights(0.3, 10 * rng.normal(size=50))
        assert w.sum() == pytest.approx(1.0, abs=1e-12)

    def test_dead_particle_weight_is_zero(self):
        w = importance_weights(0.5, np.array([0.0, -np.inf]))
        np.testing.assert_array_equal(w, [1.0, 0.0])


class TestLogMeanIncrement:
    def test_flat(self):
        assert log_mean_increment(1.0, np.full(5, 2.0)) == pytest.approx(2.0)

    def test_known_value(self):
        assert log_mean_increment(1.0, np.log([1.0, 3.0])) == pytest.approx(np.log(2.0))

    def test_with_base_weights(self):
        log_base = np.log([1.0, 3.0])
        value = log_mean_increment(1.0, np.log([2.0, 6.0]), log_base)
        assert value == pytest.approx(np.log(0.25 * 2 + 0.75 * 6))


class TestFindStepLength:
    def test_flat_target_takes_final_step(self):
        assert find_step_length(0.3, np.zeros(10), 0.9) == 0.7

    def test_from_zero(self):
        assert find_step_length(0.0, np.zeros(10), 0.9) == 1.0

    def test_hits_target_ess(self, rng):
        log_pi = 10 * rng.normal(size=500)
        alpha = find_step_length(0.0, log_pi, 0.9)
        assert 0.0 < alpha < 1.0
        assert effective_sample_size(alpha, log_pi) == pytest.approx(0.9, abs=0.01)

    def test_capped_by_remaining_exponent(self, rng):
        log_pi = 0.5 * rng.normal(size=200)
        assert find_step_length(0.95, log_pi, 0.5) == pytest.approx(0.05)

    @pytest.mark.parametrize("rho", [-0.1, 1.0, 1.5])
    def test_invalid_rho(self, rho):
        with pytest.raises(ValueError, match="rho"):
            find_step_length(rho, np.zeros(3), 0.9)

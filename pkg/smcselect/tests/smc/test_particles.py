"""
Tests for particle systems, resampling and diversity.
"""

import numpy as np
import pytest

from smcselect.smc import (
    ParticleSystem,
    particle_diversity,
    resample_systematic,
    systematic_indices,
)


class TestSystematicResampling:
    def test_zero_weights_get_no_offspring(self, rng):
        for _ in range(20):
            idx = systematic_indices(np.array([0.5, 0.5, 0.0, 0.0]), rng)
            np.testing.assert_array_equal(np.bincount(idx, minlength=4), [2, 2, 0, 0])

    def test_offspring_counts_are_floor_or_ceil(self, rng):
        w = rng.dirichlet(np.ones(30))
        counts = np.bincount(systematic_indices(w, rng), minlength=30)
        assert counts.sum() == 30
        assert np.all(counts >= np.floor(30 * w) - 1e-12)
        assert np.all(counts <= np.ceil(30 * w) + 1e-12)

    def test_indices_are_sorted(self, rng):
        idx = systematic_indices(rng.dirichlet(np.ones(10)), rng)
        assert np.all(np.diff(idx) >= 0)

    def test_single_survivor(self, rng):
        idx = systematic_indices(np.array([0.0, 0.0, 1.0]), rng)
        np.testing.assert_array_equal(idx, [2, 2, 2])

    def test_rows_follow_indices(self, rng):
        X = np.eye(3, dtype=np.uint8)
        Y = resample_systematic(np.array([0.0, 1.0, 0.0]), X, rng)
        np.testing.assert_array_equal(Y, np.tile([0, 1, 0], (3, 1)))

    def test_unbiased_on_average(self, rng):
        w = np.array([0.1, 0.25, 0.65])
        counts = sum(np.bincount(systematic_indices(w, rng), minlength=3) for _ in range(2000))
        np.testing.assert_allclose(counts / (3 * 2000), w, atol=0.01)


class TestDiversity:
    def test_known_value(self):
        X = np.array([[1, 0], [1, 0], [0, 1], [1, 1]])
        assert particle_diversity(X) == 0.75

    def test_all_equal(self):
        assert particle_diversity(np.ones((4, 3), dtype=np.uint8)) == 0.25


class TestParticleSystem:
    def test_unweighted(self):
        system = ParticleSystem.unweighted(np.eye(2), np.zeros(2))
        np.testing.assert_allclose(system.w, [0.5, 0.5])
        assert np.isnan(system.log_q).all()
        assert (system.n, system.d) == (2, 2)

    def test_resampled_carries_caches(self):
        system = ParticleSystem(
            X=np.eye(3, dtype=np.uint8), w=np.array([0.2, 0.3, 0.5]),
            log_pi=np.array([1.0, 2.0, 3.0]), log_q=np.array([-1.0, -2.0, -3.0]), rho=0.4,
        )
        child = system.resampled(np.array([2, 2, 0]))
        np.testing.assert_array_equal(child.log_pi, [3.0, 3.0, 1.0])
        np.testing.assert_array_equal(child.log_q, [-3.0, -3.0, -1.0])
        assert child.rho == 0.4
        assert child.weighted_mean() == pytest.approx([1 / 3, 0.0, 2 / 3])

"""
Tests for the posterior scores, batch scoring and the initial law.
"""

import numpy as np
import pytest
from scipy.special import logsumexp
from scipy.stats import spearmanr

from smcselect.data import Column, ColumnKind, DesignMatrix, generate_toy
from smcselect.model import Criterion
from smcselect.posterior import (
    Hyperparameters,
    PosteriorError,
    PosteriorModel,
    default_hyperparameters,
    evaluate_many,
    log_prior_density,
    sample_prior,
)
from smcselect.utils import all_states


def dense_hb(design, hyper, gamma):
    """Hierarchical Bayes score computed with dense determinants and inverses."""
    w, lam, v2 = hyper
    m = design.m
    idx = np.flatnonzero(gamma)
    Zg = design.Z[:, idx]
    y = design.y
    A = Zg.T @ Zg + np.eye(idx.size) / v2
    b = Zg.T @ y
    s2 = (y @ y - b @ np.linalg.solve(A, b)) / m if idx.size else (y @ y) / m
    logdet = np.linalg.slogdet(A)[1] if idx.size else 0.0
    return -0.5 * logdet - 0.5 * idx.size * np.log(v2) - 0.5 * (w + m) * np.log(w * lam / m + s2)


def dense_bic(design, gamma):
    m = design.m
    idx = np.flatnonzero(gamma)
    y = design.y
    if idx.size:
        beta, *_ = np.linalg.lstsq(design.Z[:, idx], y, rcond=None)
        resid = y - design.Z[:, idx] @ beta
    else:
        resid = y
    return -0.5 * idx.size * np.log(m) - 0.5 * m * np.log(resid @ resid / m)


def duplicated_design(m=40, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=m)
    Z = np.column_stack([x, x, rng.normal(size=m)])
    cols = [Column(n, ColumnKind.MAIN) for n in ("a", "a2", "b")]
    return DesignMatrix(rng.normal(size=m), Z, cols)


class TestHyperparameters:
    def test_defaults(self, toy_design):
        hyper = default_hyperparameters(toy_design)
        beta, *_ = np.linalg.lstsq(toy_design.Z, toy_design.y, rcond=None)
        rss = np.sum((toy_design.y - toy_design.Z @ beta) ** 2)
        assert hyper.w == 4.0
        assert hyper.lam == pytest.approx(rss / toy_design.m, rel=1e-6)
        assert hyper.v2 == pytest.approx(10.0 / hyper.lam)

    def test_response_in_span(self):
        rng = np.random.default_rng(0)
        Z = rng.normal(size=(20, 3))
        design = DesignMatrix(Z @ [1.0, 2.0, 3.0], Z, [Column(f"x{k}", ColumnKind.MAIN) for k in range(3)])
        with pytest.raises(PosteriorError, match="span"):
            default_hyperparameters(design)

    def test_regularization_barely_moves_lambda(self, toy_design):
        plain = default_hyperparameters(toy_design, regularize=False)
        assert default_hyperparameters(toy_design).lam == pytest.approx(plain.lam, rel=1e-6)


class TestScores:
    @pytest.mark.parametrize("code", range(16))
    def test_hb_matches_dense_formula(self, toy_design, toy_target, code):
        gamma = all_states(4)[code]
        expected = dense_hb(toy_design, toy_target.hyper, gamma)
        assert toy_target.score(gamma) == pytest.approx(expected, rel=1e-9, abs=1e-9)

    @pytest.mark.parametrize("code", range(16))
    def test_bic_matches_least_squares(self, toy_design, code):
        model = PosteriorModel.from_design(toy_design, criterion=Criterion.BIC)
        gamma = all_states(4)[code]
        assert model.score(gamma) == pytest.approx(dense_bic(toy_design, gamma), rel=1e-9)

    def test_bic_singular_submodel(self):
        model = PosteriorModel.from_design(duplicated_design(), criterion=Criterion.BIC)
        assert model.score(np.array([1, 1, 0])) == -np.inf
        assert np.isfinite(model.score(np.array([1, 0, 1])))

    def test_hb_handles_collinear_submodel(self):
        model = PosteriorModel.from_design(duplicated_design())
        assert np.isfinite(model.score(np.array([1, 1, 1])))

    def test_call_is_score(self, toy_target):
        gamma = np.array([1, 0, 1, 0])
        assert toy_target(gamma) == toy_target.score(gamma)

    def test_arrays_are_read_only(self, toy_target):
        with pytest.raises(ValueError):
            toy_target.gram[0, 0] = 1.0

    def test_invalid_constraint_triple(self, toy_target):
        with pytest.raises(ValueError, match="Invalid constraint"):
            PosteriorModel(
                gram=toy_target.gram, b_full=toy_target.b_full, yy=toy_target.yy,
                m=toy_target.m, hyper=toy_target.hyper, constraints=((0, 0, 1),),
            )

    def test_non_positive_hyperparameters(self, toy_target):
        with pytest.raises(ValueError, match="strictly positive"):
            PosteriorModel(
                gram=toy_target.gram, b_full=toy_target.b_full, yy=toy_target.yy,
                m=toy_target.m, hyper=Hyperparameters(4.0, 0.0, 1.0),
            )


class TestFeasibility:
    def test_interaction_needs_both_parents(self, constrained_design, constrained_target):
        (i, j), k = constrained_design.interactions[4], 4
        gamma = np.zeros(10, dtype=np.uint8)
        gamma[[i, k]] = 1
        assert not constrained_target.feasible(gamma)
        assert constrained_target.score(gamma) == -np.inf
        gamma[j] = 1
        assert constrained_target.feasible(gamma)
        assert np.isfinite(constrained_target.score(gamma))

    def test_unconstrained_model_is_not_restricted(self, constrained_design):
        model = PosteriorModel.from_design(constrained_design)
        assert not model.restricted
        assert model.feasible_rows(np.ones((3, 10), dtype=np.uint8)).all()

    def test_always_include_constant(self):
        design = generate_toy(seed=0, add_constant=True)
        model = PosteriorModel.from_design(design, always_include_constant=True)
        assert model.always_included == (0,)
        assert model.score(np.array([0, 1, 0, 0, 0])) == -np.inf
        assert np.isfinite(model.score(np.array([1, 1, 0, 0, 0])))


class TestEvaluateMany:
    def test_matches_single_scores(self, synthetic_target, rng):
        X = (rng.random((50, 10)) < 0.5).astype(np.uint8)
        expected = [synthetic_target.score(x) for x in X]
        np.testing.assert_array_equal(evaluate_many(synthetic_target, X), expected)

    def test_thread_count_does_not_change_result(self, synthetic_target, rng):
        X = (rng.random((101, 10)) < 0.5).astype(np.uint8)
        np.testing.assert_array_equal(
            evaluate_many(synthetic_target, X, jobs=1), evaluate_many(synthetic_target, X, jobs=4)
        )

    def test_empty(self, toy_target):
        assert evaluate_many(toy_target, np.empty((0, 4), dtype=np.uint8)).shape == (0,)


class TestPrior:
    def test_draws_are_feasible(self, constrained_target, rng):
        X = sample_prior(constrained_target, 2000, rng)
        assert constrained_target.feasible_rows(X).all()
        # main effects stay Bernoulli(1/2)
        np.testing.assert_allclose(X[:, :4].mean(axis=0), 0.5, atol=0.05)

    def test_density_normalizes_on_feasible_set(self, constrained_target):
        states = all_states(10)
        logq = log_prior_density(constrained_target, states)
        feasible = constrained_target.feasible_rows(states)
        assert np.all(np.isneginf(logq[~feasible]))
        assert logsumexp(logq[feasible]) == pytest.approx(0.0, abs=1e-12)

    def test_forced_components(self, rng):
        design = generate_toy(seed=0, add_constant=True)
        model = PosteriorModel.from_design(design, always_include_constant=True)
        X = sample_prior(model, 100, rng)
        assert X[:, 0].all()
        assert logsumexp(log_prior_density(model, all_states(5))) == pytest.approx(0.0, abs=1e-12)


def regression_design(m=50, beta=(2.0, 0.5, 0.0), seed=0):
    rng = np.random.default_rng(seed)
    Z = rng.normal(size=(m, len(beta)))
    y = Z @ np.asarray(beta) + rng.normal(size=m)
    return DesignMatrix(y, Z, [Column(f"x{k + 1}", ColumnKind.MAIN) for k in range(len(beta))])


class TestDuplicatedColumns:
    @pytest.mark.parametrize("criterion", list(Criterion))
    def test_either_copy_scores_the_same(self, criterion):
        model = PosteriorModel.from_design(duplicated_design(), criterion=criterion)
        assert model.score(np.array([1, 0, 0])) == pytest.approx(model.score(np.array([0, 1, 0])), rel=1e-12)
        assert model.score(np.array([1, 0, 1])) == pytest.approx(model.score(np.array([0, 1, 1])), rel=1e-12)


class TestPriorVariance:
    @pytest.fixture
    def design(self):
        return regression_design()

    def model(self, design, v2):
        w, lam, _ = default_hyperparameters(design)
        return PosteriorModel.from_design(design, hyper=Hyperparameters(w, lam, v2))

    @pytest.mark.parametrize("v2", [1e-6, 1.0, 1e6])
    def test_scores_are_finite(self, design, v2):
        model = self.model(design, v2)
        assert all(np.isfinite(model.score(x)) for x in all_states(3))

    def test_empty_model_does_not_depend_on_v2(self, design):
        empty = np.zeros(3, dtype=np.uint8)
        scores = [self.model(design, v2).score(empty) for v2 in (1e-6, 1.0, 1e6)]
        np.testing.assert_allclose(scores, scores[0], rtol=1e-12)

    def test_vanishing_variance_approaches_the_null_model(self, design):
        model = self.model(design, 1e-6)
        empty = model.score(np.zeros(3, dtype=np.uint8))
        for gamma in all_states(3)[1:]:
            assert model.score(gamma) == pytest.approx(empty, abs=1e-2)

    @pytest.mark.parametrize("v2", [1.0, 1e6])
    def test_strong_effect_beats_the_null_model(self, design, v2):
        model = self.model(design, v2)
        assert model.score(np.array([1, 0, 0])) > model.score(np.zeros(3)) + 5.0


class TestLargeSample:
    def test_hb_and_bic_rank_models_alike(self):
        design = regression_design(m=10_000, beta=(1.0, -0.5, 0.1, 0.0, 0.0), seed=3)
        states = all_states(5)
        hb = [PosteriorModel.from_design(design).score(x) for x in states]
        bic = [PosteriorModel.from_design(design, criterion=Criterion.BIC).score(x) for x in states]
        assert np.argmax(hb) == np.argmax(bic)
        assert spearmanr(hb, bic).correlation > 0.9

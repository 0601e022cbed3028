"""Gibbs sweep bookkeeping, reproducibility, and posterior predictions."""

import math

import numpy as np
import pytest
from scipy.special import ndtr, ndtri

from vortess.exceptions import ConfigError, NumericError, SchemaMismatchError
from vortess.latent import LatentState, draw_latents, update_latents
from vortess.priors import PriorConfig, TessellationPrior
from vortess.sampler import (
    Diagnostics,
    PosteriorDraws,
    SamplerConfig,
    posterior_interval,
    posterior_prob_draws,
    posterior_scores,
    predict_class,
    predict_proba,
    run_gibbs,
    variable_inclusion,
)
from vortess.tessellation import Tessellation, ensemble_fit


# ---- oracles ----------------------------------------------------------------


def sort_quantile(values, q):
    """Inverted-CDF quantile: smallest order statistic with CDF >= q."""
    ordered = sorted(values)
    idx = max(math.ceil(q * len(ordered)) - 1, 0)
    return ordered[idx]


def inclusion_recount(draws):
    pct = []
    for cov in range(draws.n_features):
        hits = total = 0
        for snapshot in draws.snapshots:
            for tess, _ in snapshot:
                total += 1
                if cov in tess.dims.tolist():
                    hits += 1
        pct.append(100.0 * hits / total)
    return pct


def manual_draws(g_values, n_features=1, m=1, p0=0.5):
    """Draws whose every member is a single-cell tessellation worth g/m."""
    config = SamplerConfig(m=m, burn_in=0, draws=len(g_values), p0=p0, seed=0)
    snapshots = []
    for g in g_values:
        member = (Tessellation([0], [[0.0]]), np.array([g / m]))
        snapshots.append(tuple(member for _ in range(m)))
    return PosteriorDraws(tuple(snapshots), n_features, config)


def small_problem(n=40, p=3, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    y = (X[:, 0] + 0.5 * rng.standard_normal(n) > 0).astype(int)
    return X, y


# ---- config -----------------------------------------------------------------


class TestSamplerConfig:
    def test_defaults_round_trip_through_dict(self):
        config = SamplerConfig()
        assert SamplerConfig.from_dict(config.to_dict()) == config

    def test_offset_is_normal_quantile_of_p0(self):
        assert SamplerConfig().offset == 0.0
        assert SamplerConfig(p0=0.975).offset == pytest.approx(ndtri(0.975), abs=0)

    def test_total_sweeps(self):
        assert SamplerConfig(burn_in=3, draws=2, thin=2).total_sweeps == 7

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(m=0),
            dict(draws=0),
            dict(thin=0),
            dict(burn_in=-1),
            dict(threshold=0.0),
            dict(threshold=1.0),
            dict(p0=1.0),
            dict(sigma_c=0.0),
            dict(seed=1.5),
        ],
    )
    def test_invalid_values_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            SamplerConfig(**kwargs)

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ConfigError, match="mm"):
            SamplerConfig.from_dict({"mm": 4})


# ---- smoke contracts ---------------------------------------------------------


class TestSmokeContract:
    def test_tiny_problem_two_sweeps(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0, 0, 1, 1])
        config = SamplerConfig(m=1, burn_in=0, draws=2, seed=7, debug_every=1)
        draws = run_gibbs(X, y, config)
        assert draws.n_draws == 2
        assert draws.n_features == 1
        for snapshot in draws.snapshots:
            assert len(snapshot) == 1
            for tess, mu in snapshot:
                tess.validate()
                assert mu.shape == (tess.n_centres,)
                assert np.all(np.isfinite(mu))

    def test_snapshot_count_with_burn_in_and_thinning(self):
        X, y = small_problem(n=20, p=2, seed=1)
        config = SamplerConfig(m=2, burn_in=3, draws=2, thin=2, seed=1, debug_every=1)
        draws = run_gibbs(X, y, config)
        assert draws.n_draws == 2
        assert draws.diagnostics.proposed.shape == (7, 6)
        assert draws.diagnostics.proposed.sum() == 7 * 2

    def test_latent_draws_alone_keep_signs(self):
        # frozen fit, no structure or output updates: signs must hold
        rng = np.random.default_rng(5)
        y = np.array([0, 1] * 25)
        state = LatentState(draw_latents(np.zeros(50), y, rng), np.zeros(50))
        for _ in range(40):
            state = update_latents(state, y, rng)
            state.check_signs(y)

    def test_diagnostics_counts_and_sizes(self):
        X, y = small_problem(n=30, p=2, seed=3)
        config = SamplerConfig(m=4, burn_in=5, draws=5, seed=3, debug_every=0)
        diag = run_gibbs(X, y, config).diagnostics
        assert isinstance(diag, Diagnostics)
        assert np.all(diag.accepted <= diag.proposed)
        assert np.all(diag.dim_counts >= 1) and np.all(diag.dim_counts <= 2)
        assert np.all(diag.centre_counts >= 1)
        assert len(diag.summary_lines()) == 8


# ---- residual bookkeeping ----------------------------------------------------


class TestBookkeeping:
    def test_cached_test_scores_match_post_hoc_evaluation(self):
        X, y = small_problem(n=60, p=3, seed=2)
        X_test = np.random.default_rng(9).standard_normal((25, 3))
        config = SamplerConfig(m=12, burn_in=30, draws=20, seed=2, debug_every=1)
        draws = run_gibbs(X, y, config, X_test=X_test)
        assert draws.test_scores.shape == (20, 25)
        fresh = posterior_scores(draws, X_test)
        assert np.max(np.abs(draws.test_scores - fresh)) < 1e-8

    def test_posterior_scores_agree_with_ensemble_fit(self):
        X, y = small_problem(n=30, p=2, seed=4)
        config = SamplerConfig(m=5, burn_in=10, draws=6, seed=4)
        draws = run_gibbs(X, y, config)
        scores = posterior_scores(draws, X)
        for k, snapshot in enumerate(draws.snapshots):
            assert np.allclose(scores[k], ensemble_fit(X, snapshot), atol=1e-12)


# ---- reproducibility ----------------------------------------------------------


class TestReproducibility:
    def test_same_seed_gives_identical_draws(self):
        X, y = small_problem(n=50, p=3, seed=6)
        X_test = X[:10]
        config = SamplerConfig(m=8, burn_in=20, draws=15, seed=123)
        a = run_gibbs(X, y, config, X_test=X_test)
        b = run_gibbs(X, y, config, X_test=X_test)
        assert np.array_equal(a.test_scores, b.test_scores)
        for snap_a, snap_b in zip(a.snapshots, b.snapshots):
            for (ta, ma), (tb, mb) in zip(snap_a, snap_b):
                assert np.array_equal(ta.dims, tb.dims)
                assert np.array_equal(ta.centres, tb.centres)
                assert np.array_equal(ma, mb)
        assert np.array_equal(a.diagnostics.accepted, b.diagnostics.accepted)

    def test_different_seed_differs(self):
        X, y = small_problem(n=50, p=3, seed=6)
        a = run_gibbs(X, y, SamplerConfig(m=8, burn_in=20, draws=15, seed=1), X_test=X[:10])
        b = run_gibbs(X, y, SamplerConfig(m=8, burn_in=20, draws=15, seed=2), X_test=X[:10])
        assert not np.array_equal(a.test_scores, b.test_scores)


# ---- posterior predictive -----------------------------------------------------


class TestPredictProba:
    def test_zero_scores_give_half(self):
        draws = manual_draws([0.0, 0.0, 0.0])
        assert predict_proba(draws, [[0.0]]) == pytest.approx(0.5, abs=0)

    def test_constant_three_matches_normal_cdf(self):
        draws = manual_draws([3.0] * 4)
        assert predict_proba(draws, [[0.0]]) == pytest.approx(0.99865, abs=1e-5)

    def test_two_draw_mixture(self):
        draws = manual_draws([0.0, 3.0])
        assert predict_proba(draws, [[0.0]]) == pytest.approx(0.749325, abs=1e-5)

    def test_single_row_returns_float(self):
        draws = manual_draws([0.0, 3.0])
        p = predict_proba(draws, np.array([0.0]))
        assert isinstance(p, float)

    def test_offset_shifts_probability(self):
        draws = manual_draws([0.0, 0.0], p0=0.975)
        assert predict_proba(draws, [[0.0]]) == pytest.approx(0.975, abs=1e-12)

    def test_cached_scores_used_when_matrix_omitted(self):
        X, y = small_problem(n=40, p=2, seed=8)
        config = SamplerConfig(m=4, burn_in=10, draws=8, seed=8)
        draws = run_gibbs(X, y, config, X_test=X[:5])
        assert np.allclose(predict_proba(draws), predict_proba(draws, X[:5]), atol=1e-12)

    def test_missing_cache_raises(self):
        draws = manual_draws([0.0])
        with pytest.raises(ValueError, match="cached"):
            predict_proba(draws)

    def test_width_mismatch_raises(self):
        draws = manual_draws([0.0])
        with pytest.raises(SchemaMismatchError):
            predict_proba(draws, [[0.0, 1.0]])

    def test_probability_draws_lie_in_unit_interval(self):
        X, y = small_problem(n=40, p=2, seed=12)
        draws = run_gibbs(X, y, SamplerConfig(m=6, burn_in=10, draws=10, seed=12))
        probs = posterior_prob_draws(draws, X)
        assert probs.shape == (10, 40)
        assert np.all((probs > 0) & (probs < 1))


class TestPredictClass:
    def test_strictly_above_threshold(self):
        assert predict_class(0.51, 0.5) == 1

    def test_equal_to_threshold_is_zero(self):
        assert predict_class(0.5, 0.5) == 0

    def test_custom_threshold(self):
        assert predict_class(0.4, 0.3) == 1

    def test_vectorised(self):
        out = predict_class(np.array([0.2, 0.5, 0.8]), 0.5)
        assert out.tolist() == [0, 0, 1]


class TestPosteriorInterval:
    def test_constant_draws_collapse(self):
        draws = manual_draws([1.0] * 6)
        lo, hi = posterior_interval(draws, np.array([0.0]), alpha=0.1)
        assert lo == hi == pytest.approx(ndtr(1.0), abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.1, 0.13, 0.5])
    def test_matches_sort_oracle_exactly(self, alpha):
        rng = np.random.default_rng(31)
        g = rng.standard_normal(100)
        draws = manual_draws(g.tolist())
        lo, hi = posterior_interval(draws, np.array([0.0]), alpha=alpha)
        probs = ndtr(g)
        assert lo == sort_quantile(probs, alpha / 2.0)
        assert hi == sort_quantile(probs, 1.0 - alpha / 2.0)

    def test_brackets_point_estimate(self):
        X, y = small_problem(n=40, p=2, seed=14)
        config = SamplerConfig(m=6, burn_in=20, draws=40, seed=14)
        draws = run_gibbs(X, y, config, X_test=X[:15])
        lo, hi = posterior_interval(draws, alpha=0.1)
        p_hat = predict_proba(draws)
        assert np.all(lo <= p_hat + 1e-12) and np.all(p_hat <= hi + 1e-12)

    def test_symmetric_draws_centre_on_half(self):
        g = np.array([-1.5, -0.5, -0.1, 0.1, 0.5, 1.5])
        lo, hi = posterior_interval(manual_draws(g.tolist()), np.array([0.0]), alpha=0.4)
        assert lo + hi == pytest.approx(1.0, abs=1e-12)

    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            posterior_interval(manual_draws([0.0]), np.array([0.0]), alpha=1.0)


class TestVariableInclusion:
    def test_single_member_single_dim(self):
        config = SamplerConfig(m=1, burn_in=0, draws=1, seed=0)
        snap = ((Tessellation([0], [[0.0]]), np.zeros(1)),)
        draws = PosteriorDraws((snap,), 3, config)
        assert variable_inclusion(draws).tolist() == [100.0, 0.0, 0.0]

    def test_two_members(self):
        config = SamplerConfig(m=2, burn_in=0, draws=1, seed=0)
        snap = (
            (Tessellation([0], [[0.0]]), np.zeros(1)),
            (Tessellation([0, 1], [[0.0, 0.0]]), np.zeros(1)),
        )
        draws = PosteriorDraws((snap,), 2, config)
        assert variable_inclusion(draws).tolist() == [100.0, 50.0]

    def test_matches_recount_on_random_draws(self):
        rng = np.random.default_rng(77)
        p = 5
        snapshots = []
        for _ in range(6):
            members = []
            for _ in range(4):
                d = int(rng.integers(1, p + 1))
                dims = np.sort(rng.choice(p, size=d, replace=False))
                centres = rng.standard_normal((2, d))
                members.append((Tessellation(dims, centres), np.zeros(2)))
            snapshots.append(tuple(members))
        config = SamplerConfig(m=4, burn_in=0, draws=6, seed=0)
        draws = PosteriorDraws(tuple(snapshots), p, config)
        assert variable_inclusion(draws).tolist() == inclusion_recount(draws)


# ---- guard rails --------------------------------------------------------------


class TestGuards:
    def test_single_class_warns_but_runs(self):
        X = np.random.default_rng(0).standard_normal((12, 2))
        with pytest.warns(RuntimeWarning, match="all 1"):
            draws = run_gibbs(X, np.ones(12, dtype=int),
                              SamplerConfig(m=2, burn_in=2, draws=2, seed=0))
        assert draws.n_draws == 2

    def test_non_binary_y_rejected(self):
        X = np.zeros((4, 2))
        with pytest.raises(ValueError, match="0 and 1"):
            run_gibbs(X, np.array([0, 1, 2, 1]), SamplerConfig(m=1, burn_in=0, draws=1))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            run_gibbs(np.zeros((4, 2)), np.array([0, 1, 0]),
                      SamplerConfig(m=1, burn_in=0, draws=1))

    def test_test_matrix_width_checked(self):
        X, y = small_problem(n=10, p=2, seed=0)
        with pytest.raises(SchemaMismatchError):
            run_gibbs(X, y, SamplerConfig(m=1, burn_in=0, draws=1), X_test=np.zeros((3, 5)))

    def test_nan_abort_names_sweep(self, monkeypatch):
        import vortess.sampler as sampler_module

        real = sampler_module.draw_outputs_from_partition
        calls = {"n": 0}

        def poisoned(*args, **kwargs):
            calls["n"] += 1
            out = real(*args, **kwargs)
            if calls["n"] == 7:
                out = np.full_like(out, np.nan)
            return out

        monkeypatch.setattr(sampler_module, "draw_outputs_from_partition", poisoned)
        X, y = small_problem(n=20, p=2, seed=5)
        with pytest.raises(NumericError, match="sweep"):
            run_gibbs(X, y, SamplerConfig(m=3, burn_in=4, draws=4, seed=5))


# ---- statistical behaviour -----------------------------------------------------


class TestShrinkage:
    def test_larger_k_shrinks_outputs(self):
        X, y = small_problem(n=80, p=2, seed=21)

        def max_abs_mu(k):
            config = SamplerConfig(m=10, k=k, burn_in=60, draws=60, seed=21)
            draws = run_gibbs(X, y, config)
            return max(float(np.max(np.abs(mu)))
                       for snap in draws.snapshots for _, mu in snap)

        assert max_abs_mu(10.0) < max_abs_mu(1.0)


class TestCalibration:
    def test_prior_predictive_data_keeps_probabilities_centred(self):
        rng = np.random.default_rng(2024)
        n = 420
        X = rng.standard_normal((n, 2))
        gen_cfg = PriorConfig(k=3.0, m=30, omega=2.0, lambda_c=8.0, sigma_c=0.3)
        gen_prior = TessellationPrior(gen_cfg, X)
        ensemble = []
        for _ in range(gen_cfg.m):
            tess = gen_prior.sample(rng)
            ensemble.append((tess, gen_cfg.sigma_mu * rng.standard_normal(tess.n_centres)))
        probs = ndtr(ensemble_fit(X, ensemble))
        y = (rng.random(n) < probs).astype(int)

        X_train, y_train = X[:300], y[:300]
        X_hold, y_hold = X[300:], y[300:]
        per_class = min(int(np.sum(y_hold == 0)), int(np.sum(y_hold == 1)))
        keep = np.concatenate([
            np.flatnonzero(y_hold == 0)[:per_class],
            np.flatnonzero(y_hold == 1)[:per_class],
        ])

        config = SamplerConfig(m=25, omega=2.0, lambda_c=8.0, sigma_c=0.3,
                               burn_in=150, draws=150, seed=5, debug_every=100)
        draws = run_gibbs(X_train, y_train, config, X_test=X_hold[keep])
        assert per_class >= 30
        assert 0.4 <= float(np.mean(predict_proba(draws))) <= 0.6


class TestRotatedAxisDeskScale:
    def test_learns_rotated_quadrants(self):
        theta = math.pi / 6.0
        rng = np.random.default_rng(3)
        X_raw = rng.random((1200, 2))
        u1 = math.cos(theta) * X_raw[:, 0] - math.sin(theta) * X_raw[:, 1]
        u2 = math.sin(theta) * X_raw[:, 0] + math.cos(theta) * X_raw[:, 1]
        y = ((u1 * u2) > 0).astype(int)

        X_train, y_train = X_raw[:600], y[:600]
        X_test, y_test = X_raw[600:], y[600:]
        mean, std = X_train.mean(axis=0), X_train.std(axis=0)
        config = SamplerConfig(m=50, burn_in=250, draws=250, seed=3, debug_every=100)
        draws = run_gibbs((X_train - mean) / std, y_train, config,
                          X_test=(X_test - mean) / std)
        accuracy = float(np.mean(predict_class(predict_proba(draws), 0.5) == y_test))
        assert accuracy > 0.85

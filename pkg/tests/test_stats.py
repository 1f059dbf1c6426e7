import math

import numpy as np
import pytest

from tangramkit.stats import (
    BootstrapResult,
    Gmm2Fit,
    bootstrap_ci,
    gmm2_fit,
    pearson,
    spearman,
)


class TestBootstrap:
    def test_estimate_is_statistic_of_data(self):
        values = [1.0, 2.0, 3.0, 4.0]
        result = bootstrap_ci(values, seed=0)
        assert result.estimate == pytest.approx(2.5)
        assert result.resamples == 1000

    def test_interval_brackets_estimate(self):
        rng = np.random.default_rng(7)
        values = rng.normal(5.0, 2.0, size=300)
        result = bootstrap_ci(values, seed=1)
        assert result.lower < result.estimate < result.upper

    def test_deterministic_under_seed(self):
        values = list(range(50))
        assert bootstrap_ci(values, seed=3) == bootstrap_ci(values, seed=3)
        a = bootstrap_ci(values, seed=3)
        b = bootstrap_ci(values, seed=4)
        assert (a.lower, a.upper) != (b.lower, b.upper)

    def test_interval_narrows_with_sample_size(self):
        rng = np.random.default_rng(0)
        small = bootstrap_ci(rng.normal(0, 1, size=30), seed=0)
        large = bootstrap_ci(rng.normal(0, 1, size=3000), seed=0)
        assert (large.upper - large.lower) < (small.upper - small.lower)

    def test_custom_statistic_without_axis_support(self):
        # plain python statistic forces the per-resample fallback path
        values = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0]

        def midrange(sample):
            arr = np.asarray(sample)
            return (arr.min() + arr.max()) / 2.0

        result = bootstrap_ci(values, statistic=midrange, resamples=200, seed=2)
        assert result.estimate == pytest.approx(5.0)
        assert result.lower <= result.estimate <= result.upper

    def test_vectorized_matches_loop(self):
        values = np.arange(40, dtype=float)
        fast = bootstrap_ci(values, statistic=np.mean, resamples=300, seed=9)

        def slow_mean(sample, axis=None):
            if axis is None:
                return float(np.mean(sample))
            raise TypeError("no axis")

        slow = bootstrap_ci(values, statistic=slow_mean, resamples=300, seed=9)
        assert fast.lower == pytest.approx(slow.lower)
        assert fast.upper == pytest.approx(slow.upper)

    def test_level_controls_width(self):
        rng = np.random.default_rng(1)
        values = rng.normal(0, 1, size=200)
        wide = bootstrap_ci(values, level=0.99, seed=0)
        narrow = bootstrap_ci(values, level=0.8, seed=0)
        assert (wide.upper - wide.lower) > (narrow.upper - narrow.lower)

    def test_rejects_empty_and_bad_params(self):
        with pytest.raises(ValueError):
            bootstrap_ci([], seed=0)
        with pytest.raises(ValueError):
            bootstrap_ci([1.0, 2.0], resamples=0, seed=0)
        with pytest.raises(ValueError):
            bootstrap_ci([1.0, 2.0], level=1.5, seed=0)


class TestCorrelation:
    def test_pearson_perfect_line(self):
        xs = [1.0, 2.0, 3.0, 4.0]
        assert pearson(xs, [2 * x + 1 for x in xs]) == pytest.approx(1.0)
        assert pearson(xs, [-x for x in xs]) == pytest.approx(-1.0)

    def test_pearson_hand_value(self):
        xs = [1.0, 2.0, 3.0]
        ys = [1.0, 2.0, 2.0]
        # r = cov / (sx * sy) = (1/3 * 1) / (sqrt(2/3) * sqrt(2/9))
        expected = (1.0 / 3.0) / (math.sqrt(2.0 / 3.0) * math.sqrt(2.0 / 9.0))
        assert pearson(xs, ys) == pytest.approx(expected)

    def test_spearman_monotone_nonlinear(self):
        xs = [1.0, 2.0, 3.0, 4.0, 5.0]
        assert spearman(xs, [x ** 3 for x in xs]) == pytest.approx(1.0)
        assert spearman(xs, [-(x ** 3) for x in xs]) == pytest.approx(-1.0)

    def test_spearman_ties_use_average_ranks(self):
        xs = [1.0, 2.0, 3.0, 4.0]
        ys = [10.0, 20.0, 20.0, 30.0]
        # ranks of ys: 1, 2.5, 2.5, 4
        expected = pearson([1.0, 2.0, 3.0, 4.0], [1.0, 2.5, 2.5, 4.0])
        assert spearman(xs, ys) == pytest.approx(expected)

    def test_results_clipped_to_unit_interval(self):
        xs = list(np.linspace(0, 1, 100))
        assert abs(pearson(xs, xs)) <= 1.0
        assert abs(spearman(xs, xs)) <= 1.0

    def test_short_or_mismatched_input_rejected(self):
        for fn in (pearson, spearman):
            with pytest.raises(ValueError):
                fn([1.0, 2.0], [1.0, 2.0])
            with pytest.raises(ValueError):
                fn([1.0, 2.0, 3.0], [1.0, 2.0])

    def test_constant_input_rejected(self):
        with pytest.raises(ValueError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


def bimodal(n_per: int, mu_a: float, mu_b: float, sd: float, seed: int):
    rng = np.random.default_rng(seed)
    return np.concatenate([
        rng.normal(mu_a, sd, size=n_per),
        rng.normal(mu_b, sd, size=n_per),
    ])


class TestGmm2:
    def test_recovers_well_separated_components(self):
        values = bimodal(200, 0.2, 0.8, 0.05, seed=0)
        fit = gmm2_fit(values, seed=0)
        assert fit.means[0] == pytest.approx(0.2, abs=0.02)
        assert fit.means[1] == pytest.approx(0.8, abs=0.02)
        assert fit.weights[0] == pytest.approx(0.5, abs=0.05)
        assert not fit.degenerate

    def test_means_reported_ascending(self):
        for seed in range(5):
            fit = gmm2_fit(bimodal(80, 0.9, 0.1, 0.05, seed=seed), seed=seed)
            assert fit.means[0] < fit.means[1]

    def test_deterministic_under_seed(self):
        values = bimodal(60, 0.3, 0.7, 0.1, seed=2)
        assert gmm2_fit(values, seed=5) == gmm2_fit(values, seed=5)

    def test_weights_sum_to_one(self):
        fit = gmm2_fit(bimodal(100, 0.4, 0.6, 0.1, seed=1), seed=0)
        assert fit.weights[0] + fit.weights[1] == pytest.approx(1.0)
        assert fit.variances[0] > 0 and fit.variances[1] > 0

    def test_degenerate_flag_on_collapsed_data(self):
        values = np.full(50, 0.5)
        fit = gmm2_fit(values, seed=0)
        assert fit.degenerate

    def test_rejects_tiny_input(self):
        with pytest.raises(ValueError):
            gmm2_fit([0.1, 0.9], seed=0)

    def test_loglik_beats_single_component(self):
        values = bimodal(150, 0.1, 0.9, 0.05, seed=3)
        fit = gmm2_fit(values, seed=0)
        mu, var = float(np.mean(values)), float(np.var(values))
        single = float(np.sum(
            -0.5 * math.log(2 * math.pi * var) - (values - mu) ** 2 / (2 * var)
        ))
        assert fit.log_likelihood > single

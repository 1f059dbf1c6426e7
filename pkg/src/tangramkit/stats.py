"""Bootstrap intervals, correlations, and a two-component 1-D Gaussian
mixture fit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp
from scipy.stats import rankdata


class StatsError(ValueError):
    pass


# -- bootstrap --------------------------------------------------------------------


@dataclass(frozen=True)
class BootstrapResult:
    estimate: float
    lower: float
    upper: float
    resamples: int

    def __post_init__(self):
        if not (self.lower <= self.estimate <= self.upper):
            raise StatsError("percentile interval must bracket the estimate")
        if self.resamples < 1:
            raise StatsError("resamples must be positive")


def bootstrap_ci(
    values: Sequence[float],
    statistic: Callable = np.mean,
    resamples: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> BootstrapResult:
    """Percentile bootstrap interval, deterministic under the seed.

    Statistics accepting an ``axis`` keyword (numpy reductions) are
    evaluated vectorized; anything else is called per resample.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise StatsError("bootstrap needs non-empty data")
    if resamples < 1:
        raise StatsError("resamples must be positive")
    if not 0.0 < level < 1.0:
        raise StatsError("level must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    indices = rng.integers(0, data.size, size=(resamples, data.size))
    samples = data[indices]
    try:
        stats = np.asarray(statistic(samples, axis=1), dtype=float)
        if stats.shape != (resamples,):
            raise TypeError
    except TypeError:
        stats = np.array([statistic(row) for row in samples], dtype=float)
    alpha = (1.0 - level) / 2.0
    lower, upper = np.percentile(stats, [100 * alpha, 100 * (1 - alpha)])
    return BootstrapResult(
        estimate=float(statistic(data)),
        lower=float(lower),
        upper=float(upper),
        resamples=resamples,
    )


# -- correlations -----------------------------------------------------------------


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise StatsError("correlation needs equal-length inputs of size >= 3")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc ** 2).sum() * (yc ** 2).sum())
    if denom == 0:
        raise StatsError("correlation undefined for zero-variance input")
    return float(np.clip((xc * yc).sum() / denom, -1.0, 1.0))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average-tie fractional ranks."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise StatsError("correlation needs equal-length inputs of size >= 3")
    return pearson(rankdata(x), rankdata(y))


# -- two-component Gaussian mixture -------------------------------------------------

VARIANCE_FLOOR = 1e-6


@dataclass(frozen=True)
class Gmm2Fit:
    means: tuple[float, float]  # ascending
    variances: tuple[float, float]
    weights: tuple[float, float]
    log_likelihood: float
    iterations: int
    degenerate: bool = False


def _log_likelihood(data, means, variances, weights) -> float:
    # n x 2 matrix of log(w_k * N(x | m_k, v_k))
    log_pdf = (
        np.log(weights)
        - 0.5 * np.log(2 * np.pi * variances)
        - 0.5 * (data[:, None] - means) ** 2 / variances
    )
    return float(logsumexp(log_pdf, axis=1).sum())


def gmm2_fit(
    values: Sequence[float],
    seed: int = 0,
    max_iter: int = 500,
    tol: float = 1e-8,
    n_init: int = 10,
) -> Gmm2Fit:
    """Expectation-maximization with kmeans++-style seeded starts.

    ``n_init`` independent restarts guard against local optima; the fit
    with the best final log-likelihood wins.  The log-likelihood is
    asserted non-decreasing at every iteration; identical inputs
    collapse to a flagged single-component fit.
    """
    data = np.asarray(values, dtype=float)
    if data.size < 4:
        raise StatsError("mixture fit needs at least 4 values")
    if np.ptp(data) == 0:
        c = float(data[0])
        return Gmm2Fit(
            means=(c, c),
            variances=(VARIANCE_FLOOR, VARIANCE_FLOOR),
            weights=(0.5, 0.5),
            log_likelihood=_log_likelihood(
                data, np.array([c, c]), np.array([VARIANCE_FLOOR] * 2), np.array([0.5, 0.5])
            ),
            iterations=0,
            degenerate=True,
        )

    best: Gmm2Fit | None = None
    for child_seed in np.random.SeedSequence(seed).spawn(max(1, n_init)):
        fit = _gmm2_fit_once(data, np.random.default_rng(child_seed), max_iter, tol)
        if best is None or fit.log_likelihood > best.log_likelihood:
            best = fit
    return best


def _gmm2_fit_once(data, rng, max_iter: int, tol: float) -> Gmm2Fit:
    # kmeans++-style: first center uniform, second proportional to
    # squared distance from the first.
    first = data[rng.integers(data.size)]
    sq = (data - first) ** 2
    second = data[rng.choice(data.size, p=sq / sq.sum())]
    centers = np.array([first, second])

    assign = np.argmin(np.abs(data[:, None] - centers), axis=1)
    means = np.empty(2)
    variances = np.empty(2)
    weights = np.empty(2)
    for k in range(2):
        members = data[assign == k]
        if members.size == 0:
            members = data
        means[k] = members.mean()
        variances[k] = max(members.var(), VARIANCE_FLOOR)
        weights[k] = max(members.size / data.size, 1.0 / data.size)
    weights /= weights.sum()

    ll = _log_likelihood(data, means, variances, weights)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        # E-step
        log_pdf = (
            np.log(weights)
            - 0.5 * np.log(2 * np.pi * variances)
            - 0.5 * (data[:, None] - means) ** 2 / variances
        )
        log_norm = logsumexp(log_pdf, axis=1, keepdims=True)
        resp = np.exp(log_pdf - log_norm)
        # M-step
        totals = resp.sum(axis=0)
        weights = totals / data.size
        means = (resp * data[:, None]).sum(axis=0) / totals
        variances = np.maximum(
            (resp * (data[:, None] - means) ** 2).sum(axis=0) / totals,
            VARIANCE_FLOOR,
        )
        new_ll = _log_likelihood(data, means, variances, weights)
        assert new_ll >= ll - 1e-9, f"log-likelihood decreased: {ll} -> {new_ll}"
        done = new_ll - ll < tol
        ll = new_ll
        if done:
            break

    order = np.argsort(means)
    return Gmm2Fit(
        means=(float(means[order[0]]), float(means[order[1]])),
        variances=(float(variances[order[0]]), float(variances[order[1]])),
        weights=(float(weights[order[0]]), float(weights[order[1]])),
        log_likelihood=ll,
        iterations=iterations,
        degenerate=False,
    )

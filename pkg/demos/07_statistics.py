"""
Bootstrap intervals, correlations, and mixture fits
===================================================

The statistics layer is small and deterministic: percentile bootstrap
confidence intervals, Pearson and Spearman correlations, and a
two-component 1-d Gaussian mixture fit by expectation-maximization
(used to summarize bimodal per-item accuracy distributions).
"""

import numpy as np

from tangramkit import bootstrap_ci, gmm2_fit, pearson, spearman

rng = np.random.default_rng(0)

# percentile bootstrap for the mean; deterministic under the seed
sample = rng.normal(5.0, 2.0, size=300)
ci = bootstrap_ci(sample, seed=0)
print(f"mean {ci.estimate:.3f}, 95% CI [{ci.lower:.3f}, {ci.upper:.3f}] "
      f"({ci.resamples} resamples)")
assert bootstrap_ci(sample, seed=0) == ci

# any statistic works; numpy reductions run vectorized
ci_median = bootstrap_ci(sample, statistic=np.median, seed=0)
print(f"median {ci_median.estimate:.3f}, "
      f"95% CI [{ci_median.lower:.3f}, {ci_median.upper:.3f}]")

# correlations: pearson for linear trend, spearman for rank agreement
xs = rng.uniform(0, 1, size=200)
ys = xs ** 3 + rng.normal(0, 0.02, size=200)
print(f"\ncubic + noise: pearson {pearson(xs, ys):.3f}, "
      f"spearman {spearman(xs, ys):.3f}")

# a bimodal accuracy distribution and its two-component summary
values = np.concatenate([
    rng.normal(0.525, 0.08, size=60),
    rng.normal(0.838, 0.08, size=60),
])
fit = gmm2_fit(values, seed=0)
print(f"\ngmm means {fit.means[0]:.3f} / {fit.means[1]:.3f}, "
      f"weights {fit.weights[0]:.2f} / {fit.weights[1]:.2f}")
print(f"converged in {fit.iterations} iterations, "
      f"log-likelihood {fit.log_likelihood:.2f}, degenerate={fit.degenerate}")

# constant data cannot support two components; the fit says so instead
# of inventing structure
flat = gmm2_fit(np.full(50, 0.5), seed=0)
print("constant input degenerate:", flat.degenerate)

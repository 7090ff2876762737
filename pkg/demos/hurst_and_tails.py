"""Scaling exponents, Gaussianization and tail exceedance.

The cumulative sum of i.i.d. alpha-stable returns scales like tau**(1/alpha).
Mapping each return through the model CDF and the normal quantile removes
the heavy tails; exceedance curves compare empirical tails with the model.
"""

import numpy as np
from scipy import stats

from movstable import StableParams, constant_track, exceedance_curve, gaussianize, sample_stable, structure_function

p = StableParams(0.0, 1.0, 1.6)
xs = sample_stable(p, 100_000, seed=2)

est = structure_function(np.cumsum(xs), [0.25, 0.5, 1.0], 2 ** np.arange(9))
for q, h, r2 in zip(est.qs, est.hurst, est.r2):
    print(f"q={q:4.2f}  zeta/q={h:.4f}  (1/alpha={1 / p.alpha:.4f})  R^2={r2:.5f}")

g = gaussianize(xs, constant_track(xs, p))
print(f"raw excess kurtosis {stats.kurtosis(xs):.1f}; gaussianized {stats.kurtosis(g):.4f}")

curve = exceedance_curve(xs, constant_track(xs, p), np.arange(1, 9), [1.6, 2.0])
print(" k   right empirical  alpha=1.6 model  alpha=2 model")
for i, k in enumerate(curve.ks):
    print(f"{k:2.0f}   {curve.right_emp[i]:.3e}        {curve.model_curves[1.6][1][i]:.3e}        {curve.model_curves[2.0][1][i]:.3e}")

"""Fixed-alpha likelihood sweep against a GARCH(1,1) baseline.

On data whose scale jumps between volatility regimes, adaptive scale with a
fixed alpha beats a single static scale at every alpha, and the adaptive
sweep peaks near the true alpha. GARCH adapts the scale too but assumes
Gaussian innovations; on infinite-variance data a few huge values dominate
its likelihood and the fit often collapses to a constant variance (a = b = 0).
"""

import numpy as np

from movstable import garch11_fit, sweep_fixed_alpha, track
from movstable.synthetic import sigma_switch

xs = sigma_switch(seed=1, alpha=1.5)
grid = np.round(np.arange(1.0, 2.0001, 0.1), 10)

adaptive = sweep_fixed_alpha(xs, grid)
static = dict(sweep_fixed_alpha(xs, grid, adaptive_sigma=False))
print(" alpha  adaptive sigma  static sigma")
for a, ll in adaptive:
    print(f" {a:4.2f}   {ll:12.4f}  {static[a]:12.4f}")
best = max(adaptive, key=lambda r: r[1])
print(f"adaptive sweep peaks at alpha = {best[0]}")

g = garch11_fit(xs)
print(f"GARCH(1,1) a={g.params.a:.3f} b={g.params.b:.3f}: {g.mean_loglik:.4f}")
print(f"fully adaptive stable tracker:      {track(xs).mean_loglik:.4f}")

"""Synthetic series with known ground truth, used by tests, demos and CLI fixtures."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .stable import StableParams, sample_stable

__all__ = ["regime_series", "alpha_switch", "sigma_switch"]


def regime_series(segments: Sequence[tuple[StableParams, int]], seed=None) -> np.ndarray:
    """Concatenate i.i.d. stable blocks; each ``(params, length)`` pair is one regime."""
    ss = np.random.SeedSequence(seed)
    children = ss.spawn(len(segments))
    parts = [sample_stable(p, n, np.random.default_rng(c)) for (p, n), c in zip(segments, children)]
    return np.concatenate(parts)


def alpha_switch(seed=None, alphas=(1.9, 1.3), n_each: int = 5000, sigma: float = 1.0) -> np.ndarray:
    """Stability switching between regimes at constant scale."""
    return regime_series([(StableParams(0.0, sigma, a, 0.0), n_each) for a in alphas], seed)


def sigma_switch(
    seed=None,
    alpha: float = 1.5,
    sigmas: Sequence[float] = (1.0, 3.0, 0.5, 2.0),
    n_each: int = 2500,
) -> np.ndarray:
    """Constant stability with the scale jumping between volatility regimes."""
    return regime_series([(StableParams(0.0, s, alpha, 0.0), n_each) for s in sigmas], seed)

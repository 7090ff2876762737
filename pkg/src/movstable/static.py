"""Whole-sample method-of-moments estimation of location, scale and stability."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .exceptions import DegenerateSampleError, StableDomainError, TableConstructionError
from .numerics import MonotoneInterpolator
from .stable import StableParams, moment_constant

__all__ = [
    "MomentPowers",
    "AlphaTable",
    "estimate_mu",
    "estimate_sigma",
    "optimal_sigma_power",
    "build_alpha_table",
    "default_alpha_table",
    "estimate_alpha",
    "fit_static",
    "power_mean",
]


@dataclass(frozen=True)
class MomentPowers:
    """Power used for the scale estimate and the pair used for the stability ratio."""

    p_sigma: float = 0.35
    p1: float = 0.5
    p2: float = 0.2

    def __post_init__(self):
        if not -1.0 < self.p_sigma < 2.0 or self.p_sigma == 0.0:
            raise StableDomainError(f"p_sigma must lie in (-1, 2) and be nonzero, got {self.p_sigma}")
        for p in (self.p1, self.p2):
            if not 0.0 < p < 2.0:
                raise StableDomainError(f"ratio powers must lie in (0, 2), got {p}")
        if self.p1 == self.p2:
            raise StableDomainError("p1 and p2 must differ")


class AlphaTable:
    """Grid of ``(alpha, M[alpha, p1] / M[alpha, p2])`` with an inverse lookup.

    The ratio must be strictly monotone over the grid; ``lookup`` clamps to the
    grid ends.
    """

    def __init__(self, p1: float, p2: float, alphas, ratios):
        self.p1 = float(p1)
        self.p2 = float(p2)
        self.alphas = np.asarray(alphas, dtype=float)
        self.ratios = np.asarray(ratios, dtype=float)
        self._inverse = MonotoneInterpolator(self.alphas, self.ratios)

    @property
    def alpha_min(self) -> float:
        return float(self.alphas[0])

    @property
    def alpha_max(self) -> float:
        return float(self.alphas[-1])

    def lookup(self, ratio):
        return self._inverse(ratio)

    def rows(self):
        return list(zip(self.alphas.tolist(), self.ratios.tolist()))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "ratio"])
            for a, r in self.rows():
                w.writerow([f"{a:.17g}", f"{r:.17g}"])

    @classmethod
    def from_csv(cls, path, p1: float, p2: float) -> "AlphaTable":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        return cls(p1, p2, [float(r["alpha"]) for r in rows], [float(r["ratio"]) for r in rows])


def _residuals(xs, mu):
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("empty sample")
    r = np.abs(xs - mu)
    if not np.any(r > 0):
        raise DegenerateSampleError("all residuals are zero")
    return r


def power_mean(abs_residuals, p: float) -> float:
    """``(mean(|r|**p)) ** (1/p)``."""
    return float(np.mean(abs_residuals**p) ** (1.0 / p))


def estimate_mu(xs) -> float:
    """Sample mean as the location estimate.

    For ``alpha <= 1`` the mean does not converge; it is returned anyway.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("empty sample")
    return float(np.mean(xs))


def estimate_sigma(xs, mu: float, alpha: float, p: float) -> float:
    """Scale from the ``p``-th absolute central moment, ``(mean|x - mu|^p)^(1/p) / M[alpha, p]``."""
    m = moment_constant(alpha, p)
    return power_mean(_residuals(xs, mu), p) / m


def optimal_sigma_power(alpha: float) -> float:
    """Advisory moment power for the scale estimate at a given stability."""
    if not 1.0 < alpha <= 2.0:
        raise StableDomainError(f"optimal_sigma_power needs alpha in (1, 2], got {alpha}")
    return 2.0 if alpha == 2.0 else 0.5 * (alpha - 1.0)


def build_alpha_table(
    p1: float = 0.5,
    p2: float = 0.2,
    alpha_min: float = 1.05,
    alpha_max: float = 2.0,
    step: float = 0.005,
) -> AlphaTable:
    """Tabulate the moment ratio on the inclusive grid ``alpha_min:alpha_max:step``."""
    if p1 == p2:
        raise StableDomainError("p1 and p2 must differ")
    if not (0.0 < p1 < alpha_min and 0.0 < p2 < alpha_min):
        raise StableDomainError("both powers must lie in (0, alpha_min)")
    if not 0.5 <= alpha_min < alpha_max <= 2.0:
        raise StableDomainError("need 0.5 <= alpha_min < alpha_max <= 2")
    if not step > 0:
        raise StableDomainError("step must be positive")
    n = int(math.floor((alpha_max - alpha_min) / step + 1e-9))
    alphas = np.round(alpha_min + step * np.arange(n + 1), 12)
    if alphas[-1] < alpha_max - 1e-12:
        alphas = np.append(alphas, alpha_max)
    ratios = np.array([moment_constant(a, p1) / moment_constant(a, p2) for a in alphas])
    if not (np.all(np.diff(ratios) > 0) or np.all(np.diff(ratios) < 0)):
        raise TableConstructionError(f"moment ratio for powers ({p1}, {p2}) is not monotone on the grid")
    return AlphaTable(p1, p2, alphas, ratios)


@lru_cache(maxsize=32)
def default_alpha_table(
    p1: float = 0.5, p2: float = 0.2, alpha_min: float = 1.05, alpha_max: float = 2.0, step: float = 0.005
) -> AlphaTable:
    return build_alpha_table(p1, p2, alpha_min, alpha_max, step)


def estimate_alpha(xs, mu: float, table: AlphaTable) -> float:
    """Stability from the ratio of two power means, inverted through ``table``."""
    r = _residuals(xs, mu)
    ratio = power_mean(r, table.p1) / power_mean(r, table.p2)
    return float(table.lookup(ratio))


def fit_static(
    xs,
    table: Optional[AlphaTable] = None,
    p_sigma: Optional[float] = None,
    beta: float = 0.0,
    center: str = "median",
) -> StableParams:
    """Center, then stability from the moment ratio, then scale at that stability.

    ``center`` is ``"median"`` or ``"mean"``. The mean converges only like
    ``n**(1/alpha - 1)`` for heavy tails, which biases the absolute moments
    near ``alpha = 1``; the median is consistent for every ``alpha``.
    Without ``p_sigma`` the scale power follows :func:`optimal_sigma_power` at
    the estimated stability, kept below it.
    """
    table = table or default_alpha_table()
    if center == "mean":
        mu = estimate_mu(xs)
    elif center == "median":
        mu = float(np.median(np.asarray(xs, dtype=float)))
    else:
        raise ValueError(f"unknown center {center!r}")
    alpha = estimate_alpha(xs, mu, table)
    if p_sigma is None:
        p_sigma = optimal_sigma_power(alpha) if alpha > 1.0 else 0.5 * alpha
    if alpha < 2.0 and p_sigma >= alpha:
        p_sigma = alpha - 0.01
    sigma = estimate_sigma(xs, mu, alpha, p_sigma)
    return StableParams(mu, sigma, alpha, beta)

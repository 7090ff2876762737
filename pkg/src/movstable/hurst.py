"""Structure-function scaling exponents, alpha-implied Hurst trajectory and Gaussianization."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .numerics import normal_quantile
from .stable import cdf_batch, frozen_stable
from .tracking import ParamTrack

__all__ = [
    "ScalingEstimate",
    "default_taus",
    "structure_function",
    "adaptive_hurst",
    "gaussianize",
    "jarque_bera",
    "JB_CRITICAL_1PCT",
]

# chi-square(2) upper 1% point
JB_CRITICAL_1PCT = float(stats.chi2.ppf(0.99, 2))
_U_CLAMP = 1e-15


@dataclass
class ScalingEstimate:
    """Per-order scaling exponent ``zeta(q)`` of ``S_q(tau) = mean |x_{t+tau} - x_t|^q``.

    ``structure[i, j]`` is ``S_{qs[i]}(taus[j])``. Orders whose moments
    overflowed carry ``nan`` in ``zeta``/``r2`` and a note in ``diagnostics``.
    """

    qs: np.ndarray
    taus: np.ndarray
    zeta: np.ndarray
    r2: np.ndarray
    structure: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def hurst(self) -> np.ndarray:
        """Generalized Hurst exponents ``zeta(q) / q``."""
        return self.zeta / self.qs

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["q", "zeta", "r2"])
            for q, z, r in zip(self.qs, self.zeta, self.r2):
                w.writerow([f"{q:.17g}", f"{z:.17g}", f"{r:.17g}"])

    def structure_to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["q", "tau", "S"])
            for i, q in enumerate(self.qs):
                for j, tau in enumerate(self.taus):
                    w.writerow([f"{q:.17g}", int(tau), f"{self.structure[i, j]:.17g}"])


def default_taus(n: int) -> np.ndarray:
    """Powers of two from 1 up to ``2**floor(log2(n/10))``."""
    top = int(math.floor(math.log2(n / 10.0)))
    if top < 1:
        raise ValueError(f"series of length {n} is too short for a lag grid")
    return 2 ** np.arange(top + 1)


def structure_function(series: Sequence[float], qs: Sequence[float], taus: Optional[Sequence[int]] = None) -> ScalingEstimate:
    """Least-squares slope of ``log S_q(tau)`` against ``log tau`` for each ``q``.

    ``series`` is the process level (e.g. cumulative log-price). For i.i.d.
    increments of a strictly stable law ``zeta(q) = q / alpha`` for ``q < alpha``.
    """
    x = np.asarray(series, dtype=float)
    qs = np.asarray(qs, dtype=float)
    taus = default_taus(x.size) if taus is None else np.asarray(taus, dtype=int)
    if np.any(qs <= 0):
        raise ValueError("moment orders must be positive")
    if taus.size < 2 or np.any(np.diff(taus) <= 0) or taus[0] < 1:
        raise ValueError("taus must be strictly increasing positive lags, at least two")
    if x.size <= 4 * taus[-1]:
        raise ValueError(f"series length {x.size} must exceed 4 * max(tau) = {4 * taus[-1]}")
    log_tau = np.log(taus)
    increments = [np.abs(x[tau:] - x[:-tau]) for tau in taus]
    structure = np.empty((qs.size, taus.size))
    zeta = np.full(qs.size, np.nan)
    r2 = np.full(qs.size, np.nan)
    notes = {}
    for i, q in enumerate(qs):
        with np.errstate(over="ignore"):
            structure[i] = [np.mean(d**q) for d in increments]
        if not np.all(np.isfinite(structure[i])) or np.any(structure[i] <= 0):
            notes[float(q)] = "moment overflowed or vanished; exponent undefined"
            continue
        y = np.log(structure[i])
        fit = stats.linregress(log_tau, y)
        zeta[i] = fit.slope
        r2[i] = fit.rvalue**2
    return ScalingEstimate(qs, taus, zeta, r2, structure, notes)


def adaptive_hurst(track: ParamTrack, q: float = 1.0) -> np.ndarray:
    """Per-tick Hurst exponent ``1 / alpha_t`` implied by the tracked stability.

    Ticks where the order ``q`` is not below ``alpha_t`` (the moment would be
    infinite) are ``nan``.
    """
    a = np.asarray(track.alpha, dtype=float)
    h = 1.0 / a
    return np.where(q < a, h, np.nan)


def gaussianize(xs: Sequence[float], track: ParamTrack) -> np.ndarray:
    """Map each value through the tracked stable CDF and then the standard normal quantile."""
    x = track.aligned(xs)
    z = (x - track.mu) / track.sigma
    alpha = np.asarray(track.alpha, dtype=float)
    beta = track.beta
    if alpha.size and np.all(alpha == alpha[0]):
        a = float(alpha[0])
        u = frozen_stable(a, beta if a > 1.0 else 0.0).cdf(z)
    else:
        u = cdf_batch(z, alpha, beta)
    return normal_quantile(np.clip(u, _U_CLAMP, 1.0 - _U_CLAMP))


def jarque_bera(x: Sequence[float]) -> float:
    """Jarque-Bera normality statistic."""
    return float(stats.jarque_bera(np.asarray(x, dtype=float)).statistic)

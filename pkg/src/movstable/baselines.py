"""Comparison models: a single maximum-likelihood scale at fixed stability, and GARCH(1,1)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, signal, special

from .stable import frozen_stable

__all__ = [
    "GarchParams",
    "GarchFit",
    "fit_static_sigma_mle",
    "garch11_variances",
    "garch11_loglik",
    "garch11_fit",
    "simulate_garch11",
]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _mean_loglik_at(xs, log_sigma, dist):
    s = math.exp(log_sigma)
    return float(np.mean(dist.logpdf(xs / s))) - log_sigma


def fit_static_sigma_mle(xs, alpha: float, beta: float = 0.0, rel_tol: float = 1e-6) -> tuple[float, float]:
    """Maximize the mean log-likelihood over one scale, center fixed at zero.

    Golden-section search on ``log(sigma)``; the bracket is widened until the
    maximum is interior. Returns ``(sigma, mean_loglik)``.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("empty sample")
    scale0 = float(np.median(np.abs(xs)))
    if not scale0 > 0:
        scale0 = float(np.mean(np.abs(xs)))
    if not scale0 > 0:
        raise ValueError("degenerate sample: all values are zero")
    dist = frozen_stable(alpha, beta)

    def f(u):
        return _mean_loglik_at(xs, u, dist)

    lo, hi = math.log(scale0) - 2.0, math.log(scale0) + 2.0
    while f(lo) > f(lo + 0.5):
        lo -= 2.0
    while f(hi) > f(hi - 0.5):
        hi += 2.0
    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    # interval on log(sigma) maps to relative tolerance on sigma
    while hi - lo > rel_tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_GOLDEN * (hi - lo)
            fd = f(d)
    u = 0.5 * (lo + hi)
    return math.exp(u), f(u)


@dataclass(frozen=True)
class GarchParams:
    """``v_t = omega + a * x_{t-1}**2 + b * v_{t-1}``."""

    omega: float
    a: float
    b: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.a < 0 or self.b < 0:
            raise ValueError("a and b must be non-negative")
        if not self.a + self.b < 1.0:
            raise ValueError("a + b must be below 1")


@dataclass(frozen=True)
class GarchFit:
    params: GarchParams
    mean_loglik: float
    n: int
    converged: bool = True

    def to_record(self) -> dict:
        return {
            "model": "garch11",
            "params": {"omega": self.params.omega, "a": self.params.a, "b": self.params.b},
            "mean_loglik": self.mean_loglik,
            "n": self.n,
            "converged": self.converged,
        }


def garch11_variances(xs, params: GarchParams, prefix: int = 300) -> np.ndarray:
    """Conditional variances ``v_0 .. v_{n-1}`` with ``v_0`` the variance of the first ``prefix`` values."""
    xs = np.asarray(xs, dtype=float)
    v0 = float(np.var(xs[:prefix]))
    if not v0 > 0:
        v0 = params.omega / (1.0 - params.a - params.b)
    u = params.omega + params.a * xs[:-1] ** 2
    rest = signal.lfilter([1.0], [1.0, -params.b], u, zi=[params.b * v0])[0]
    return np.concatenate(([v0], rest))


def garch11_loglik(xs, params: GarchParams, prefix: int = 300) -> float:
    """Gaussian one-step-ahead mean log-likelihood over the points after ``prefix``."""
    xs = np.asarray(xs, dtype=float)
    if xs.size <= prefix:
        raise ValueError(f"need more than {prefix} values")
    v = garch11_variances(xs, params, prefix)[prefix:]
    x = xs[prefix:]
    return float(np.mean(-0.5 * (np.log(2.0 * math.pi * v) + x * x / v)))


def _unpack(u):
    omega = math.exp(u[0])
    s = special.expit(u[1])
    f = special.expit(u[2])
    return GarchParams(omega, float(s * f), float(s * (1.0 - f)))


def garch11_fit(xs, prefix: int = 300, max_iter: int = 4000) -> GarchFit:
    """Nelder-Mead on transformed parameters (log omega, logit(a+b), logit share of a)."""
    xs = np.asarray(xs, dtype=float)
    if xs.size < 1000:
        raise ValueError("garch11_fit needs at least 1000 observations")
    var = float(np.var(xs))
    u0 = np.array([math.log(0.1 * var), special.logit(0.95), special.logit(0.05 / 0.95)])

    def neg(u):
        try:
            return -garch11_loglik(xs, _unpack(u), prefix)
        except ValueError:
            return np.inf

    res = optimize.minimize(
        neg, u0, method="Nelder-Mead", options={"maxiter": max_iter, "xatol": 1e-7, "fatol": 1e-10}
    )
    u_best = res.x if res.fun <= neg(u0) else u0
    if not res.success:
        warnings.warn(f"GARCH(1,1) fit did not converge: {res.message}", RuntimeWarning, stacklevel=2)
    params = _unpack(u_best)
    return GarchFit(params, garch11_loglik(xs, params, prefix), int(xs.size), bool(res.success))


def simulate_garch11(params: GarchParams, n: int, seed=None, burn: int = 1000) -> np.ndarray:
    """Gaussian GARCH(1,1) path of length ``n`` after discarding ``burn`` values."""
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n + burn)
    x = np.empty(n + burn)
    v = params.omega / (1.0 - params.a - params.b)
    for t in range(n + burn):
        x[t] = math.sqrt(v) * e[t]
        v = params.omega + params.a * x[t] ** 2 + params.b * v
    return x[burn:]

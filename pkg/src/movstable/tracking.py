"""Moving estimator: EMA updates of the center and absolute central moments.

Every tick derives ``(mu_t, sigma_t, alpha_t)`` from the current moment state,
scores ``x_t`` under that one-step-ahead parameter set and only then folds
``x_t`` into the state.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence, Union

import numpy as np
from scipy import signal, special

from .exceptions import NonFiniteInputError, StableDomainError
from .static import AlphaTable, MomentPowers, default_alpha_table
from .stable import StableParams, frozen_stable, logpdf_batch, moment_constant, stable_logpdf_full

__all__ = [
    "LearningRates",
    "TrackerConfig",
    "MomentState",
    "ParamTrack",
    "warmup",
    "step",
    "track",
    "sweep_fixed_alpha",
    "constant_track",
]

DEFAULT_RATES = (0.002, 0.03, 0.006)


@dataclass(frozen=True)
class LearningRates:
    eta1: float = DEFAULT_RATES[0]
    eta2: float = DEFAULT_RATES[1]
    eta3: float = DEFAULT_RATES[2]

    def __post_init__(self):
        for name in ("eta1", "eta2", "eta3"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class TrackerConfig:
    """Flat tracker configuration; field names are the JSON keys.

    ``alpha_mode`` is ``"adaptive"`` or a number fixing the stability.
    """

    eta1: float = DEFAULT_RATES[0]
    eta2: float = DEFAULT_RATES[1]
    eta3: float = DEFAULT_RATES[2]
    p_sigma: float = 0.35
    p1: float = 0.5
    p2: float = 0.2
    beta: float = 0.0
    sigma_multiplier: float = 1.05
    warmup: int = 300
    alpha_min: float = 1.05
    alpha_max: float = 2.0
    alpha_step: float = 0.005
    alpha_mode: Union[str, float] = "adaptive"
    sigma_floor: float = 1e-12

    def __post_init__(self):
        LearningRates(self.eta1, self.eta2, self.eta3)
        MomentPowers(self.p_sigma, self.p1, self.p2)
        if not -1.0 <= self.beta <= 1.0:
            raise StableDomainError("beta must lie in [-1, 1]")
        if not self.sigma_multiplier > 0:
            raise ValueError("sigma_multiplier must be positive")
        if int(self.warmup) != self.warmup or self.warmup < 2:
            raise ValueError("warmup must be an integer >= 2")
        if not self.sigma_floor > 0:
            raise ValueError("sigma_floor must be positive")
        if max(self.p1, self.p2) >= self.alpha_min:
            raise StableDomainError("ratio powers must stay below alpha_min")
        if self.alpha_mode != "adaptive":
            a = float(self.alpha_mode)
            if not 0.5 <= a <= 2.0:
                raise StableDomainError(f"fixed alpha must lie in [0.5, 2], got {a}")
            if self.beta != 0.0 and a <= 1.0:
                raise StableDomainError("nonzero beta requires alpha in (1, 2]")

    @property
    def rates(self) -> LearningRates:
        return LearningRates(self.eta1, self.eta2, self.eta3)

    @property
    def powers(self) -> MomentPowers:
        return MomentPowers(self.p_sigma, self.p1, self.p2)

    @property
    def alpha_table(self) -> AlphaTable:
        return default_alpha_table(self.p1, self.p2, self.alpha_min, self.alpha_max, self.alpha_step)

    @property
    def fixed_alpha(self) -> Optional[float]:
        return None if self.alpha_mode == "adaptive" else float(self.alpha_mode)

    def replace(self, **changes) -> "TrackerConfig":
        d = asdict(self)
        d.update(changes)
        return TrackerConfig(**d)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TrackerConfig":
        d = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class MomentState:
    """EMA state before the next observation: center and three absolute moments."""

    mu: float
    m_sigma: float
    m1: float
    m2: float
    t: int = 0


@dataclass
class ParamTrack:
    """Per-tick one-step-ahead parameters and log-densities.

    Arrays cover the ticks after warmup; ``start`` is the index of the first
    of them in the original series. ``m_sigma``, ``m1`` and ``m2`` hold the
    moment state each tick was scored with.
    """

    x: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray
    alpha: np.ndarray
    beta: float
    logpdf: np.ndarray
    start: int = 0
    m_sigma: Optional[np.ndarray] = None
    m1: Optional[np.ndarray] = None
    m2: Optional[np.ndarray] = None
    final_state: Optional[MomentState] = field(default=None, repr=False)

    def __len__(self):
        return len(self.x)

    @property
    def mean_loglik(self) -> float:
        return float(np.mean(self.logpdf))

    @property
    def thetas(self) -> list[StableParams]:
        return [
            StableParams(float(m), float(s), float(a), self.beta if a > 1.0 else 0.0)
            for m, s, a in zip(self.mu, self.sigma, self.alpha)
        ]

    def standardized(self, xs=None) -> np.ndarray:
        """``(x_t - mu_t) / sigma_t``."""
        xs = self.x if xs is None else self.aligned(xs)
        return (xs - self.mu) / self.sigma

    def aligned(self, xs) -> np.ndarray:
        """Accept either the post-warmup slice or the full series."""
        xs = np.asarray(xs, dtype=float)
        if xs.size == len(self):
            return xs
        if xs.size == self.start + len(self):
            return xs[self.start :]
        raise ValueError(f"series of length {xs.size} does not align with a track of length {len(self)}")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x", "mu", "sigma", "alpha", "beta", "logpdf"])
            b = f"{self.beta:.17g}"
            for i in range(len(self)):
                w.writerow(
                    [
                        self.start + i,
                        f"{self.x[i]:.17g}",
                        f"{self.mu[i]:.17g}",
                        f"{self.sigma[i]:.17g}",
                        f"{self.alpha[i]:.17g}",
                        b,
                        f"{self.logpdf[i]:.17g}",
                    ]
                )


# ---------------------------------------------------------------------------


def _moment_constant_vec(alpha: np.ndarray, p: float) -> np.ndarray:
    """Vectorized counterpart of :func:`moment_constant` (alpha < 2 rows use gammaln)."""
    alpha = np.asarray(alpha, dtype=float)
    base = (1.0 + p) * math.log(2.0) + special.gammaln(0.5 * (1.0 + p)) - 0.5 * math.log(math.pi)
    gauss = alpha == 2.0
    a = np.where(gauss, 1.0, alpha)
    # Gamma(-p/a) and Gamma(-p/2) share their sign for -1 < p < a
    log_m = base + special.gammaln(-p / a) - special.gammaln(-0.5 * p) - np.log(a)
    log_m = np.where(gauss, base - math.log(2.0), log_m)
    return np.exp(log_m / p)


def _effective_alpha(alpha, p_sigma):
    # keep p_sigma < alpha for the scale conversion
    floor = min(2.0, p_sigma + 0.01)
    return np.where(alpha <= p_sigma + 0.01, floor, alpha)


def _derive(m_sigma, m1, m2, config: TrackerConfig, n=None):
    """Map moment values (scalars or arrays) to ``(alpha, sigma)``."""
    m_sigma = np.asarray(m_sigma, dtype=float)
    if config.fixed_alpha is not None:
        alpha = np.full(m_sigma.shape, config.fixed_alpha)
    else:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = np.asarray(m1, dtype=float) ** (1.0 / config.p1) / np.asarray(m2, dtype=float) ** (1.0 / config.p2)
        alpha = config.alpha_table.lookup(ratio)
        alpha = np.where(np.isfinite(ratio), alpha, config.alpha_max)
    a_eff = _effective_alpha(alpha, config.p_sigma)
    raw = m_sigma ** (1.0 / config.p_sigma) / _moment_constant_vec(a_eff, config.p_sigma)
    sigma = np.maximum(config.sigma_multiplier * raw, config.sigma_floor)
    return alpha, sigma


def _residual_power(r, p, floor):
    # negative powers would blow up at exactly zero residuals
    if p < 0:
        r = np.maximum(r, floor)
    return r**p


def warmup(prefix: Sequence[float], config: TrackerConfig) -> MomentState:
    """Initial state from a plain (unweighted) pass over the first ``config.warmup`` values."""
    prefix = np.asarray(prefix, dtype=float)
    if prefix.size != config.warmup:
        raise ValueError(f"warmup needs exactly {config.warmup} values, got {prefix.size}")
    bad = np.flatnonzero(~np.isfinite(prefix))
    if bad.size:
        raise NonFiniteInputError(f"non-finite value at index {bad[0]}", int(bad[0]))
    mu = float(np.mean(prefix))
    r = np.abs(prefix - mu)
    if not np.any(r > 0):
        f = config.sigma_floor
        return MomentState(mu, f**config.p_sigma, f**config.p1, f**config.p2, int(prefix.size))
    return MomentState(
        mu,
        float(np.mean(_residual_power(r, config.p_sigma, config.sigma_floor))),
        float(np.mean(r**config.p1)),
        float(np.mean(r**config.p2)),
        int(prefix.size),
    )


def step(state: MomentState, x: float, config: TrackerConfig) -> tuple[MomentState, StableParams, float]:
    """One tick: derive theta from ``state``, score ``x``, then update the state.

    Returns the new state, the parameters ``x`` was scored with and its
    log-density. Non-finite ``x`` raises and leaves ``state`` untouched.
    """
    if not math.isfinite(x):
        raise NonFiniteInputError(f"non-finite value at index {state.t}", state.t)
    alpha, sigma = _derive(state.m_sigma, state.m1, state.m2, config)
    alpha, sigma = float(alpha), float(sigma)
    theta = StableParams(state.mu, sigma, alpha, config.beta if alpha > 1.0 else 0.0)
    lp = float(stable_logpdf_full(x, theta))
    r = abs(x - state.mu)
    new = MomentState(
        mu=state.mu + config.eta1 * (x - state.mu),
        m_sigma=state.m_sigma + config.eta2 * (float(_residual_power(r, config.p_sigma, config.sigma_floor)) - state.m_sigma),
        m1=state.m1 + config.eta3 * (r**config.p1 - state.m1),
        m2=state.m2 + config.eta3 * (r**config.p2 - state.m2),
        t=state.t + 1,
    )
    return new, theta, lp


def _ema_path(values, eta, initial):
    """State before each value of ``m <- m + eta * (v - m)``, plus the final state."""
    b = [eta]
    a = [1.0, -(1.0 - eta)]
    after = signal.lfilter(b, a, values, zi=[(1.0 - eta) * initial])[0]
    before = np.concatenate(([initial], after[:-1]))
    return before, float(after[-1])


def track(
    xs: Sequence[float],
    config: TrackerConfig = TrackerConfig(),
    fixed_mu: Optional[float] = None,
    fixed_sigma: Optional[float] = None,
) -> ParamTrack:
    """Run the moving estimator over a series.

    Warmup consumes the first ``config.warmup`` values; the returned track
    covers the rest. ``fixed_mu`` pins the center (sweeps use 0) and
    ``fixed_sigma`` pins the scale while the other parameters keep adapting.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size <= config.warmup:
        raise ValueError(f"need more than {config.warmup} values, got {xs.size}")
    bad = np.flatnonzero(~np.isfinite(xs))
    if bad.size:
        raise NonFiniteInputError(f"non-finite value at index {bad[0]}", int(bad[0]))
    s0 = warmup(xs[: config.warmup], config)
    if fixed_mu is not None:
        r0 = np.abs(xs[: config.warmup] - fixed_mu)
        s0 = MomentState(
            float(fixed_mu),
            float(np.mean(_residual_power(r0, config.p_sigma, config.sigma_floor))) if np.any(r0 > 0) else s0.m_sigma,
            float(np.mean(r0**config.p1)) if np.any(r0 > 0) else s0.m1,
            float(np.mean(r0**config.p2)) if np.any(r0 > 0) else s0.m2,
            s0.t,
        )
    x = xs[config.warmup :]
    if fixed_mu is None:
        mu, mu_end = _ema_path(x, config.eta1, s0.mu)
    else:
        mu, mu_end = np.full(x.size, float(fixed_mu)), float(fixed_mu)
    r = np.abs(x - mu)
    m_sigma, ms_end = _ema_path(_residual_power(r, config.p_sigma, config.sigma_floor), config.eta2, s0.m_sigma)
    m1, m1_end = _ema_path(r**config.p1, config.eta3, s0.m1)
    m2, m2_end = _ema_path(r**config.p2, config.eta3, s0.m2)
    alpha, sigma = _derive(m_sigma, m1, m2, config)
    if fixed_sigma is not None:
        sigma = np.full(x.size, float(fixed_sigma))
    lp = _score(x, mu, sigma, alpha, config)
    final = MomentState(mu_end, ms_end, m1_end, m2_end, int(xs.size))
    return ParamTrack(x, mu, sigma, alpha, config.beta, lp, config.warmup, m_sigma, m1, m2, final)


def _score(x, mu, sigma, alpha, config):
    beta = config.beta
    if config.fixed_alpha is not None:
        a = config.fixed_alpha
        f = frozen_stable(a, beta if a > 1.0 else 0.0)
        return f.logpdf((x - mu) / sigma) - np.log(sigma)
    return logpdf_batch(x, mu, sigma, alpha, beta)


def sweep_fixed_alpha(
    xs: Sequence[float],
    alphas: Sequence[float],
    config_base: TrackerConfig = TrackerConfig(),
    adaptive_sigma: bool = True,
) -> list[tuple[float, float]]:
    """Mean log-likelihood per fixed stability, centered at zero.

    With ``adaptive_sigma`` the scale follows the EMA tracker; otherwise each
    point uses the static maximum-likelihood scale (see
    :func:`movstable.baselines.fit_static_sigma_mle`).
    """
    out = []
    for a in alphas:
        if adaptive_sigma:
            tr = track(xs, config_base.replace(alpha_mode=float(a)), fixed_mu=0.0)
            out.append((float(a), tr.mean_loglik))
        else:
            from .baselines import fit_static_sigma_mle

            beta = config_base.beta if a > 1.0 else 0.0
            _, ll = fit_static_sigma_mle(np.asarray(xs)[config_base.warmup :], float(a), beta)
            out.append((float(a), ll))
    return out


def constant_track(xs: Sequence[float], params: StableParams) -> ParamTrack:
    """A track holding ``params`` fixed at every tick (start index 0)."""
    x = np.asarray(xs, dtype=float)
    n = x.size
    f = frozen_stable(params.alpha, params.beta)
    lp = f.logpdf((x - params.mu) / params.sigma) - math.log(params.sigma)
    return ParamTrack(
        x, np.full(n, params.mu), np.full(n, params.sigma), np.full(n, params.alpha), params.beta, lp, 0
    )

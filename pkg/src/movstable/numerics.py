"""Special functions, quadrature and monotone interpolation shared by the package."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, special

from .exceptions import QuadratureError, StableDomainError, TableConstructionError

__all__ = [
    "QuadratureSpec",
    "ln_gamma",
    "integrate_semi_infinite",
    "MonotoneInterpolator",
    "interp_monotone",
    "composite_gauss_legendre",
    "normal_quantile",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate_semi_infinite`.

    ``truncation`` is the level below which a decay envelope is treated as zero.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_subdivisions: int = 500
    truncation: float = 1e-16

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.truncation > 0:
            raise ValueError("truncation threshold must be positive")


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for positive finite ``x``."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise StableDomainError(f"ln_gamma needs a positive finite argument, got {x!r}")
    return math.lgamma(x)


def _find_cutoff(envelope: Callable[[float], float], threshold: float) -> float:
    upper = 1.0
    while envelope(upper) >= threshold:
        upper *= 2.0
        if upper > 1e12:
            raise QuadratureError("decay envelope never fell below the threshold", np.nan, np.inf)
    return upper


def integrate_semi_infinite(
    f: Callable[[float], float],
    spec: QuadratureSpec = QuadratureSpec(),
    envelope: Optional[Callable[[float], float]] = None,
) -> float:
    """Integrate ``f`` over ``[0, inf)``.

    When ``envelope`` (a bound on ``|f|`` decaying to zero) is supplied the domain
    is cut at the first power of two where it drops below ``spec.truncation`` and
    adaptive Gauss-Kronrod subdivision runs on the finite interval. Otherwise the
    infinite interval is mapped onto ``(0, 1]``.

    Raises
    ------
    QuadratureError
        If the subdivision budget is exhausted; carries the best estimate.
    """
    upper = np.inf if envelope is None else _find_cutoff(envelope, spec.truncation)
    out = integrate.quad(
        f,
        0.0,
        upper,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, err = out[0], out[1]
    if len(out) > 3:
        raise QuadratureError(f"quadrature did not converge: {out[3]}", value, err)
    return value


class MonotoneInterpolator:
    """Inverse lookup on a table whose ``y`` column is strictly monotone.

    Calling the object with a ``y`` value returns the piecewise-linear ``x``;
    queries beyond the table clamp to the boundary ``x``.
    """

    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 2:
            raise TableConstructionError("table needs at least two (x, y) rows")
        dy = np.diff(ys)
        if np.all(dy > 0):
            self._y, self._x = ys, xs
        elif np.all(dy < 0):
            self._y, self._x = ys[::-1].copy(), xs[::-1].copy()
        else:
            raise TableConstructionError("table y column is not strictly monotone")
        self.xs = xs
        self.ys = ys

    def __call__(self, y_query):
        return np.interp(y_query, self._y, self._x)


def interp_monotone(table: Sequence[tuple[float, float]], y_query: float) -> float:
    """One-shot inverse lookup; see :class:`MonotoneInterpolator`."""
    xs, ys = zip(*table)
    return float(MonotoneInterpolator(xs, ys)(y_query))


@lru_cache(maxsize=None)
def _gl_nodes(order: int):
    return np.polynomial.legendre.leggauss(order)


def composite_gauss_legendre(
    upper: float,
    panel_width: float,
    order: int = 20,
    graded_levels: int = 40,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss-Legendre rule on ``[0, upper]``.

    The first panel ``[0, panel_width]`` is split geometrically towards zero
    (ratio 1/2, ``graded_levels`` times) so integrands like ``exp(-t**a)`` whose
    derivatives blow up at the origin keep full accuracy.
    """
    x, w = _gl_nodes(order)
    first = min(panel_width, upper)
    edges = [0.0] + [first * 0.5**k for k in range(graded_levels, 0, -1)] + [first]
    n_rest = int(math.ceil((upper - first) / panel_width)) if upper > first else 0
    if n_rest:
        edges.extend(np.linspace(first, upper, n_rest + 1)[1:].tolist())
    edges = np.asarray(edges)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def normal_quantile(u):
    """Standard normal quantile (inverse CDF)."""
    return special.ndtri(u)

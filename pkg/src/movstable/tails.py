"""Empirical versus model tail exceedance at multiples of the scale."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .static import fit_static
from .stable import frozen_stable
from .tracking import ParamTrack, constant_track

__all__ = ["TailCurve", "exceedance_curve", "count_extreme", "static_track", "model_exceedance"]


@dataclass
class TailCurve:
    ks: np.ndarray
    left_emp: np.ndarray
    right_emp: np.ndarray
    model_curves: dict = field(default_factory=dict)
    n: int = 0

    def to_csv(self, path) -> None:
        """Long format: ``k, side, source, probability``."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "side", "source", "probability"])
            rows = [("empirical", self.left_emp, self.right_emp)]
            rows += [(f"alpha={a:g}", lr[0], lr[1]) for a, lr in self.model_curves.items()]
            for source, left, right in rows:
                for side, vals in (("left", left), ("right", right)):
                    for k, p in zip(self.ks, vals):
                        w.writerow([f"{k:.17g}", side, source, f"{p:.17g}"])


def model_exceedance(ks, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """``(P(Z < -k), P(Z > k))`` for the standardized symmetric law."""
    ks = np.asarray(ks, dtype=float)
    f = frozen_stable(alpha, 0.0)
    return f.cdf(-ks), 1.0 - f.cdf(ks)


def exceedance_curve(xs, track: ParamTrack, ks: Sequence[float], alphas: Sequence[float] = ()) -> TailCurve:
    """Fractions of normalized values beyond ``-k`` and ``+k``, with model curves per alpha."""
    ks = np.asarray(ks, dtype=float)
    if np.any(ks <= 0) or np.any(np.diff(ks) <= 0):
        raise ValueError("ks must be positive and strictly ascending")
    z = track.standardized(xs)
    n = z.size
    zs = np.sort(z)
    left = np.searchsorted(zs, -ks, side="left") / n
    right = (n - np.searchsorted(zs, ks, side="right")) / n
    models = {float(a): model_exceedance(ks, float(a)) for a in alphas}
    return TailCurve(ks, left, right, models, n)


def count_extreme(xs, track: ParamTrack, k: float) -> tuple[int, int]:
    """Number of normalized values below ``-k`` and above ``+k``."""
    if not k > 0:
        raise ValueError("k must be positive")
    z = track.standardized(xs)
    return int(np.sum(z < -k)), int(np.sum(z > k))


def static_track(xs, **fit_kwargs) -> ParamTrack:
    """Whole-sample normalization: one static fit applied to every tick."""
    return constant_track(xs, fit_static(xs, **fit_kwargs))

"""Command-line surface: ``movstable <command> [options]``.

Every command reads one series (``--input``), writes its results into
``--out`` and exits 0. On failure a single JSON line
``{"error": <kind>, "message": <text>}`` goes to stderr and the exit status
is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io
from .baselines import fit_static_sigma_mle, garch11_fit
from .exceptions import SeriesFormatError
from .hurst import adaptive_hurst, gaussianize, jarque_bera, structure_function
from .static import build_alpha_table, fit_static
from .synthetic import alpha_switch, sigma_switch
from .stable import StableParams, sample_stable
from .tails import count_extreme, exceedance_curve, static_track
from .tracking import TrackerConfig, sweep_fixed_alpha, track

__all__ = ["main", "run_command", "parse_grid", "parse_list"]

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_DOMAIN = 4
EXIT_INTERNAL = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must be start:stop:step")
        a, b, s = (float(p) for p in parts)
        if not s > 0 or b < a:
            raise UsageError(f"grid {text!r} needs step > 0 and stop >= start")
        n = int(np.floor((b - a) / s + 1e-9))
        return np.round(a + s * np.arange(n + 1), 12)
    return parse_list(text)


def parse_list(text: str, kind=float) -> np.ndarray:
    try:
        return np.array([kind(t) for t in text.split(",") if t.strip()])
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="series file")
    common.add_argument("--format", choices=io.FORMATS, default="plain")
    common.add_argument("--column", help="column name for csv input")
    common.add_argument("--transform", choices=io.TRANSFORMS, default="none")
    common.add_argument("--config", help="tracker configuration JSON")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="movstable", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("track", parents=[common], help="run the moving estimator")
    s.add_argument("--emit-config", action="store_true", help="also write the effective config.json")

    s = sub.add_parser("sweep", parents=[common], help="mean log-likelihood per fixed alpha")
    s.add_argument("--alphas", default="1.0:2.0:0.05")
    s.add_argument("--sigma", choices=("adaptive", "static"), default="adaptive")

    sub.add_parser("static", parents=[common], help="whole-sample estimates and MLE scale")
    sub.add_parser("garch", parents=[common], help="GARCH(1,1) fit and evaluation")

    s = sub.add_parser("hurst", parents=[common], help="scaling exponents, H_t and gaussianization")
    s.add_argument("--qs", default="0.25,0.5,1.0")
    s.add_argument("--taus", default=None)
    s.add_argument("--q", type=float, default=1.0, help="order for the adaptive H_t markers")
    s.add_argument("--level", action="store_true", help="input is already the process level")
    s.add_argument("--gaussianize", action="store_true")

    s = sub.add_parser("tails", parents=[common], help="exceedance curves and extreme counts")
    s.add_argument("--ks", default="1:10:1")
    s.add_argument("--alphas", default="1.5,1.7,1.9,1.95,2.0")
    s.add_argument("--normalization", choices=("adaptive", "static"), default="adaptive")

    sub.add_parser("table", parents=[common], help="export the alpha lookup table")

    s = sub.add_parser("generate", parents=[common], help="write a synthetic fixture series")
    s.add_argument("--kind", choices=("stable", "alpha-switch", "sigma-switch"), default="stable")
    s.add_argument("--alpha", type=float, default=1.5)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--n", type=int, default=10000)
    s.add_argument("--name", default="fixture.txt")
    return p


def _config(args) -> TrackerConfig:
    if not args.config:
        return TrackerConfig()
    with open(args.config, encoding="utf-8") as fh:
        return TrackerConfig.from_json(fh.read())


def _series(args) -> np.ndarray:
    if not args.input:
        raise UsageError("--input is required")
    return io.load_series(io.SeriesSpec(args.input, args.format, args.column, args.transform))


def _track_rows(tr):
    for i in range(len(tr)):
        yield (tr.start + i, tr.x[i], tr.mu[i], tr.sigma[i], tr.alpha[i], tr.beta, tr.logpdf[i])


def _cmd_track(args, out: Path):
    cfg = _config(args)
    tr = track(_series(args), cfg)
    io.write_csv(out / "track.csv", ["t", "x", "mu", "sigma", "alpha", "beta", "logpdf"], _track_rows(tr))
    io.write_json(
        out / "summary.json",
        {
            "mean_loglik": tr.mean_loglik,
            "n": len(tr),
            "final": {"mu": tr.mu[-1], "sigma": tr.sigma[-1], "alpha": tr.alpha[-1], "beta": tr.beta},
        },
    )
    if args.emit_config:
        io.atomic_write(out / "config.json", cfg.to_json())


def _cmd_sweep(args, out: Path):
    rows = sweep_fixed_alpha(_series(args), parse_grid(args.alphas), _config(args), args.sigma == "adaptive")
    io.write_csv(out / "sweep.csv", ["alpha", "mean_loglik"], rows)


def _cmd_static(args, out: Path):
    xs = _series(args)
    est = fit_static(xs)
    sigma_mle, ll = fit_static_sigma_mle(xs, est.alpha)
    io.write_json(
        out / "static.json",
        {
            "mu": est.mu,
            "sigma": est.sigma,
            "alpha": est.alpha,
            "n": int(xs.size),
            "mle_sigma": {"alpha": est.alpha, "sigma": sigma_mle, "mean_loglik": ll},
        },
    )


def _cmd_garch(args, out: Path):
    fit = garch11_fit(_series(args), prefix=_config(args).warmup)
    io.write_json(out / "garch.json", fit.to_record())


def _cmd_hurst(args, out: Path):
    xs = _series(args)
    level, returns = (xs, np.diff(xs)) if args.level else (np.cumsum(xs), xs)
    taus = None if args.taus is None else parse_list(args.taus, int)
    est = structure_function(level, parse_list(args.qs), taus)
    io.write_csv(out / "scaling.csv", ["q", "zeta", "r2"], zip(est.qs, est.zeta, est.r2))
    io.write_csv(
        out / "structure.csv",
        ["q", "tau", "S"],
        ((q, int(tau), est.structure[i, j]) for i, q in enumerate(est.qs) for j, tau in enumerate(est.taus)),
    )
    tr = track(returns, _config(args))
    h = adaptive_hurst(tr, args.q)
    io.write_csv(out / "hurst_t.csv", ["t", "alpha", "H"], zip(range(tr.start, tr.start + len(tr)), tr.alpha, h))
    if args.gaussianize:
        g = gaussianize(returns, tr)
        io.write_csv(out / "gaussianized.csv", ["t", "g"], zip(range(tr.start, tr.start + len(tr)), g))
        io.write_json(out / "normality.json", {"jarque_bera": jarque_bera(g), "n": int(g.size)})


def _cmd_tails(args, out: Path):
    xs = _series(args)
    tr = track(xs, _config(args)) if args.normalization == "adaptive" else static_track(xs)
    ks = parse_grid(args.ks)
    curve = exceedance_curve(xs, tr, ks, parse_grid(args.alphas))
    rows = [(k, "left", "empirical", p) for k, p in zip(ks, curve.left_emp)]
    rows += [(k, "right", "empirical", p) for k, p in zip(ks, curve.right_emp)]
    for a, (left, right) in curve.model_curves.items():
        rows += [(k, "left", f"alpha={a:g}", p) for k, p in zip(ks, left)]
        rows += [(k, "right", f"alpha={a:g}", p) for k, p in zip(ks, right)]
    io.write_csv(out / "tails.csv", ["k", "side", "source", "probability"], rows)
    counts = [count_extreme(xs, tr, float(k)) for k in ks]
    io.write_csv(out / "extremes.csv", ["k", "left", "right"], ((k, l, r) for k, (l, r) in zip(ks, counts)))


def _cmd_table(args, out: Path):
    c = _config(args)
    t = build_alpha_table(c.p1, c.p2, c.alpha_min, c.alpha_max, c.alpha_step)
    io.write_csv(out / "alpha_table.csv", ["alpha", "ratio"], t.rows())


def _cmd_generate(args, out: Path):
    if args.kind == "stable":
        xs = sample_stable(StableParams(0.0, args.sigma, args.alpha, 0.0), args.n, args.seed)
    elif args.kind == "alpha-switch":
        xs = alpha_switch(args.seed, n_each=args.n // 2, sigma=args.sigma)
    else:
        xs = sigma_switch(args.seed, alpha=args.alpha, n_each=args.n // 4)
    io.write_plain(out / args.name, xs)


_COMMANDS = {
    "track": _cmd_track,
    "sweep": _cmd_sweep,
    "static": _cmd_static,
    "garch": _cmd_garch,
    "hurst": _cmd_hurst,
    "tails": _cmd_tails,
    "table": _cmd_table,
    "generate": _cmd_generate,
}


def _fail(kind: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": " ".join(str(message).split())}) + "\n")
    return status


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one command and return the exit status."""
    try:
        args = _build_parser().parse_args(argv)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](args, out)
    except UsageError as e:
        return _fail("usage", e, EXIT_USAGE)
    except SeriesFormatError as e:
        return _fail("input", e, EXIT_INPUT)
    except OSError as e:
        return _fail("io", e, EXIT_INPUT)
    except (ValueError, ArithmeticError) as e:
        return _fail(type(e).__name__, e, EXIT_DOMAIN)
    except Exception as e:  # noqa: BLE001 - report anything as one line
        return _fail("internal", f"{type(e).__name__}: {e}", EXIT_INTERNAL)
    return 0


def main() -> None:
    sys.exit(run_command())

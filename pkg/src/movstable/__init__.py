"""Moving estimation of alpha-stable parameters for heavy-tailed time series."""

from .exceptions import (
    DegenerateSampleError,
    NonFiniteInputError,
    QuadratureError,
    SeriesFormatError,
    StableDomainError,
    TableConstructionError,
)
from .stable import (
    FrozenStable,
    GluedAsymmetry,
    StableParams,
    cdf_batch,
    frozen_stable,
    glued_pdf,
    logpdf_batch,
    moment_constant,
    rho0,
    sample_stable,
    stable_cdf,
    stable_logpdf,
    stable_logpdf_full,
    stable_pdf,
)
from .static import AlphaTable, MomentPowers, build_alpha_table, estimate_alpha, estimate_mu, estimate_sigma, fit_static
from .tracking import LearningRates, MomentState, ParamTrack, TrackerConfig, constant_track, step, sweep_fixed_alpha, track, warmup
from .baselines import GarchFit, GarchParams, fit_static_sigma_mle, garch11_fit, garch11_loglik, simulate_garch11
from .hurst import ScalingEstimate, adaptive_hurst, gaussianize, jarque_bera, structure_function
from .tails import TailCurve, count_extreme, exceedance_curve, static_track
from .io import SeriesSpec, load_series

__version__ = "0.1.0"

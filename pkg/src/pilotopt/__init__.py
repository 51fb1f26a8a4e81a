"""Pilot-overhead optimization for short-packet links over Rayleigh fading.

The library computes the pilot fraction that maximizes the finite-blocklength
achievable rate of a pilot-assisted packet, compares it with the classical
ergodic-capacity optimization, and reproduces the associated parameter
sweeps.  See the README for the CLI and the module docstrings for the math.
"""

from .channel import (
    ChannelMoments,
    QuadratureInconsistency,
    capacity_variance,
    channel_moments,
    dispersion,
    ergodic_capacity,
    mean_inverse_snr,
    quadrature_capacity,
    quadrature_mean_inverse,
)
from .estimation import (
    BLOCK,
    EstimationErrorBreakdown,
    FadingModel,
    doppler_error,
    effective_snr,
    mmse_error,
    mmse_error_block,
)
from .montecarlo import (
    McEstimate,
    jakes_doppler_ratio,
    mc_capacity_moments,
    simulate_mmse_mse,
)
from .optimizer import (
    OptimizationResult,
    grid_search_alpha,
    optimize_alpha,
    rate_gain,
)
from .rate import (
    LinkConfig,
    RateValue,
    ergodic_training_rate,
    perfect_csi_rate,
    training_rate,
    training_rate_curve,
)
from .specfun import (
    QuadratureRule,
    exp_integral_e1,
    exp_scaled_e1,
    gauss_laguerre,
    q_function,
    q_inverse,
)
from .sweep import (
    SweepRow,
    SweepSpec,
    built_in_figures,
    figure_preset,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BLOCK",
    "ChannelMoments",
    "EstimationErrorBreakdown",
    "FadingModel",
    "LinkConfig",
    "McEstimate",
    "OptimizationResult",
    "QuadratureInconsistency",
    "QuadratureRule",
    "RateValue",
    "SweepRow",
    "SweepSpec",
    "built_in_figures",
    "capacity_variance",
    "channel_moments",
    "dispersion",
    "doppler_error",
    "effective_snr",
    "ergodic_capacity",
    "ergodic_training_rate",
    "exp_integral_e1",
    "exp_scaled_e1",
    "figure_preset",
    "gauss_laguerre",
    "grid_search_alpha",
    "jakes_doppler_ratio",
    "mc_capacity_moments",
    "mean_inverse_snr",
    "mmse_error",
    "mmse_error_block",
    "optimize_alpha",
    "perfect_csi_rate",
    "q_function",
    "q_inverse",
    "quadrature_capacity",
    "quadrature_mean_inverse",
    "rate_gain",
    "run_sweep",
    "simulate_mmse_mse",
    "training_rate",
    "training_rate_curve",
]

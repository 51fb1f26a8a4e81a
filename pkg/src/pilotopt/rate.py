"""Achievable-rate objectives for pilot-assisted short-packet transmission.

Three rates, all in bits per channel use:

* `perfect_csi_rate`: the normal approximation at perfect receiver CSI,
      R(n, eps, rho) ~ C(rho) - sqrt(V(rho)/n) * Qinv(eps).

* `training_rate`: the pilot-aware finite-blocklength rate.  A fraction
  alpha of the packet is spent on pilots, the estimation error shrinks the
  SNR to rho_eff, and only (1-alpha) of the symbols carry data:
      R_tr(alpha) ~ (1-alpha) * C(rho_eff)
                    - Qinv(eps) * sqrt((1-alpha) * V(rho_eff) / n).
  The (1-alpha) factor deliberately appears both on the capacity term and
  inside the square root (printed-formula convention).

* `ergodic_training_rate`: the infinite-blocklength baseline
  (1-alpha) * C(rho_eff) with the same n-dependent estimation error, i.e.
  the training rate with the dispersion penalty deleted.

Negative normal-approximation values are floored at zero and flagged, as is
the rho_eff = 0 clamp; a zero rate with `clamped=True` marks an infeasible
operating point rather than an error.  V(rho_eff) reuses the perfect-CSI
dispersion evaluated at the effective SNR; no imperfect-CSI correction is
attempted.

`training_rate_curve` is the vectorized evaluator over an alpha grid; the
scalar operations wrap it, so grid searches and scalar calls share one code
path bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _moments
from .channel import LOG2E, _dispersion_flat
from .estimation import FadingModel, effective_snr, mmse_error
from .specfun import q_inverse

__all__ = [
    "LinkConfig",
    "RateValue",
    "ergodic_training_rate",
    "perfect_csi_rate",
    "training_rate",
    "training_rate_curve",
]


@dataclass(frozen=True)
class LinkConfig:
    """One evaluation point: blocklength, SNR, error target and fading model."""

    n: int
    snr: float
    epsilon: float
    model: FadingModel

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise ValueError("n must be an integer >= 2 (room for pilot and data)")
        object.__setattr__(self, "n", int(self.n))
        if not (math.isfinite(self.snr) and self.snr > 0.0):
            raise ValueError("snr must be positive and finite (linear scale)")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if not isinstance(self.model, FadingModel):
            raise ValueError("model must be a FadingModel")

    @property
    def alpha_min(self) -> float:
        return 1.0 / self.n

    @property
    def alpha_max(self) -> float:
        return 1.0 - 1.0 / self.n


@dataclass(frozen=True)
class RateValue:
    """A rate in bits/use; `clamped` marks a floored approximation or a
    zero effective SNR."""

    bits_per_use: float
    clamped: bool


def perfect_csi_rate(n: int, epsilon: float, snr: float) -> RateValue:
    """Normal approximation max(0, C - sqrt(V/n) * Qinv(eps)) at perfect CSI."""
    cfg = LinkConfig(n=n, snr=snr, epsilon=epsilon, model=FadingModel.block())
    flat = np.array([cfg.snr])
    cap = LOG2E * _moments.scaled_e1(1.0 / flat)[0]
    disp = _dispersion_flat(flat)[0]
    raw = cap - math.sqrt(disp / cfg.n) * q_inverse(cfg.epsilon)
    if raw < 0.0:
        return RateValue(bits_per_use=0.0, clamped=True)
    return RateValue(bits_per_use=raw, clamped=False)


def _alpha_grid_checked(alpha, cfg: LinkConfig) -> np.ndarray:
    arr = np.asarray(alpha, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("alpha must be finite")
    # Tiny slack absorbs roundoff in externally built grids of 1/n, 1 - 1/n.
    slack = 4.0 * np.finfo(float).eps
    if np.any(arr < cfg.alpha_min - slack) or np.any(arr > cfg.alpha_max + slack):
        raise ValueError(
            f"alpha must lie in [1/n, 1 - 1/n] = [{cfg.alpha_min!r}, {cfg.alpha_max!r}]"
        )
    return np.clip(arr, cfg.alpha_min, cfg.alpha_max)


def training_rate_curve(alpha, cfg: LinkConfig, *, penalty: bool = True):
    """Vectorized training rate over an alpha grid.

    Returns (rates, clamped) as float/bool arrays matching `alpha`'s shape
    (floats for scalar input).  With penalty=False this is the ergodic
    baseline (1-alpha) * C(rho_eff).
    """
    arr = _alpha_grid_checked(alpha, cfg)
    flat = np.atleast_1d(arr).ravel()

    err = mmse_error(flat, cfg.n, cfg.snr, cfg.model).total
    rho_eff = effective_snr(cfg.snr, err)
    live = rho_eff > 0.0

    cap = np.zeros_like(flat)
    if np.any(live):
        cap[live] = LOG2E * _moments.scaled_e1(1.0 / rho_eff[live])
    raw = (1.0 - flat) * cap
    if penalty:
        disp = np.zeros_like(flat)
        if np.any(live):
            disp[live] = _dispersion_flat(rho_eff[live])
        raw = raw - q_inverse(cfg.epsilon) * np.sqrt((1.0 - flat) * disp / cfg.n)

    clamped = ~live | (raw < 0.0)
    rates = np.maximum(raw, 0.0)
    if arr.ndim == 0:
        return float(rates[0]), bool(clamped[0])
    return rates.reshape(arr.shape), clamped.reshape(arr.shape)


def training_rate(alpha: float, cfg: LinkConfig) -> RateValue:
    """Pilot-aware finite-blocklength rate at pilot fraction alpha."""
    bits, clamped = training_rate_curve(float(alpha), cfg, penalty=True)
    return RateValue(bits_per_use=bits, clamped=clamped)


def ergodic_training_rate(alpha: float, cfg: LinkConfig) -> RateValue:
    """Infinite-blocklength baseline (1-alpha) * C(rho_eff); the estimation
    error keeps its n dependence."""
    bits, clamped = training_rate_curve(float(alpha), cfg, penalty=False)
    return RateValue(bits_per_use=bits, clamped=clamped)

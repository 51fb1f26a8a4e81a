"""MMSE channel-estimation error models and the effective-SNR transform.

A packet of n symbols spends a fraction alpha on known pilots (alpha*n
symbols, at least one pilot and at least one data symbol).  With unit-power
pilots the MMSE estimate of a unit-variance block-fading gain has error
variance

    sigma2_block = 1 / (1 + alpha*n*rho).

Under continuous fading the channel drifts away from the estimate during the
data phase; the drift contribution for normalized per-symbol Doppler f_D is

    sigma2_doppler = 2 * (pi*alpha*n*rho*f_D / (1 + alpha*n*rho))^2
                       * (n - alpha*n/2)^2

and the total error is the sum of the two terms.  Note that this drift model
is a small-phase approximation: for f_D * n large it can exceed 1 (the full
channel power), at which point the effective SNR below clamps to zero and
downstream rates are zero with a diagnostic flag.

Treating the residual estimation error as extra Gaussian noise, a link at SNR
rho with estimation error sigma2 behaves like a perfect-CSI link at

    rho_eff = rho * (1 - sigma2) / (1 + rho * sigma2)      (0 when sigma2 >= 1).

All functions broadcast over `alpha` (and return plain floats for scalar
inputs), which the optimizer's vectorized grid path relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BLOCK",
    "EstimationErrorBreakdown",
    "FadingModel",
    "doppler_error",
    "effective_snr",
    "mmse_error",
    "mmse_error_block",
]


@dataclass(frozen=True)
class FadingModel:
    """Block fading, or continuous fading with normalized Doppler f_D.

    Block fading carries no Doppler parameter; continuous fading requires
    0 <= doppler < 0.5 (per-symbol normalized frequency below Nyquist).
    """

    kind: str
    doppler: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "block":
            if self.doppler is not None:
                raise ValueError("block fading carries no doppler field")
        elif self.kind == "continuous":
            d = self.doppler
            if d is None or not math.isfinite(d) or not (0.0 <= d < 0.5):
                raise ValueError("continuous fading requires 0 <= doppler < 0.5")
            object.__setattr__(self, "doppler", float(d))
        else:
            raise ValueError(f"unknown fading kind {self.kind!r}")

    @classmethod
    def block(cls) -> "FadingModel":
        return cls(kind="block")

    @classmethod
    def continuous(cls, doppler: float) -> "FadingModel":
        return cls(kind="continuous", doppler=doppler)


BLOCK = FadingModel.block()


@dataclass(frozen=True)
class EstimationErrorBreakdown:
    """sigma2 of the channel estimate split into noise and Doppler parts.

    `total` is exactly `noise_term + doppler_term`; the Doppler part is zero
    for block fading.
    """

    noise_term: object
    doppler_term: object
    total: object


def _validate_alpha(alpha, n: int) -> np.ndarray:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("n must be a positive integer")
    arr = np.asarray(alpha, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("alpha must be finite")
    if np.any(arr < 1.0 / n) or np.any(arr >= 1.0):
        raise ValueError(f"alpha must satisfy 1/n = {1.0 / n!r} <= alpha < 1")
    return arr


def _validate_snr(snr: float) -> float:
    snr = float(snr)
    if not math.isfinite(snr) or snr <= 0.0:
        raise ValueError("snr must be positive and finite (linear scale)")
    return snr


def _maybe_float(template: np.ndarray, out: np.ndarray):
    if template.ndim == 0:
        return float(out[()] if out.ndim == 0 else out)
    return out


def mmse_error_block(alpha, n: int, snr: float):
    """Block-fading MMSE error variance 1 / (1 + alpha*n*rho).

    Strictly decreasing in each of alpha, n and snr; lies in (0, 1].
    """
    arr = _validate_alpha(alpha, n)
    rho = _validate_snr(snr)
    out = 1.0 / (1.0 + arr * n * rho)
    return _maybe_float(arr, out)


def doppler_error(alpha, n: int, snr: float, f_d: float):
    """Doppler-drift term of the continuous-fading estimation error.

    Zero iff f_d = 0 and quadratic in f_d.  Not monotone in alpha: the
    (alpha*n*rho / (1 + alpha*n*rho))^2 factor grows with alpha while the
    (n - alpha*n/2)^2 lag factor shrinks.
    """
    arr = _validate_alpha(alpha, n)
    rho = _validate_snr(snr)
    f_d = float(f_d)
    if not math.isfinite(f_d) or f_d < 0.0:
        raise ValueError("f_d must be >= 0")
    ratio = math.pi * f_d * (arr * n * rho) / (1.0 + arr * n * rho)
    lag = n - arr * n / 2.0
    out = 2.0 * np.square(ratio) * np.square(lag)
    return _maybe_float(arr, out)


def mmse_error(alpha, n: int, snr: float, model: FadingModel) -> EstimationErrorBreakdown:
    """Estimation-error breakdown for either fading model.

    Continuous fading with f_d = 0 reproduces the block result bit-for-bit.
    """
    noise = mmse_error_block(alpha, n, snr)
    if model.kind == "block":
        dop = np.zeros_like(np.asarray(noise, dtype=float))
        dop = _maybe_float(np.asarray(alpha, dtype=float), dop)
    else:
        dop = doppler_error(alpha, n, snr, model.doppler)
    return EstimationErrorBreakdown(noise_term=noise, doppler_term=dop, total=noise + dop)


def effective_snr(snr: float, est_error):
    """Post-estimation SNR rho*(1 - sigma2)/(1 + rho*sigma2), clamped at 0.

    Equals snr exactly when the estimation error vanishes, 0 exactly when
    sigma2 = 1, and is clamped to 0 for sigma2 > 1 (the drift approximation
    exceeding the channel power); callers flag clamping downstream.
    """
    rho = _validate_snr(snr)
    err = np.asarray(est_error, dtype=float)
    if not np.all(np.isfinite(err)) or np.any(err < 0.0):
        raise ValueError("est_error must be finite and >= 0")
    out = np.where(err <= 1.0, rho * (1.0 - err) / (1.0 + rho * err), 0.0)
    return _maybe_float(err, out)

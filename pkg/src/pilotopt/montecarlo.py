"""Simulation oracles: sampled MMSE estimation error and channel moments.

Reproducibility contract
------------------------
All randomness comes from counter-based Philox streams keyed on the user
seed.  Trials are laid out in fixed blocks of 2^16; trial t consumes a fixed
number of uniforms at a fixed offset, and block b's generator is obtained by
advancing a fresh Philox(key=seed) past all uniforms of earlier blocks (one
`advance` step covers four 64-bit draws, and every block's uniform count is a
multiple of four).  Block partial sums are combined in block order, so the
result for a given (seed, trials) is bit-identical no matter how blocks are
scheduled, and estimates from disjoint trial ranges merge associatively.

Gaussians are produced by Box-Muller from uniform pairs (fixed consumption
per trial; numpy's ziggurat sampler consumes a variable number of draws and
would break the counter arithmetic).

The MMSE validation draws a block-fading gain h ~ CN(0,1), sends alpha*n
all-ones pilots through y = sqrt(rho)*h + w with w ~ CN(0,1) per symbol, and
forms the estimator

    hhat = (alpha*n*rho * h + sqrt(rho) * sum(w)) / (1 + alpha*n*rho),

whose mean-square error has expectation 1/(1 + alpha*n*rho).

`jakes_doppler_ratio` is an optional experiment (not an acceptance gate): it
simulates a sum-of-sinusoids Jakes channel that drifts inside the packet,
re-runs the same pilot estimator, and reports the measured excess error next
to the quadratic drift formula from `estimation.doppler_error`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimation import doppler_error, mmse_error_block

__all__ = [
    "McEstimate",
    "jakes_doppler_ratio",
    "mc_capacity_moments",
    "simulate_mmse_mse",
]

_LOG2E = float(np.log2(np.e))
_BLOCK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate with its standard error (sample std / sqrt(trials))."""

    mean: float
    std_error: float
    trials: int
    seed: int

    def z_score(self, reference: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.mean == reference else math.inf
        return (self.mean - reference) / self.std_error


def _block_generator(seed: int, uniforms_before: int) -> np.random.Generator:
    if uniforms_before % 4 != 0:
        raise AssertionError("block offsets must align to whole Philox counters")
    bg = np.random.Philox(key=seed)
    bg.advance(uniforms_before // 4)
    return np.random.Generator(bg)


def _standard_complex(u: np.ndarray) -> np.ndarray:
    """Map uniform pairs (last axis) to CN(0,1) samples via Box-Muller."""
    radius = np.sqrt(-2.0 * np.log1p(-u[..., 0::2]))
    angle = 2.0 * np.pi * u[..., 1::2]
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)) / np.sqrt(2.0)


def _validate_trials_seed(trials: int, seed: int) -> tuple[int, int]:
    if not isinstance(trials, (int, np.integer)) or trials < 1:
        raise ValueError("trials must be a positive integer")
    if not isinstance(seed, (int, np.integer)) or not (0 <= seed < 2**64):
        raise ValueError("seed must be a 64-bit unsigned integer")
    return int(trials), int(seed)


def simulate_mmse_mse(alpha: float, n: int, snr: float, trials: int,
                      seed: int) -> McEstimate:
    """Sampled MSE of the pilot MMSE estimator under pure block fading.

    Requires alpha*n to be a whole number of pilot symbols.  The estimate
    converges to 1/(1 + alpha*n*rho).
    """
    trials, seed = _validate_trials_seed(trials, seed)
    expected = mmse_error_block(alpha, n, snr)  # validates alpha, n, snr
    del expected
    pilots_f = float(alpha) * n
    pilots = int(round(pilots_f))
    if abs(pilots_f - pilots) > 1e-9 or pilots < 1:
        raise ValueError("alpha*n must be a positive integer (explicit pilot vector)")

    rho = float(snr)
    shrink = pilots * rho / (1.0 + pilots * rho)
    noise_gain = math.sqrt(rho) / (1.0 + pilots * rho)
    per_trial = 2 + 2 * pilots  # uniforms: one CN gain + `pilots` CN noises

    total = 0.0
    total_sq = 0.0
    done = 0
    while done < trials:
        count = min(_BLOCK, trials - done)
        gen = _block_generator(seed, done * per_trial)
        u = gen.random((count, per_trial))
        z = _standard_complex(u)
        h = z[:, 0]
        w_sum = z[:, 1:].sum(axis=1)
        hhat = shrink * h + noise_gain * w_sum
        err = np.abs(h - hhat) ** 2
        total += float(err.sum())
        total_sq += float(np.square(err).sum())
        done += count

    mean = total / trials
    var = max(total_sq - trials * mean * mean, 0.0) / max(trials - 1, 1)
    return McEstimate(mean=mean, std_error=math.sqrt(var / trials),
                      trials=trials, seed=seed)


def mc_capacity_moments(snr: float, trials: int,
                        seed: int) -> tuple[McEstimate, McEstimate, McEstimate]:
    """Sampling oracle for the channel moments at linear SNR rho.

    Returns Monte Carlo estimates of (E[log2(1+rho*g)], Var[log2(1+rho*g)],
    E[1/(1+rho*g)]) for g ~ Exp(1), each with a standard error (the variance
    estimate's standard error uses the fourth central moment).
    """
    trials, seed = _validate_trials_seed(trials, seed)
    rho = float(snr)
    if not math.isfinite(rho) or rho <= 0.0:
        raise ValueError("snr must be positive and finite")

    s1 = s2 = s3 = s4 = 0.0
    y1 = y2 = 0.0
    done = 0
    while done < trials:
        count = min(_BLOCK, trials - done)
        gen = _block_generator(seed, done)  # one uniform per trial
        g = -np.log1p(-gen.random(count))
        x = np.log1p(rho * g) * _LOG2E
        y = 1.0 / (1.0 + rho * g)
        x2 = x * x
        s1 += float(x.sum())
        s2 += float(x2.sum())
        s3 += float((x2 * x).sum())
        s4 += float((x2 * x2).sum())
        y1 += float(y.sum())
        y2 += float(np.square(y).sum())
        done += count

    m = s1 / trials
    var = max(s2 - trials * m * m, 0.0) / max(trials - 1, 1)
    mean_est = McEstimate(mean=m, std_error=math.sqrt(var / trials),
                          trials=trials, seed=seed)

    # Central moments from raw sums; stderr(sample var) ~ sqrt((m4 - var^2)/N).
    e2 = s2 / trials
    e3 = s3 / trials
    e4 = s4 / trials
    m4 = e4 - 4.0 * m * e3 + 6.0 * m * m * e2 - 3.0 * m**4
    var_se = math.sqrt(max(m4 - var * var, 0.0) / trials)
    var_est = McEstimate(mean=var, std_error=var_se, trials=trials, seed=seed)

    my = y1 / trials
    vy = max(y2 - trials * my * my, 0.0) / max(trials - 1, 1)
    inv_est = McEstimate(mean=my, std_error=math.sqrt(vy / trials),
                         trials=trials, seed=seed)
    return mean_est, var_est, inv_est


def jakes_doppler_ratio(alpha: float, n: int, snr: float, f_d: float,
                        trials: int, seed: int, rays: int = 32) -> dict:
    """Optional experiment: measured drift error vs the quadratic formula.

    Simulates h(t) as a sum of `rays` equal-power sinusoids with random
    arrival angles and phases (Jakes-like autocorrelation J0(2*pi*f_d*tau)),
    runs the all-ones pilot estimator over the first alpha*n symbols, and
    averages |h(t) - hhat|^2 over the data phase.  Reports the measured
    excess over the block-fading noise floor next to the closed-form drift
    term; no fidelity claim is attached to the formula, so this never gates
    acceptance.
    """
    trials, seed = _validate_trials_seed(trials, seed)
    noise_floor = mmse_error_block(alpha, n, snr)
    predicted = doppler_error(alpha, n, snr, f_d)
    pilots = int(round(float(alpha) * n))
    if abs(float(alpha) * n - pilots) > 1e-9 or pilots < 1 or pilots >= n:
        raise ValueError("alpha*n must be an integer in [1, n-1]")
    if rays < 8 or rays % 2 != 0:
        raise ValueError("rays must be an even integer >= 8")

    rho = float(snr)
    per_trial = 2 * rays + 2 * pilots  # ray angles+phases, then pilot noise
    t_all = np.arange(n, dtype=float)

    acc = 0.0
    acc_sq = 0.0
    done = 0
    while done < trials:
        count = min(_BLOCK, trials - done)
        gen = _block_generator(seed, done * per_trial)
        u = gen.random((count, per_trial))
        theta = 2.0 * np.pi * u[:, :rays]
        phase = 2.0 * np.pi * u[:, rays:2 * rays]
        # h(t) = (1/sqrt(rays)) sum_m exp(i(2 pi f_d t cos(theta_m) + phi_m))
        arg = (2.0 * np.pi * f_d) * np.cos(theta)[:, :, None] * t_all[None, None, :]
        h_t = np.exp(1j * (arg + phase[:, :, None])).sum(axis=1) / math.sqrt(rays)
        w = _standard_complex(u[:, 2 * rays:])
        y_sum = math.sqrt(rho) * h_t[:, :pilots].sum(axis=1) + w.sum(axis=1)
        hhat = (math.sqrt(rho) / (1.0 + pilots * rho)) * y_sum
        err = np.abs(h_t[:, pilots:] - hhat[:, None]) ** 2
        per_packet = err.mean(axis=1)
        acc += float(per_packet.sum())
        acc_sq += float(np.square(per_packet).sum())
        done += count
        del u, theta, phase, arg, h_t, w, err

    measured_total = acc / trials
    var = max(acc_sq - trials * measured_total**2, 0.0) / max(trials - 1, 1)
    measured_excess = measured_total - noise_floor
    ratio = measured_excess / predicted if predicted > 0.0 else math.nan
    return {
        "measured_total": measured_total,
        "measured_excess": measured_excess,
        "predicted_doppler": predicted,
        "noise_floor": noise_floor,
        "ratio": ratio,
        "std_error": math.sqrt(var / trials),
        "trials": trials,
        "seed": seed,
    }

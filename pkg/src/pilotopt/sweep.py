"""Parameter-sweep engine and the built-in figure presets.

A sweep fixes a link configuration template, varies one parameter (error
target, blocklength, SNR in dB, or normalized Doppler) over an ordered grid,
and optimizes the pilot fraction twice per point: once under the
finite-blocklength objective and once under the ergodic baseline.  Each row
also evaluates the finite-blocklength rate at the ergodic-optimal alpha, so
the relative gain of blocklength-aware optimization can be read off
directly.

Rows are independent pure computations; `run_sweep` may fan them out over a
thread pool, and output ordering is imposed by (model kind, swept value)
regardless of scheduling, so sweep output is deterministic.

The eight built-in presets fig1..fig8 cover the standard operating points:

    fig1  alpha vs error target      n=30,  15 dB, block + continuous
    fig2  alpha vs blocklength       8 dB,  eps=1e-9, block
    fig3  alpha vs blocklength       23 dB, eps=1e-9, continuous f_D=0.02
    fig4  alpha vs SNR               n=40,  eps=1e-9, block + continuous
    fig5  alpha vs Doppler           n=10,  16 dB, eps=1e-9, continuous
    fig6  alpha vs Doppler           (same operating point as fig5)
    fig7  rate vs blocklength        20 dB, eps=1e-12, continuous f_D=0.02
    fig8  rate vs blocklength        7 dB,  eps=1e-9, block

Grid densities are implementation choices: error
targets use 25 log-spaced points per decade, blocklengths every integer, SNR
0.5 dB steps, Doppler 50 linear points.  The fig4 grid starts at 5 dB and the
fig5/fig6 Doppler grid stops at 0.002 because below/beyond those edges the
finite-blocklength rate at these operating points is identically zero and
the optimum is no longer informative.  Continuous presets default to
f_D = 0.02; the CLI exposes an override.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimation import FadingModel
from .optimizer import optimize_alpha
from .rate import LinkConfig, training_rate_curve

__all__ = [
    "SWEEP_KINDS",
    "SweepRow",
    "SweepSpec",
    "built_in_figures",
    "figure_preset",
    "run_sweep",
]

SWEEP_KINDS = (
    "alpha-vs-epsilon",
    "alpha-vs-blocklength",
    "alpha-vs-snr",
    "alpha-vs-doppler",
    "rate-vs-blocklength",
)

_SWEPT_FIELD = {
    "alpha-vs-epsilon": "epsilon",
    "alpha-vs-blocklength": "n",
    "alpha-vs-snr": "snr_db",
    "alpha-vs-doppler": "f_d",
    "rate-vs-blocklength": "n",
}

DEFAULT_DOPPLER = 0.02


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a kind, the fixed template, the swept grid and the models.

    The swept parameter must be left out of the fixed template; `swept_values`
    must be non-empty and strictly increasing.
    """

    kind: str
    swept_values: tuple
    models: tuple
    n: int | None = None
    snr_db: float | None = None
    epsilon: float | None = None
    name: str = field(default="")

    def __post_init__(self) -> None:
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"kind must be one of {SWEEP_KINDS}")
        values = tuple(self.swept_values)
        if not values:
            raise ValueError("swept_values must be non-empty")
        if np.any(np.diff(np.asarray(values, dtype=float)) <= 0.0):
            raise ValueError("swept_values must be strictly increasing")
        object.__setattr__(self, "swept_values", values)
        models = tuple(self.models)
        if not models or not all(isinstance(m, FadingModel) for m in models):
            raise ValueError("models must be a non-empty tuple of FadingModel")
        object.__setattr__(self, "models", models)

        swept = _SWEPT_FIELD[self.kind]
        fixed = {"n": self.n, "snr_db": self.snr_db, "epsilon": self.epsilon}
        if swept in fixed and fixed[swept] is not None:
            raise ValueError(f"swept parameter {swept!r} must not be fixed")
        for name, value in fixed.items():
            if name != swept and value is None:
                raise ValueError(f"fixed parameter {name!r} is required for {self.kind}")
        if swept == "f_d" and any(m.kind != "continuous" for m in models):
            raise ValueError("a Doppler sweep runs on continuous-fading models only")


@dataclass(frozen=True)
class SweepRow:
    """One (model, swept value) record of a sweep."""

    swept_param: str
    swept_value: float
    model: FadingModel
    config: LinkConfig
    alpha_finite: float
    alpha_ergodic: float
    n_t_finite: int
    rate_finite_at_finite: float
    rate_finite_at_ergodic: float
    gain: float
    clamped: bool


def _row_config(spec: SweepSpec, model: FadingModel, value) -> LinkConfig:
    swept = _SWEPT_FIELD[spec.kind]
    n = spec.n
    snr_db = spec.snr_db
    epsilon = spec.epsilon
    if swept == "n":
        n = int(value)
    elif swept == "snr_db":
        snr_db = float(value)
    elif swept == "epsilon":
        epsilon = float(value)
    elif swept == "f_d":
        model = FadingModel.continuous(float(value))
    return LinkConfig(n=int(n), snr=10.0 ** (float(snr_db) / 10.0),
                      epsilon=float(epsilon), model=model)


def _compute_row(spec: SweepSpec, model: FadingModel, value) -> SweepRow:
    cfg = _row_config(spec, model, value)
    fin = optimize_alpha(cfg, "finite")
    erg = optimize_alpha(cfg, "ergodic")
    rate_fe, fe_clamped = training_rate_curve(erg.alpha_star, cfg, penalty=True)

    if rate_fe > 0.0:
        gain = fin.rate_at_opt / rate_fe - 1.0
    elif fin.rate_at_opt > 0.0:
        gain = sys.float_info.max
    else:
        gain = 0.0

    return SweepRow(
        swept_param=_SWEPT_FIELD[spec.kind],
        swept_value=float(value),
        model=cfg.model,
        config=cfg,
        alpha_finite=fin.alpha_star,
        alpha_ergodic=erg.alpha_star,
        n_t_finite=fin.n_t_star,
        rate_finite_at_finite=fin.rate_at_opt,
        rate_finite_at_ergodic=rate_fe,
        gain=gain,
        clamped=bool(fin.clamped_region or erg.clamped_region or fe_clamped),
    )


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRow]:
    """All rows of a sweep, ordered by (model kind, swept value).

    Per-row infeasibility shows up as a flagged row, never as an exception.
    Rows are pure and may be computed in parallel; the returned order does
    not depend on scheduling.
    """
    models = sorted(spec.models, key=lambda m: (m.kind, m.doppler or 0.0))
    tasks = [(model, value) for model in models for value in spec.swept_values]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda mv: _compute_row(spec, *mv), tasks))
    else:
        rows = [_compute_row(spec, model, value) for model, value in tasks]
    return rows


def _int_range(lo: int, hi: int) -> tuple:
    return tuple(range(lo, hi + 1))


def built_in_figures(doppler: float = DEFAULT_DOPPLER) -> list[SweepSpec]:
    """The eight built-in figure presets.

    `doppler` overrides the f_D used by the continuous-fading presets that
    do not sweep it themselves (fig1 most notably).
    """
    block = FadingModel.block()
    cont = FadingModel.continuous(doppler)
    eps_grid = tuple(np.logspace(-12.0, -1.0, 11 * 25 + 1))
    snr_grid = tuple(np.arange(5.0, 30.0 + 0.25, 0.5))
    doppler_grid = tuple(np.linspace(0.0, 0.002, 50))
    return [
        SweepSpec(name="fig1", kind="alpha-vs-epsilon", swept_values=eps_grid,
                  models=(block, cont), n=30, snr_db=15.0),
        SweepSpec(name="fig2", kind="alpha-vs-blocklength",
                  swept_values=_int_range(2, 100), models=(block,),
                  snr_db=8.0, epsilon=1e-9),
        SweepSpec(name="fig3", kind="alpha-vs-blocklength",
                  swept_values=_int_range(2, 100), models=(cont,),
                  snr_db=23.0, epsilon=1e-9),
        SweepSpec(name="fig4", kind="alpha-vs-snr", swept_values=snr_grid,
                  models=(block, cont), n=40, epsilon=1e-9),
        SweepSpec(name="fig5", kind="alpha-vs-doppler", swept_values=doppler_grid,
                  models=(cont,), n=10, snr_db=16.0, epsilon=1e-9),
        SweepSpec(name="fig6", kind="alpha-vs-doppler", swept_values=doppler_grid,
                  models=(cont,), n=10, snr_db=16.0, epsilon=1e-9),
        SweepSpec(name="fig7", kind="rate-vs-blocklength",
                  swept_values=_int_range(2, 100), models=(cont,),
                  snr_db=20.0, epsilon=1e-12),
        SweepSpec(name="fig8", kind="rate-vs-blocklength",
                  swept_values=_int_range(2, 60), models=(block,),
                  snr_db=7.0, epsilon=1e-9),
    ]


def figure_preset(name: str, doppler: float = DEFAULT_DOPPLER) -> SweepSpec:
    """Look up one preset by name (fig1..fig8)."""
    for spec in built_in_figures(doppler=doppler):
        if spec.name == name:
            return spec
    valid = ", ".join(s.name for s in built_in_figures())
    raise KeyError(f"unknown figure {name!r}; valid names: {valid}")

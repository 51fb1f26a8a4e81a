"""Compiled numeric kernels shared by the special-function and channel layers.

Two kernels carry the whole hot path:

* ``scaled_e1``: elementwise e^x * E1(x) via power series (x <= 1) or the
  modified-Lentz continued fraction (x > 1).

* ``log_moments``: the first two moments of ln(1 + rho*g) under g ~ Exp(1),
  by fixed Gauss-Legendre quadrature after the substitution x = ln(1 + rho*g).
  The substitution moves the integrand's pole at g = -1/rho away from the
  integration path, so a single 64-node rule is uniformly accurate to
  ~1e-14 relative for rho from 1e-6 to 1e6 (plain Gauss-Laguerre degrades to
  ~1e-2 by rho = 100).  The transformed integral is

      int_0^X m(x) * exp(x - (e^x - 1)/rho) / rho dx,   X = ln(1 + G_MAX*rho),

  with m(x) in {x, x^2}; the cut at g = G_MAX discards only e^{-G_MAX} of
  probability mass.

Everything here is pure and deterministic; scalar callers go through the
same compiled code as vectorized ones, so results are bit-identical across
both paths.
"""

from __future__ import annotations

import numba
import numpy as np

_EULER_GAMMA = 0.5772156649015329

# Exp(1) tail mass beyond the integration cut: e^{-60} ~ 8.8e-27.
GAUSS_CUT = 60.0

# Base Gauss-Legendre rules on [0, 1]; 64 nodes is the default engine and the
# 96-node rule provides the disagreement estimate that triggers escalation.
DEFAULT_ORDER = 64
CHECK_ORDER = 96


def _legendre_unit(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


_NODES_64, _WEIGHTS_64 = _legendre_unit(DEFAULT_ORDER)
_NODES_96, _WEIGHTS_96 = _legendre_unit(CHECK_ORDER)
for _a in (_NODES_64, _WEIGHTS_64, _NODES_96, _WEIGHTS_96):
    _a.setflags(write=False)


@numba.njit(cache=True)
def scaled_e1(x: np.ndarray) -> np.ndarray:
    """Elementwise e^x * E1(x) for x > 0 (caller validates the domain)."""
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        xi = x[i]
        if xi <= 1.0:
            # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
            term = xi
            total = xi
            k = 1.0
            while True:
                term *= -xi * k / ((k + 1.0) * (k + 1.0))
                total += term
                k += 1.0
                if abs(term) <= 1e-18 * abs(total) or k > 80.0:
                    break
            out[i] = np.exp(xi) * (-_EULER_GAMMA - np.log(xi) + total)
        else:
            # E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)));
            # modified Lentz evaluates the scaled value directly.
            b = xi + 1.0
            c = 1e308
            d = 1.0 / b
            h = d
            for j in range(1, 400):
                a = -float(j) * float(j)
                b += 2.0
                d = a * d + b
                if abs(d) < 1e-300:
                    d = 1e-300
                c = b + a / c
                if abs(c) < 1e-300:
                    c = 1e-300
                d = 1.0 / d
                delta = d * c
                h *= delta
                if abs(delta - 1.0) <= 1e-16:
                    break
            out[i] = h
    return out


@numba.njit(cache=True)
def _log_moments_fixed(rho: np.ndarray, nodes: np.ndarray, weights: np.ndarray,
                       cut: float) -> tuple[np.ndarray, np.ndarray]:
    m1 = np.empty(rho.shape[0])
    m2 = np.empty(rho.shape[0])
    for i in range(rho.shape[0]):
        r = rho[i]
        span = np.log1p(cut * r)
        acc1 = 0.0
        acc2 = 0.0
        for j in range(nodes.shape[0]):
            x = span * nodes[j]
            g = np.expm1(x) / r
            psi = weights[j] * span * np.exp(x - g) / r
            acc1 += psi * x
            acc2 += psi * x * x
        m1[i] = acc1
        m2[i] = acc2
    return m1, m2


def log_moments(rho: np.ndarray, order: int = DEFAULT_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """(E[ln(1+rho*g)], E[ln^2(1+rho*g)]) for g ~ Exp(1), elementwise in rho."""
    if order == DEFAULT_ORDER:
        nodes, weights = _NODES_64, _WEIGHTS_64
    elif order == CHECK_ORDER:
        nodes, weights = _NODES_96, _WEIGHTS_96
    else:
        nodes, weights = _legendre_unit(order)
    return _log_moments_fixed(np.asarray(rho, dtype=float), nodes, weights, GAUSS_CUT)

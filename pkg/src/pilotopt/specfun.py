"""Self-contained special functions used throughout the library.

Provides the exponential integral E1, the Gaussian tail function Q and its
inverse, and fixed Gauss-Laguerre quadrature rules for expectations over an
Exp(1)-distributed channel gain.

Numerical methods
-----------------
E1(x) = int_1^inf t^{-1} e^{-xt} dt is evaluated by the alternating power
series for x <= 1 and by the modified-Lentz continued fraction for x > 1.
Both branches deliver ~1e-15 relative accuracy; the branch point at 1.0 is
an implementation constant validated against an adaptive-integration oracle
in the test suite.  `exp_scaled_e1` returns e^x * E1(x), which stays finite
for arbitrarily large x and is the form the Rayleigh capacity closed forms
actually need (E1 itself underflows near x ~ 700).

Q is computed from the complementary error function,
Q(x) = erfc(x / sqrt(2)) / 2, so Q(0) == 0.5 exactly.  Q^{-1} uses Acklam's
rational approximation for the standard-normal quantile followed by one
Newton step on Q, giving round-trip errors far below the 1e-8 contract down
to eps = 1e-15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._moments import scaled_e1 as _scaled_e1_kernel

__all__ = [
    "QuadratureRule",
    "exp_integral_e1",
    "exp_scaled_e1",
    "gauss_laguerre",
    "q_function",
    "q_inverse",
]

_EULER_GAMMA = 0.5772156649015329
_SQRT2 = math.sqrt(2.0)
_SQRT_TAU = math.sqrt(2.0 * math.pi)

# Largest weights of a Gauss-Laguerre rule shrink roughly like e^{-4m}; past
# order ~190 they underflow IEEE doubles to exact zero, which violates the
# positive-weight invariant, so such orders are rejected as unsupported.
_MAX_ORDER = 256


@dataclass(frozen=True)
class QuadratureRule:
    """Fixed quadrature rule for integrals of the form int_0^inf f(g) e^{-g} dg.

    Invariants: nodes strictly increasing, weights strictly positive, and for
    a Gauss-Laguerre rule the weights sum to 1 (integral of the weight
    function).
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    kind: str = field(default="gauss-laguerre")

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or weights.shape != nodes.shape:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if not np.all(np.isfinite(nodes)) or not np.all(np.isfinite(weights)):
            raise ValueError("non-finite quadrature data")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights <= 0.0):
            raise ValueError("weights must be strictly positive")
        if self.kind not in ("gauss-laguerre", "adaptive-fallback"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, f) -> float:
        """Approximate int_0^inf f(g) e^{-g} dg as sum(w_i * f(g_i))."""
        return float(np.dot(self.weights, f(self.nodes)))


def gauss_laguerre(order: int) -> QuadratureRule:
    """Gauss-Laguerre nodes and weights of the given order.

    The rule integrates int_0^inf f(g) e^{-g} dg exactly for polynomials f of
    degree up to 2*order - 1.  Raises ValueError for orders outside [2, 256]
    and for orders whose double-precision weights underflow to zero.
    """
    if not isinstance(order, (int, np.integer)):
        raise ValueError("order must be an integer")
    if order < 2 or order > _MAX_ORDER:
        raise ValueError(f"unsupported order {order}: must be in [2, {_MAX_ORDER}]")
    from scipy.special import roots_laguerre

    nodes, weights = roots_laguerre(int(order))
    if np.any(weights <= 0.0):
        raise ValueError(
            f"unsupported order {order}: smallest weights underflow double precision"
        )
    return QuadratureRule(nodes=nodes, weights=weights, order=int(order))


def _validate_positive(x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise ValueError("argument must be finite")
    if np.any(x <= 0.0):
        raise ValueError("argument must be > 0")


def exp_scaled_e1(x):
    """Exponentially scaled exponential integral, e^x * E1(x), for x > 0.

    Finite for the whole positive axis (asymptotically ~ 1/x), unlike E1,
    which underflows for x ~> 700.  Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    _validate_positive(arr)
    out = _scaled_e1_kernel(np.atleast_1d(arr).ravel())
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def exp_integral_e1(x):
    """Exponential integral E1(x) = int_1^inf t^{-1} e^{-xt} dt for x > 0.

    Relative error <= 1e-10 over the tested range (series for x <= 1,
    continued fraction above); strictly decreasing in x.  Accepts scalars or
    arrays.
    """
    arr = np.asarray(x, dtype=float)
    _validate_positive(arr)
    flat = np.atleast_1d(arr).ravel()
    out = _scaled_e1_kernel(flat) * np.exp(-flat)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = P(Z > x) for standard normal Z."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("argument must be finite")
    return 0.5 * math.erfc(x / _SQRT2)


# Acklam's rational approximation for the standard-normal quantile.
# Relative error < 1.15e-9 over (0, 1); refined below by one Newton step.
_ACKLAM_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_ACKLAM_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_ACKLAM_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_ACKLAM_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)


def _acklam_ppf(p: float) -> float:
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    plow = 0.02425
    if p < plow:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    if p > 1.0 - plow:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    q = p - 0.5
    r = q * q
    return (
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5])
        * q
        / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    )


def q_inverse(eps: float) -> float:
    """Functional inverse of the Q-function: x such that Q(x) = eps.

    Valid on 0 < eps < 1; eps = 0.5 maps to exactly 0.  One Newton step on Q
    (derivative -phi(x)) polishes Acklam's approximation so the round-trip
    relative error |Q(Q^{-1}(eps)) - eps| / eps stays below 1e-8 down to
    eps = 1e-15.
    """
    eps = float(eps)
    if not (0.0 < eps < 1.0) or not math.isfinite(eps):
        raise ValueError("eps must be in the open interval (0, 1)")
    # Q^{-1}(eps) = -Phi^{-1}(eps); evaluating the quantile at eps (not at
    # 1 - eps) keeps the small-tail information that 1 - eps would round away.
    x = -_acklam_ppf(eps)
    pdf = math.exp(-0.5 * x * x) / _SQRT_TAU
    if pdf > 1e-300:
        x += (q_function(x) - eps) / pdf
    return x + 0.0

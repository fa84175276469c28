"""Smoothing kernels: how far a comparison is from its boundary becomes a weight.

A comparison is oriented so its signed boundary distance d = a - b is
negative (or zero) exactly when the discrete outcome is "true".  The true
branch then gets weight cdf(-h * d), where cdf is a symmetric sigmoidal CDF
and the sharpness h > 0 scales the transition width.  h = math.inf is the
exact discrete limit: the weight is exactly 1.0 for d <= 0 and 0.0 otherwise,
computed without ever forming h * d.

Two kernels: the logistic CDF (default) and the Gaussian CDF via erfc.  Both
are evaluated in saturation-safe forms, so extreme arguments return exactly
0.0 or 1.0 instead of overflowing.  Distances may be plain floats or
ActiveScalars; in the latter case the weight lands on the tape and the path
weights become differentiable quantities.
"""

import math
from enum import Enum

from .adjoint import erfc, exp, primal

INFINITE = math.inf

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class KernelKind(str, Enum):
    LOGISTIC = "logistic"
    GAUSS = "gauss"


def validate_sharpness(h) -> float:
    h = float(h)
    if math.isnan(h) or h <= 0.0:
        raise ValueError(f"sharpness must be positive (math.inf allowed), got {h!r}")
    return h


def _logistic_cdf(t):
    # Split on the primal sign so the exp argument is never positive; both
    # forms are algebraically identical, so the derivative is continuous
    # across the split.
    if primal(t) >= 0.0:
        return 1.0 / (1.0 + exp(-t))
    z = exp(t)
    return z / (1.0 + z)


def _gauss_cdf(t):
    # 0.5 * erfc(-t / sqrt(2)); erfc keeps the negative tail representable
    # down to ~1e-300 instead of cancelling in 1 + erf.
    return 0.5 * erfc(t * -_INV_SQRT2)


def contrib_true(d, h, kind: KernelKind = KernelKind.LOGISTIC):
    """Weight of the true branch for boundary distance d (true iff d <= 0).

    The false branch's weight is the complement 1 - contrib_true(d, h).
    """
    dp = primal(d)
    if math.isnan(dp):
        raise ValueError("boundary distance is NaN")
    h = validate_sharpness(h)
    if math.isinf(h):
        return 1.0 if dp <= 0.0 else 0.0
    t = d * -h
    if kind == KernelKind.LOGISTIC:
        return _logistic_cdf(t)
    if kind == KernelKind.GAUSS:
        return _gauss_cdf(t)
    raise ValueError(f"unknown kernel kind {kind!r}")


def contrib_density(d: float, h: float, kind: KernelKind = KernelKind.LOGISTIC) -> float:
    """|d/dd contrib_true(d, h)| = h * pdf(h * d); float-only diagnostic.

    Rejects h = inf: the discrete limit has no density.
    """
    d = float(d)
    if math.isnan(d):
        raise ValueError("boundary distance is NaN")
    h = validate_sharpness(h)
    if math.isinf(h):
        raise ValueError("contrib_density is undefined at infinite sharpness")
    x = h * d
    if kind == KernelKind.LOGISTIC:
        s = _logistic_cdf(-abs(x))  # evaluate on the small side: s*(1-s) is symmetric
        return h * s * (1.0 - s)
    if kind == KernelKind.GAUSS:
        return h * _INV_SQRT_2PI * math.exp(-0.5 * x * x)
    raise ValueError(f"unknown kernel kind {kind!r}")

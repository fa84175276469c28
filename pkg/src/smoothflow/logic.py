"""Probabilistic boolean algebra over smoothed comparisons.

A SmoothBool pairs the discrete outcome with the probability that the
outcome is "true" under the kernel's boundary perturbation.  Connectives
combine probabilities as if the operands were independent events:

    p & q  ->  p*q          p | q  ->  p + q - p*q          ~p  ->  1 - p

Reusing one SmoothBool twice in a clause therefore does NOT model the
correlation between the copies; each occurrence is treated as a fresh draw.

Comparisons orient their boundary distance d = a - b so that d <= 0 means
true, which gives lt and le (and gt and ge) identical probabilities; only
the discrete outcome distinguishes them at exact ties.  eq is the degenerate
product s*(1-s) (maximum 0.25 at the boundary), so it never reaches
probability 1 and collapses to 0 at h = inf even for equal operands.

Probabilities are carried in the active numeric abstraction: trace with
ActiveScalar inputs and every prob lands on the tape, making path weights
differentiable.
"""

from dataclasses import dataclass
from math import isinf, isnan
from typing import Any

from .adjoint import primal
from .kernel import KernelKind, contrib_true, validate_sharpness


@dataclass(frozen=True)
class SmoothBool:
    discrete: bool
    prob: Any  # float or ActiveScalar in [0, 1]

    def __and__(self, other: "SmoothBool") -> "SmoothBool":
        return SmoothBool(self.discrete and other.discrete, self.prob * other.prob)

    def __or__(self, other: "SmoothBool") -> "SmoothBool":
        p, q = self.prob, other.prob
        return SmoothBool(self.discrete or other.discrete, p + q - p * q)

    def __invert__(self) -> "SmoothBool":
        return SmoothBool(not self.discrete, 1.0 - self.prob)

    def __bool__(self):
        raise TypeError(
            "SmoothBool has no truth value; branch on it with ctx.branch(...) "
            "and combine with &, |, ~ (not the `and`/`or`/`not` keywords)"
        )


def _distance(a, b):
    pa, pb = primal(a), primal(b)
    if isnan(pa) or isnan(pb):
        raise ValueError("comparison operand is NaN")
    return a - b, pa, pb


def lt(a, b, h, kind: KernelKind = KernelKind.LOGISTIC) -> SmoothBool:
    h = validate_sharpness(h)
    d, pa, pb = _distance(a, b)
    if isinf(h):
        return SmoothBool(pa < pb, 1.0 if pa < pb else 0.0)
    return SmoothBool(pa < pb, contrib_true(d, h, kind))


def le(a, b, h, kind: KernelKind = KernelKind.LOGISTIC) -> SmoothBool:
    h = validate_sharpness(h)
    d, pa, pb = _distance(a, b)
    if isinf(h):
        return SmoothBool(pa <= pb, 1.0 if pa <= pb else 0.0)
    return SmoothBool(pa <= pb, contrib_true(d, h, kind))


def gt(a, b, h, kind: KernelKind = KernelKind.LOGISTIC) -> SmoothBool:
    h = validate_sharpness(h)
    d, pa, pb = _distance(a, b)
    if isinf(h):
        return SmoothBool(pa > pb, 1.0 if pa > pb else 0.0)
    return SmoothBool(pa > pb, 1.0 - contrib_true(d, h, kind))


def ge(a, b, h, kind: KernelKind = KernelKind.LOGISTIC) -> SmoothBool:
    h = validate_sharpness(h)
    d, pa, pb = _distance(a, b)
    if isinf(h):
        return SmoothBool(pa >= pb, 1.0 if pa >= pb else 0.0)
    return SmoothBool(pa >= pb, 1.0 - contrib_true(d, h, kind))


def eq(a, b, h, kind: KernelKind = KernelKind.LOGISTIC) -> SmoothBool:
    d, pa, pb = _distance(a, b)
    s = contrib_true(d, h, kind)
    return SmoothBool(pa == pb, s * (1.0 - s))

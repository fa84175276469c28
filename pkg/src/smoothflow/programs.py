"""Program corpus: small branchy functions written against the tracing context.

Each body takes (ctx, *inputs) and uses ctx.branch / ctx comparisons for all
control flow, so the same source evaluates discretely (h = inf), smoothly
(finite h), and differentiably (ActiveScalar inputs).  Bodies must stay pure
functions of their inputs and branch decisions.
"""

from dataclasses import dataclass
from typing import Callable, Optional


@dataclass(frozen=True)
class ProgramSpec:
    name: str
    arity: int
    output_dim: int
    body: Callable
    recommended_start: Optional[tuple] = None


def step_body(ctx, x):
    """0 left of the origin, 1 from it on; the canonical jump."""
    if ctx.branch(ctx.lt(x, 0.0)):
        return 0.0
    return 1.0


def two_cuts_body(ctx, x1, x2):
    """Start at 2 and subtract 1 inside the disk x1^2 + x2^2 < 2 and 1 below
    the diagonal x1 < x2; values {0, 1, 2} over four regions."""
    r = 2.0
    if ctx.branch(ctx.lt(x1 * x1 + x2 * x2, 2.0)):
        r = r - 1.0
    if ctx.branch(ctx.lt(x1, x2)):
        r = r - 1.0
    return r


def plateaus_body(ctx, x1, x2):
    """Three plateaus picked by conjunctions of the two_cuts conditions:
    0 inside the disk and below the diagonal, 2 outside the disk and on or
    above the diagonal, 1 otherwise."""
    inside = ctx.lt(x1 * x1 + x2 * x2, 2.0)
    below = ctx.lt(x1, x2)
    if ctx.branch(inside & below):
        return 0.0
    if ctx.branch(~inside & ~below):
        return 2.0
    return 1.0


def crescent_body(ctx, x1, x2):
    """Pointwise maximum of two quadratics whose upper envelope is a
    crescent-shaped valley; continuous but kinked along the switch curve."""
    a = x1 * x1 + (x2 - 1.0) * (x2 - 1.0) + x2 - 1.0
    b = -x1 * x1 - (x2 - 1.0) * (x2 - 1.0) + x2 + 1.0
    if ctx.branch(ctx.ge(a, b)):
        return a
    return b


def nested_affine_body(ctx, x):
    """Nested branch skeleton selecting affine maps, with a two-term clause
    and a re-merge; paths outside the first region see 2 conditions, paths
    inside see 3.

    Maps: a(x) = 2x + 1, b(x) = 0.5x - 2, c(x) = -x + 3 (inner else),
    d(x) = 0.25x + 1 (after the merge), e(x) = 3x - 2.
    """
    if ctx.branch(ctx.lt(x, 1.0)):
        x = 2.0 * x + 1.0
        if ctx.branch(ctx.lt(x, 0.5) & ctx.gt(x, -0.5)):
            x = 0.5 * x - 2.0
        else:
            x = -x + 3.0
    x = 0.25 * x + 1.0
    if ctx.branch(ctx.gt(x, 1.0)):
        x = 3.0 * x - 2.0
    return x


def two_stage_inner(ctx, x):
    """First stage of two_stage: 3 for x <= 0, -3 beyond."""
    if ctx.branch(ctx.le(x, 0.0)):
        return 3.0
    return -3.0


def two_stage_outer(ctx, y):
    """Second stage of two_stage: 1 for y <= 0, 0 beyond."""
    if ctx.branch(ctx.le(y, 0.0)):
        return 1.0
    return 0.0


def two_stage_body(ctx, x):
    """A piecewise stage feeding another: outer(inner(x)).  The inner jump
    (3 to -3) straddles the outer boundary at 0, so naive two-pass smoothing
    drags the interpolated inner value through the outer transition."""
    return two_stage_outer(ctx, two_stage_inner(ctx, x))


def quad_body(ctx, x1, x2):
    """Branch-free convex quadratic, minimum 0 at (1, -0.5)."""
    return (x1 - 1.0) * (x1 - 1.0) + (x2 + 0.5) * (x2 + 0.5)


PROGRAMS = {
    p.name: p
    for p in (
        ProgramSpec("step", 1, 1, step_body),
        ProgramSpec("two_cuts", 2, 1, two_cuts_body),
        ProgramSpec("plateaus", 2, 1, plateaus_body, recommended_start=(1.8, -1.8)),
        ProgramSpec("crescent", 2, 1, crescent_body, recommended_start=(-1.5, 2.0)),
        ProgramSpec("nested_affine", 1, 1, nested_affine_body),
        ProgramSpec("two_stage", 1, 1, two_stage_body),
        ProgramSpec("quad", 2, 1, quad_body, recommended_start=(3.0, 3.0)),
    )
}


def get_program(name: str) -> ProgramSpec:
    try:
        return PROGRAMS[name]
    except KeyError:
        names = ", ".join(sorted(PROGRAMS))
        raise ValueError(f"unknown program {name!r}; available: {names}") from None

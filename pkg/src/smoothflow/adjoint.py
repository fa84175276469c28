"""Reverse-mode automatic differentiation on an append-only tape.

An ActiveScalar wraps a float primal plus a slot index on a Tape.  Every
elementary operation appends one entry holding at most two operand slots and
the analytic local partials, so a single reverse sweep (see _sweep) yields
the exact derivative of the recorded computation.

There are deliberately no abs/min/max primitives: kinks have to be expressed
through branches so the tracer can smooth them instead of silently
differentiating past a nondifferentiable point.

The module-level exp/log/sqrt/erfc helpers accept either plain floats or
ActiveScalars, which lets numeric code (the smoothing kernels in particular)
stay generic over both.
"""

from __future__ import annotations

import math

import numpy as np

from ._sweep import get_sweep
from .errors import BudgetError

MAX_TAPE_ENTRIES = 10**8

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def primal(x) -> float:
    """Float value of x, whether x is an ActiveScalar or a plain number."""
    if isinstance(x, ActiveScalar):
        return x.primal
    return float(x)


class Tape:
    """Append-only record of elementary operations, one result slot each."""

    __slots__ = ("_lhs", "_rhs", "_pl", "_pr", "_interpreted")

    def __init__(self):
        self._lhs: list[int] = []
        self._rhs: list[int] = []
        self._pl: list[float] = []
        self._pr: list[float] = []
        self._interpreted = False

    def __len__(self) -> int:
        return len(self._lhs)

    def variable(self, value) -> ActiveScalar:
        """Register an input; its adjoint is read off after interpret()."""
        v = float(value)
        if math.isnan(v) or math.isinf(v):
            raise ValueError(f"tape variables must be finite, got {v!r}")
        return ActiveScalar(self, v, self._push(-1, -1, 0.0, 0.0))

    def _push(self, lhs: int, rhs: int, pl: float, pr: float) -> int:
        n = len(self._lhs)
        if n >= MAX_TAPE_ENTRIES:
            raise BudgetError(f"tape entry budget exceeded ({MAX_TAPE_ENTRIES})")
        self._lhs.append(lhs)
        self._rhs.append(rhs)
        self._pl.append(pl)
        self._pr.append(pr)
        return n

    def interpret(self, seeds, backend=None) -> np.ndarray:
        """Run the reverse sweep from the given (slot, adjoint) seeds.

        Returns the full adjoint vector, one value per tape slot.  A tape may
        only be interpreted once per reset(); accidental double sweeps would
        silently accumulate into stale adjoints otherwise.
        """
        if self._interpreted:
            raise RuntimeError("tape already interpreted; call reset() before seeding again")
        n = len(self._lhs)
        adj = np.zeros(n, dtype=np.float64)
        for slot, value in seeds:
            if not 0 <= slot < n:
                raise ValueError(f"seed slot {slot} out of range for tape of size {n}")
            adj[slot] = float(value)
        sweep = get_sweep(backend)
        sweep(
            np.asarray(self._lhs, dtype=np.int64),
            np.asarray(self._rhs, dtype=np.int64),
            np.asarray(self._pl, dtype=np.float64),
            np.asarray(self._pr, dtype=np.float64),
            adj,
        )
        self._interpreted = True
        return adj

    def reset(self):
        """Allow another interpret() pass (e.g. to seed a different output)."""
        self._interpreted = False


def _check_tape(a: ActiveScalar, b: ActiveScalar):
    if a.tape is not b.tape:
        raise ValueError("cannot combine ActiveScalars from different tapes")


class ActiveScalar:
    """A float primal tied to a tape slot; arithmetic records tape entries."""

    __slots__ = ("tape", "primal", "slot")

    def __init__(self, tape: Tape, primal: float, slot: int):
        self.tape = tape
        self.primal = primal
        self.slot = slot

    def __repr__(self):
        return f"ActiveScalar({self.primal!r}, slot={self.slot})"

    # Comparison dunders are intentionally not defined: `if x < y` on an
    # ActiveScalar raises TypeError, which turns raw boolean branching on
    # smoothed values from a silent error into a loud one.

    def __add__(self, other):
        if isinstance(other, ActiveScalar):
            _check_tape(self, other)
            v = self.primal + other.primal
            return ActiveScalar(self.tape, v, self.tape._push(self.slot, other.slot, 1.0, 1.0))
        v = self.primal + float(other)
        return ActiveScalar(self.tape, v, self.tape._push(self.slot, -1, 1.0, 0.0))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ActiveScalar):
            _check_tape(self, other)
            v = self.primal - other.primal
            return ActiveScalar(self.tape, v, self.tape._push(self.slot, other.slot, 1.0, -1.0))
        v = self.primal - float(other)
        return ActiveScalar(self.tape, v, self.tape._push(self.slot, -1, 1.0, 0.0))

    def __rsub__(self, other):
        v = float(other) - self.primal
        return ActiveScalar(self.tape, v, self.tape._push(self.slot, -1, -1.0, 0.0))

    def __neg__(self):
        return ActiveScalar(self.tape, -self.primal, self.tape._push(self.slot, -1, -1.0, 0.0))

    def __mul__(self, other):
        if isinstance(other, ActiveScalar):
            _check_tape(self, other)
            v = self.primal * other.primal
            return ActiveScalar(
                self.tape, v, self.tape._push(self.slot, other.slot, other.primal, self.primal)
            )
        c = float(other)
        return ActiveScalar(self.tape, self.primal * c, self.tape._push(self.slot, -1, c, 0.0))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ActiveScalar):
            _check_tape(self, other)
            b = other.primal
            v = self.primal / b
            return ActiveScalar(
                self.tape, v, self.tape._push(self.slot, other.slot, 1.0 / b, -v / b)
            )
        c = float(other)
        v = self.primal / c
        return ActiveScalar(self.tape, v, self.tape._push(self.slot, -1, 1.0 / c, 0.0))

    def __rtruediv__(self, other):
        a = self.primal
        v = float(other) / a
        return ActiveScalar(self.tape, v, self.tape._push(self.slot, -1, -v / a, 0.0))

    def __pow__(self, other):
        if isinstance(other, ActiveScalar):
            _check_tape(self, other)
            a, b = self.primal, other.primal
            if a <= 0.0:
                raise ValueError("pow with an active exponent needs a positive base")
            v = math.pow(a, b)
            return ActiveScalar(
                self.tape, v, self.tape._push(self.slot, other.slot, b * v / a, v * math.log(a))
            )
        e = float(other)
        v = math.pow(self.primal, e)  # raises ValueError outside the real domain
        if e == 0.0:
            dp = 0.0
        else:
            dp = e * math.pow(self.primal, e - 1.0)
        return ActiveScalar(self.tape, v, self.tape._push(self.slot, -1, dp, 0.0))


def _unary(x: ActiveScalar, value: float, partial: float) -> ActiveScalar:
    return ActiveScalar(x.tape, value, x.tape._push(x.slot, -1, partial, 0.0))


def exp(x):
    if isinstance(x, ActiveScalar):
        v = math.exp(x.primal)
        return _unary(x, v, v)
    return math.exp(x)


def log(x):
    """Natural logarithm; requires x > 0."""
    if isinstance(x, ActiveScalar):
        return _unary(x, math.log(x.primal), 1.0 / x.primal)
    return math.log(x)


def sqrt(x):
    if isinstance(x, ActiveScalar):
        v = math.sqrt(x.primal)  # ValueError for negative input
        return _unary(x, v, math.inf if v == 0.0 else 0.5 / v)
    return math.sqrt(x)


def erfc(x):
    if isinstance(x, ActiveScalar):
        p = x.primal
        return _unary(x, math.erfc(p), -_TWO_OVER_SQRT_PI * math.exp(-p * p))
    return math.erfc(x)


def gradient(program, inputs, config=None, *, with_result=False, backend=None):
    """Value and exact reverse-mode derivative of the smoothed program.

    Records one tape for the whole trace (all path iterations included), so
    the derivative covers both the per-path outputs and the input dependence
    of the path weights.  Returns (value, grad) where value is the output
    vector (floats) and grad has shape (arity,) for one output or
    (output_dim, arity) for several (each row seeded separately).

    with_result=True appends the SmoothResult for callers that need path
    diagnostics without tracing twice.
    """
    from .tracer import trace  # deferred: tracer imports logic -> kernel -> adjoint

    tape = Tape()
    xs = [tape.variable(v) for v in inputs]
    result = trace(program, xs, config)
    rows = []
    for k, y in enumerate(result.value):
        if k:
            tape.reset()
        if isinstance(y, ActiveScalar):
            adj = tape.interpret([(y.slot, 1.0)], backend=backend)
            rows.append([float(adj[x.slot]) for x in xs])
        else:
            # Output independent of the inputs (e.g. constant plateaus at
            # h = inf): derivative is identically zero.
            rows.append([0.0] * len(xs))
    value = [primal(y) for y in result.value]
    grad = np.asarray(rows[0] if len(rows) == 1 else rows, dtype=np.float64)
    if with_result:
        return value, grad, result
    return value, grad

"""Path tracing: evaluate a branchy program as a weighted sum over its paths.

A program is written against a context object: comparisons come from
ctx.lt/le/gt/ge/eq, clauses from &/|/~, and every `if` goes through
ctx.branch(cond), which returns a plain bool.  Conditions are identified by
the order in which branch() is called (a per-path counter), so loops whose
conditions depend on smoothed state are supported naturally; the one rule is
that a program must be a pure function of (inputs, branch decisions).

trace() explores the control-flow tree depth-first by deterministic replay.
The marker store maps condition index -> Set/Negated in insertion order and
describes the decision prefix of the next run:

  * no marker     take the natural (discrete) branch; if the opposite
                  branch's weight is >= epsilon (and > 0), mark the
                  condition Set, queueing that subtree for later;
  * Set           take the natural branch again (identical replay prefix);
  * Negated       take the opposite branch.

After each path the trailing Negated markers are popped (those subtrees are
exhausted) and the deepest remaining marker flips Set -> Negated; the store
running empty means the tree is exhausted.  Each path multiplies the weights
of the branches it took into kappa, and the result is sum(kappa_p * y_p),
a smooth interpolation of the program over its relevant paths.  Larger
epsilon prunes more subtrees; epsilon = 0 enumerates every path with
positive weight.

enumerate_all_paths() is an independent exhaustive oracle (forced-decision
replay, no markers, no pruning) used to check trace() against ground truth
on small programs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

from . import logic
from .adjoint import primal
from .errors import BudgetError, ReplayError
from .kernel import KernelKind, validate_sharpness

_ENUM_MAX_CONDITIONS = 20


@dataclass(frozen=True)
class TraceConfig:
    h: float = 1.0
    kernel: KernelKind = KernelKind.LOGISTIC
    epsilon: float = 1e-16
    max_paths: int = 1 << 16
    max_conditions_per_path: int = 1 << 14
    collect_paths: bool = False
    check_replay: bool = False

    def __post_init__(self):
        validate_sharpness(self.h)
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in [0, 0.5), got {self.epsilon!r}")
        if self.max_paths < 1 or self.max_conditions_per_path < 1:
            raise ValueError("path and condition budgets must be at least 1")
        KernelKind(self.kernel)


class Decision(NamedTuple):
    index: int
    taken: bool
    contrib: float


@dataclass(frozen=True)
class PathRecord:
    """Diagnostic record of one explored path."""

    output: tuple[float, ...]
    kappa: float
    decisions: tuple[Decision, ...]

    @property
    def log_kappa(self) -> float:
        """Sum of log-contributions; stays informative when kappa underflows."""
        total = 0.0
        for d in self.decisions:
            if d.contrib == 0.0:
                return -math.inf
            total += math.log(d.contrib)
        return total


@dataclass(frozen=True)
class SmoothResult:
    value: list  # floats, or ActiveScalars when traced with active inputs
    total_kappa: float
    paths_evaluated: int
    path_records: Optional[tuple[PathRecord, ...]] = None


class MarkerStore:
    """Insertion-ordered condition markers; True = Set, False = Negated."""

    __slots__ = ("_order", "_state")

    def __init__(self):
        self._order: list[int] = []
        self._state: dict[int, bool] = {}

    def __len__(self):
        return len(self._order)

    def get(self, index: int):
        return self._state.get(index)

    def set_marker(self, index: int):
        if self._order and index <= self._order[-1]:
            raise AssertionError("markers must be inserted at increasing condition indices")
        self._order.append(index)
        self._state[index] = True

    def negate_last(self) -> int:
        last = self._order[-1]
        self._state[last] = False
        return last

    def pop_trailing_negated(self):
        while self._order and not self._state[self._order[-1]]:
            self._state.pop(self._order.pop())


class _BaseContext:
    """Comparison surface shared by the tracer and the exhaustive oracle."""

    __slots__ = ("config",)

    def __init__(self, config: TraceConfig):
        self.config = config

    def lt(self, a, b) -> logic.SmoothBool:
        return logic.lt(a, b, self.config.h, self.config.kernel)

    def le(self, a, b) -> logic.SmoothBool:
        return logic.le(a, b, self.config.h, self.config.kernel)

    def gt(self, a, b) -> logic.SmoothBool:
        return logic.gt(a, b, self.config.h, self.config.kernel)

    def ge(self, a, b) -> logic.SmoothBool:
        return logic.ge(a, b, self.config.h, self.config.kernel)

    def eq(self, a, b) -> logic.SmoothBool:
        return logic.eq(a, b, self.config.h, self.config.kernel)


class TraceContext(_BaseContext):
    """Per-trace state: markers persist across paths, the rest resets."""

    __slots__ = ("markers", "_index", "_kappa", "_decisions")

    def __init__(self, config: TraceConfig):
        super().__init__(config)
        self.markers = MarkerStore()
        self._reset_path()

    def _reset_path(self):
        self._index = 0
        self._kappa = 1.0
        self._decisions: list[Decision] = []

    def branch(self, cond: logic.SmoothBool) -> bool:
        if not isinstance(cond, logic.SmoothBool):
            raise TypeError("branch() takes a SmoothBool from ctx comparisons / &,|,~")
        j = self._index
        self._index = j + 1
        if j >= self.config.max_conditions_per_path:
            raise BudgetError(
                f"more than {self.config.max_conditions_per_path} conditions on one path"
            )
        state = self.markers.get(j)
        taken = cond.discrete if state is not False else not cond.discrete
        contrib = cond.prob if taken else 1.0 - cond.prob
        cp = primal(contrib)
        if state is None:
            opposite = 1.0 - cp
            if opposite >= self.config.epsilon and opposite > 0.0:
                self.markers.set_marker(j)
        self._kappa = self._kappa * contrib
        self._decisions.append(Decision(j, taken, cp))
        return taken


def _body_of(program) -> Callable:
    return getattr(program, "body", program)


def _as_outputs(ret) -> list:
    if isinstance(ret, (tuple, list)):
        return list(ret)
    return [ret]


def _run_path(ctx: TraceContext, body: Callable, inputs: Sequence):
    ctx._reset_path()
    raw = _as_outputs(body(ctx, *inputs))
    record = PathRecord(
        output=tuple(primal(v) for v in raw),
        kappa=primal(ctx._kappa),
        decisions=tuple(ctx._decisions),
    )
    return raw, ctx._kappa, record


def evaluate_path(ctx: TraceContext, program, inputs: Sequence) -> PathRecord:
    """Execute one path under the context's current markers."""
    _, _, record = _run_path(ctx, _body_of(program), inputs)
    return record


def _check_replay(prev: PathRecord, cur: list[Decision], flipped_index: int):
    # Pure replay is bitwise deterministic, so contribs must match exactly;
    # comparing only `taken` would miss operand drift within the same branch.
    for p, c in zip(prev.decisions, cur):
        if c.index < flipped_index:
            if c.taken != p.taken or c.contrib != p.contrib:
                raise ReplayError(
                    f"decision at condition {c.index} changed between replays; "
                    "the program is not a pure function of (inputs, decisions)"
                )
        elif c.index == flipped_index:
            if c.taken == p.taken:
                raise ReplayError(
                    f"negated marker at condition {c.index} did not flip the decision"
                )
            return
        else:
            return
    raise ReplayError(
        f"replay ended before reaching flipped condition {flipped_index}"
    )


def trace(program, inputs: Sequence, config: Optional[TraceConfig] = None) -> SmoothResult:
    """Weighted sum of the program over its relevant control-flow paths.

    With float inputs the result values are floats; with ActiveScalar inputs
    the whole sum (path outputs and path weights alike) is recorded on their
    tape, ready to be seeded for reverse-mode differentiation.
    """
    if config is None:
        config = TraceConfig()
    body = _body_of(program)
    ctx = TraceContext(config)
    acc = None
    total_kappa = 0.0
    records: list[PathRecord] = []
    paths = 0
    prev_record = None
    flipped_index = -1
    while True:
        if paths >= config.max_paths:
            raise BudgetError(
                f"more than {config.max_paths} paths",
                paths_evaluated=paths,
                partial_value=None if acc is None else [primal(v) for v in acc],
            )
        raw, kappa, record = _run_path(ctx, body, inputs)
        paths += 1
        if config.check_replay and prev_record is not None:
            _check_replay(prev_record, list(record.decisions), flipped_index)
        terms = [kappa * y for y in raw]
        if acc is None:
            acc = terms
        elif len(terms) != len(acc):
            raise ReplayError("output arity changed between paths")
        else:
            acc = [a + t for a, t in zip(acc, terms)]
        total_kappa += record.kappa
        if config.collect_paths:
            records.append(record)
        prev_record = record
        ctx.markers.pop_trailing_negated()
        if len(ctx.markers) == 0:
            break
        flipped_index = ctx.markers.negate_last()
    return SmoothResult(
        value=acc,
        total_kappa=total_kappa,
        paths_evaluated=paths,
        path_records=tuple(records) if config.collect_paths else None,
    )


class _ForcedContext(_BaseContext):
    """Replays a forced decision prefix, then follows natural branches."""

    __slots__ = ("forced", "_index", "_kappa", "_decisions")

    def __init__(self, config: TraceConfig, forced: Sequence[bool]):
        super().__init__(config)
        self.forced = forced
        self._index = 0
        self._kappa = 1.0
        self._decisions: list[Decision] = []

    def branch(self, cond: logic.SmoothBool) -> bool:
        j = self._index
        self._index = j + 1
        if j >= _ENUM_MAX_CONDITIONS:
            raise BudgetError(
                f"exhaustive enumeration supports at most {_ENUM_MAX_CONDITIONS} "
                "conditions per path"
            )
        taken = self.forced[j] if j < len(self.forced) else cond.discrete
        p = primal(cond.prob)
        contrib = p if taken else 1.0 - p
        self._kappa *= contrib
        self._decisions.append(Decision(j, taken, contrib))
        return taken


def enumerate_all_paths(
    program, inputs: Sequence, config: Optional[TraceConfig] = None
) -> list[PathRecord]:
    """Exhaustive test oracle: every path with positive weight, no pruning.

    Forces both outcomes at every condition regardless of config.epsilon
    (subtrees whose flipped branch has exactly zero weight are skipped; they
    cannot carry value).  Float inputs only; guarded at 20 conditions per
    path, so this is for desk-scale programs.
    """
    if config is None:
        config = TraceConfig()
    body = _body_of(program)
    out: list[PathRecord] = []
    stack: list[list[bool]] = [[]]
    while stack:
        forced = stack.pop()
        ctx = _ForcedContext(config, forced)
        raw = _as_outputs(body(ctx, *inputs))
        decisions = tuple(ctx._decisions)
        out.append(
            PathRecord(
                output=tuple(primal(v) for v in raw),
                kappa=ctx._kappa,
                decisions=decisions,
            )
        )
        for i in range(len(decisions) - 1, len(forced) - 1, -1):
            dec = decisions[i]
            if 1.0 - dec.contrib > 0.0:
                stack.append([d.taken for d in decisions[:i]] + [not dec.taken])
    return out


def compose_then_smooth_vs_smooth_then_compose(
    fg_pair, x, config: Optional[TraceConfig] = None
):
    """Contrast tracing f(g(x)) as one program against composing two traces.

    fg_pair is (outer, inner), each a one-input program.  Returns
    (traced, naive): `traced` smooths the composition (the inner stage's
    branch weights propagate into where the outer stage's boundary is felt),
    `naive` feeds the smoothed inner value into a separately smoothed outer
    stage.  The two agree when at most one condition is active, and split in
    transition regions where the interpolated inner value sweeps across the
    outer boundary.
    """
    outer, inner = fg_pair
    outer_body, inner_body = _body_of(outer), _body_of(inner)

    def composed(ctx, v):
        return outer_body(ctx, inner_body(ctx, v))

    traced = trace(composed, [x], config).value[0]
    inner_value = trace(inner_body, [x], config).value[0]
    naive = trace(outer_body, [inner_value], config).value[0]
    return traced, naive

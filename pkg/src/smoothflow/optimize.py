"""First-order optimization driven by smoothed gradients.

Plain gradient descent and ADAM (exponential moving first/second moments
with bias correction), both as pure step functions plus a harness that runs
them on a traced program and records the full trajectory.  Everything here
is deterministic: same config, same trajectory, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .adjoint import gradient
from .tracer import TraceConfig, trace


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "adam"  # "gd" | "adam"
    learning_rate: float = 0.02
    steps: int = 300
    beta1: float = 0.9
    beta2: float = 0.999
    delta: float = 1e-8  # ADAM stability constant
    start: Optional[tuple] = None  # falls back to the program's recommended start

    def __post_init__(self):
        if self.method not in ("gd", "adam"):
            raise ValueError(f"method must be 'gd' or 'adam', got {self.method!r}")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in [0, 1)")
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")


def gd_step(x: np.ndarray, grad: np.ndarray, learning_rate: float) -> np.ndarray:
    return x - learning_rate * grad


@dataclass(frozen=True)
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, dim: int) -> "AdamState":
        return cls(np.zeros(dim), np.zeros(dim), 0)


def adam_step(
    state: AdamState, x: np.ndarray, grad: np.ndarray, config: OptimizerConfig
):
    """One bias-corrected ADAM update; returns (new_state, new_x)."""
    t = state.t + 1
    m = config.beta1 * state.m + (1.0 - config.beta1) * grad
    v = config.beta2 * state.v + (1.0 - config.beta2) * grad * grad
    m_hat = m / (1.0 - config.beta1**t)
    v_hat = v / (1.0 - config.beta2**t)
    new_x = x - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.delta)
    return AdamState(m, v, t), new_x


class TrajectoryPoint(NamedTuple):
    x: tuple
    objective: float
    gradient_norm: float


@dataclass
class Trajectory:
    points: list[TrajectoryPoint] = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    @property
    def final_x(self) -> tuple:
        return self.points[-1].x

    @property
    def final_objective(self) -> float:
        return self.points[-1].objective

    def objective_after(self, steps: int) -> float:
        return self.points[steps].objective


def run_optimization(
    program,
    opt_config: OptimizerConfig,
    trace_config: Optional[TraceConfig] = None,
) -> Trajectory:
    """Minimize the smoothed scalar output of a program.

    The trajectory holds steps + 1 points: the start and every iterate after
    it, each with the smoothed objective and gradient norm at that iterate
    (at h = inf the objective is the exact discrete value and the recorded
    gradient differentiates only the active path).
    """
    start = opt_config.start
    if start is None:
        start = getattr(program, "recommended_start", None)
    if start is None:
        raise ValueError("no start point: set OptimizerConfig.start")
    x = np.asarray(start, dtype=np.float64)
    traj = Trajectory()
    adam = AdamState.zeros(x.shape[0])
    for step in range(opt_config.steps + 1):
        value, grad = gradient(program, x, trace_config)
        if len(value) != 1:
            raise ValueError("run_optimization needs a scalar-output program")
        traj.points.append(
            TrajectoryPoint(tuple(x), value[0], float(np.linalg.norm(grad)))
        )
        if step == opt_config.steps:
            break
        if opt_config.method == "gd":
            x = gd_step(x, grad, opt_config.learning_rate)
        else:
            adam, x = adam_step(adam, x, grad, opt_config)
    return traj


def discrete_objective(program, x: Sequence, trace_config: Optional[TraceConfig] = None) -> float:
    """Exact discrete program value at x (single path, h = inf)."""
    base = trace_config if trace_config is not None else TraceConfig()
    cfg = replace(base, h=np.inf, collect_paths=False)
    return trace(program, list(x), cfg).value[0]


def sweep(
    program,
    h_values: Sequence[float],
    step_counts: Sequence[int],
    opt_config: OptimizerConfig,
    trace_config: Optional[TraceConfig] = None,
):
    """Final objectives for every (h, steps) cell, plus each h-row's trajectory.

    The optimizer is deterministic, so the run at max(steps) contains every
    shorter run of the same h as a prefix; each row is computed once and the
    cells are read off the trajectory.  Returns (matrix, trajectories) where
    matrix[i][j] is the objective after step_counts[j] steps at h_values[i].
    """
    base = trace_config if trace_config is not None else TraceConfig()
    most = max(step_counts)
    matrix: list[list[float]] = []
    trajectories: list[Trajectory] = []
    for h in h_values:
        cfg = replace(base, h=h, collect_paths=False)
        row_opt = replace(opt_config, steps=most)
        traj = run_optimization(program, row_opt, cfg)
        matrix.append([traj.objective_after(s) for s in step_counts])
        trajectories.append(traj)
    return matrix, trajectories

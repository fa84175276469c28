"""smoothflow: evaluate branchy programs as smooth, differentiable path sums.

Discrete control flow makes a program's output piecewise and its gradient
useless across the pieces.  This package replaces every branch outcome with
a kernel-weighted pair of contributions, traces the relevant control-flow
paths by deterministic replay with pruning, and returns the weighted sum -
a smooth interpolation whose exact reverse-mode gradient is available via an
adjoint tape.  A small optimizer harness (GD/ADAM) runs on top.
"""

from .adjoint import ActiveScalar, Tape, gradient, primal
from .errors import BudgetError, ReplayError
from .kernel import INFINITE, KernelKind, contrib_density, contrib_true
from .logic import SmoothBool
from .optimize import (
    AdamState,
    OptimizerConfig,
    Trajectory,
    TrajectoryPoint,
    adam_step,
    discrete_objective,
    gd_step,
    run_optimization,
    sweep,
)
from .programs import PROGRAMS, ProgramSpec, get_program
from .tracer import (
    Decision,
    MarkerStore,
    PathRecord,
    SmoothResult,
    TraceConfig,
    TraceContext,
    compose_then_smooth_vs_smooth_then_compose,
    enumerate_all_paths,
    evaluate_path,
    trace,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveScalar",
    "AdamState",
    "BudgetError",
    "Decision",
    "INFINITE",
    "KernelKind",
    "MarkerStore",
    "OptimizerConfig",
    "PROGRAMS",
    "PathRecord",
    "ProgramSpec",
    "ReplayError",
    "SmoothBool",
    "SmoothResult",
    "Tape",
    "TraceConfig",
    "TraceContext",
    "Trajectory",
    "TrajectoryPoint",
    "adam_step",
    "compose_then_smooth_vs_smooth_then_compose",
    "contrib_density",
    "contrib_true",
    "discrete_objective",
    "enumerate_all_paths",
    "evaluate_path",
    "gd_step",
    "get_program",
    "gradient",
    "primal",
    "run_optimization",
    "sweep",
    "trace",
    "__version__",
]

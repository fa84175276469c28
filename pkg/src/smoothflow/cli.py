"""Command-line runner for tracing, path dumps, gradient fields, optimization.

Usage examples:

    smoothflow eval --program two_cuts --input 0,0 --h 1
    smoothflow paths --program two_cuts --input 0,0 --h 1 --eps 0.4
    smoothflow field --program plateaus --h 5 --x1-min -2.5 --x1-max 2.5 \\
        --x2-min -2.5 --x2-max 2.5 --resolution 41 --out field.csv
    smoothflow optimize --program crescent --method adam --h 100 --steps 300 \\
        --out traj.csv
    smoothflow optimize --program crescent --sweep-h 10,50,100,inf \\
        --sweep-steps 200,500,1000 --out matrix.csv --traj-dir runs/

`--h inf` selects exact discrete evaluation.  A JSON file passed via
--config supplies any of the long flag names (underscored); explicit flags
win.  CSV output uses comma separators, `.` decimals and LF line endings,
and reruns of the same command are byte-identical.  Nothing is written on
invalid configuration.

Exit codes: 0 success, 2 usage/config error, 3 resource budget exceeded,
4 numeric error while evaluating.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

from .adjoint import gradient
from .errors import BudgetError
from .kernel import KernelKind
from .optimize import OptimizerConfig, discrete_objective, run_optimization, sweep
from .programs import get_program
from .tracer import TraceConfig, trace

USAGE_EXIT = 2
BUDGET_EXIT = 3
NUMERIC_EXIT = 4


class UsageError(Exception):
    pass


def _parse_floats(text, *, name):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError:
        raise UsageError(f"could not parse {name} {text!r} as comma-separated floats") from None


def _parse_ints(text, *, name):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError:
        raise UsageError(f"could not parse {name} {text!r} as comma-separated integers") from None


def _as_float(v, *, name) -> float:
    try:
        return float(v)
    except (TypeError, ValueError):
        raise UsageError(f"{name} expects a float, got {v!r}") from None


def _as_int(v, *, name) -> int:
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"{name} expects an integer, got {v!r}") from None


def _get_program(s: "Settings"):
    try:
        return get_program(str(s.require("program")))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _fmt(v) -> str:
    f = float(v)
    if math.isinf(f):
        return "inf" if f > 0 else "-inf"
    return repr(f)


def _add_trace_flags(p: argparse.ArgumentParser):
    p.add_argument("--program", help="program name from the corpus")
    p.add_argument("--h", dest="h", help="sharpness; positive float or 'inf'")
    p.add_argument("--eps", dest="eps", help="pruning threshold in [0, 0.5)")
    p.add_argument("--kernel", choices=[k.value for k in KernelKind], help="smoothing kernel")
    p.add_argument("--max-paths", dest="max_paths", help="path budget per trace")
    p.add_argument("--max-conditions", dest="max_conditions", help="condition budget per path")
    p.add_argument("--config", help="JSON file with defaults for any long flag")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothflow",
        description="evaluate, differentiate and optimize branchy programs "
        "as smooth interpolations over their control-flow paths",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="trace one input, print value and path stats")
    _add_trace_flags(p_eval)
    p_eval.add_argument("--input", help="comma-separated input point")

    p_paths = sub.add_parser("paths", help="dump per-path records as JSONL")
    _add_trace_flags(p_paths)
    p_paths.add_argument("--input", help="comma-separated input point")
    p_paths.add_argument("--out", help="output file (default stdout)")

    p_field = sub.add_parser("field", help="value/gradient grid as CSV (2-input programs)")
    _add_trace_flags(p_field)
    p_field.add_argument("--x1-min", dest="x1_min")
    p_field.add_argument("--x1-max", dest="x1_max")
    p_field.add_argument("--x2-min", dest="x2_min")
    p_field.add_argument("--x2-max", dest="x2_max")
    p_field.add_argument("--resolution", help="grid points per axis (>= 2)")
    p_field.add_argument("--out", help="output file (default stdout)")

    p_opt = sub.add_parser("optimize", help="run GD/ADAM on the smoothed objective")
    _add_trace_flags(p_opt)
    p_opt.add_argument("--method", choices=["gd", "adam"])
    p_opt.add_argument("--lr", help="learning rate")
    p_opt.add_argument("--steps", help="number of optimizer steps")
    p_opt.add_argument("--start", help="comma-separated start point")
    p_opt.add_argument("--sweep-h", dest="sweep_h", help="comma-separated sharpness row values")
    p_opt.add_argument("--sweep-steps", dest="sweep_steps", help="comma-separated step columns")
    p_opt.add_argument("--out", help="output file (default stdout)")
    p_opt.add_argument("--traj-dir", dest="traj_dir", help="directory for per-run trajectories")
    p_opt.add_argument(
        "--report-discrete",
        action="store_true",
        default=None,
        help="include the exact discrete objective at the final iterate",
    )
    return parser


class Settings:
    """Flag values merged over --config file values merged over defaults."""

    def __init__(self, args: argparse.Namespace):
        self._args = vars(args)
        self._file = {}
        path = self._args.get("config")
        if path:
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    self._file = json.load(fh)
            except (OSError, json.JSONDecodeError) as e:
                raise UsageError(f"cannot read config {path!r}: {e}") from None
            if not isinstance(self._file, dict):
                raise UsageError("config file must hold a JSON object")
            unknown = set(self._file) - set(self._args)
            if unknown:
                raise UsageError(f"config keys not recognized: {sorted(unknown)}")

    def get(self, key, default=None):
        v = self._args.get(key)
        if v is None:
            v = self._file.get(key)
        return default if v is None else v

    def require(self, key):
        v = self.get(key)
        if v is None:
            raise UsageError(f"missing required option --{key.replace('_', '-')}")
        return v


def _trace_config(s: Settings, collect_paths=False) -> TraceConfig:
    try:
        return TraceConfig(
            h=_as_float(s.get("h", 1.0), name="--h"),
            kernel=KernelKind(str(s.get("kernel", KernelKind.LOGISTIC.value))),
            epsilon=_as_float(s.get("eps", 1e-16), name="--eps"),
            max_paths=_as_int(s.get("max_paths", 1 << 16), name="--max-paths"),
            max_conditions_per_path=_as_int(s.get("max_conditions", 1 << 14), name="--max-conditions"),
            collect_paths=collect_paths,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _program_and_input(s: Settings):
    prog = _get_program(s)
    point = _parse_floats(s.require("input"), name="--input")
    if len(point) != prog.arity:
        raise UsageError(f"program {prog.name!r} takes {prog.arity} inputs, got {len(point)}")
    return prog, point


def _emit(text: str, out_path):
    # Built fully in memory first: an error anywhere leaves no partial file.
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(s: Settings) -> int:
    prog, point = _program_and_input(s)
    cfg = _trace_config(s)
    result = trace(prog, point, cfg)
    print(
        json.dumps(
            {
                "value": [float(v) for v in result.value],
                "total_kappa": result.total_kappa,
                "paths_evaluated": result.paths_evaluated,
            }
        )
    )
    return 0


def cmd_paths(s: Settings) -> int:
    prog, point = _program_and_input(s)
    cfg = _trace_config(s, collect_paths=True)
    result = trace(prog, point, cfg)
    lines = []
    for rec in result.path_records:
        lines.append(
            json.dumps(
                {
                    "kappa": rec.kappa,
                    "output": list(rec.output),
                    "decisions": [
                        {"index": d.index, "taken": d.taken, "contrib": d.contrib}
                        for d in rec.decisions
                    ],
                }
            )
        )
    lines.append(
        json.dumps(
            {"paths_evaluated": result.paths_evaluated, "total_kappa": result.total_kappa}
        )
    )
    _emit("\n".join(lines) + "\n", s.get("out"))
    return 0


def cmd_field(s: Settings) -> int:
    prog = _get_program(s)
    if prog.arity != 2:
        raise UsageError(f"field needs a 2-input program, {prog.name!r} takes {prog.arity}")
    cfg = _trace_config(s)
    res = _as_int(s.require("resolution"), name="--resolution")
    if res < 2:
        raise UsageError("resolution must be at least 2")
    x1_min = _as_float(s.require("x1_min"), name="--x1-min")
    x1_max = _as_float(s.require("x1_max"), name="--x1-max")
    x2_min = _as_float(s.require("x2_min"), name="--x2-min")
    x2_max = _as_float(s.require("x2_max"), name="--x2-max")
    if not (x1_min < x1_max and x2_min < x2_max):
        raise UsageError("grid bounds must satisfy min < max on both axes")

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x1", "x2", "value", "dv_dx1", "dv_dx2", "paths"])
    for i in range(res):
        x1 = x1_min + (x1_max - x1_min) * i / (res - 1)
        for j in range(res):
            x2 = x2_min + (x2_max - x2_min) * j / (res - 1)
            value, grad, result = gradient(prog, (x1, x2), cfg, with_result=True)
            w.writerow(
                [
                    _fmt(x1),
                    _fmt(x2),
                    _fmt(value[0]),
                    _fmt(grad[0]),
                    _fmt(grad[1]),
                    result.paths_evaluated,
                ]
            )
    _emit(buf.getvalue(), s.get("out"))
    return 0


def _trajectory_csv(traj, arity: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iter"] + [f"x{i + 1}" for i in range(arity)] + ["objective", "grad_norm"])
    for k, pt in enumerate(traj.points):
        w.writerow([k] + [_fmt(v) for v in pt.x] + [_fmt(pt.objective), _fmt(pt.gradient_norm)])
    return buf.getvalue()


def _h_tag(h: float) -> str:
    if math.isinf(h):
        return "inf"
    return repr(h).replace(".", "p")


def cmd_optimize(s: Settings) -> int:
    prog = _get_program(s)
    cfg = _trace_config(s)
    start = s.get("start")
    try:
        opt = OptimizerConfig(
            method=str(s.get("method", "adam")),
            learning_rate=_as_float(s.get("lr", 0.02), name="--lr"),
            steps=_as_int(s.get("steps", 300), name="--steps"),
            start=tuple(_parse_floats(start, name="--start")) if start is not None else None,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    if opt.start is None and prog.recommended_start is None:
        raise UsageError(f"program {prog.name!r} has no default start; pass --start")
    if opt.start is not None and len(opt.start) != prog.arity:
        raise UsageError(f"--start needs {prog.arity} coordinates for {prog.name!r}")

    sweep_h = s.get("sweep_h")
    sweep_steps = s.get("sweep_steps")
    if (sweep_h is None) != (sweep_steps is None):
        raise UsageError("--sweep-h and --sweep-steps go together")

    if sweep_h is None:
        traj = run_optimization(prog, opt, cfg)
        _emit(_trajectory_csv(traj, prog.arity), s.get("out"))
        if s.get("out"):
            summary = {
                "final_x": [float(v) for v in traj.final_x],
                "final_objective": traj.final_objective,
                "steps": opt.steps,
            }
            if s.get("report_discrete"):
                summary["final_discrete_objective"] = discrete_objective(
                    prog, traj.final_x, cfg
                )
            print(json.dumps(summary))
        return 0

    h_values = _parse_floats(sweep_h, name="--sweep-h")
    step_counts = _parse_ints(sweep_steps, name="--sweep-steps")
    if any(v <= 0 for v in h_values):
        raise UsageError("--sweep-h values must be positive (or inf)")
    if any(v < 0 for v in step_counts):
        raise UsageError("--sweep-steps values must be non-negative")
    matrix, trajectories = sweep(prog, h_values, step_counts, opt, cfg)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["h"] + [str(sc) for sc in step_counts])
    for h, row in zip(h_values, matrix):
        w.writerow([_fmt(h)] + [_fmt(v) for v in row])
    traj_dir = s.get("traj_dir")
    if traj_dir:
        os.makedirs(traj_dir, exist_ok=True)
    _emit(buf.getvalue(), s.get("out"))
    if traj_dir:
        for h, traj in zip(h_values, trajectories):
            path = os.path.join(traj_dir, f"traj_h{_h_tag(h)}.csv")
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(_trajectory_csv(traj, prog.arity))
    return 0


_COMMANDS = {
    "eval": cmd_eval,
    "paths": cmd_paths,
    "field": cmd_field,
    "optimize": cmd_optimize,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = Settings(args)
        return _COMMANDS[args.command](settings)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_EXIT
    except BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return BUDGET_EXIT
    except (ValueError, ZeroDivisionError, OverflowError, FloatingPointError) as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())

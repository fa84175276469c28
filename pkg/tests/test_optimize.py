"""Optimizer steps, trajectory harness, and the (h, steps) sweep."""

import math

import numpy as np
import pytest

from smoothflow import (
    AdamState,
    OptimizerConfig,
    TraceConfig,
    adam_step,
    discrete_objective,
    gd_step,
    get_program,
    run_optimization,
    sweep,
)


def test_gd_step_values():
    x = gd_step(np.array([1.0, 1.0]), np.array([2.0, -4.0]), 0.5)
    assert x.tolist() == [0.0, 3.0]
    # zero gradient is a fixed point
    same = gd_step(np.array([0.7, -0.2]), np.zeros(2), 0.5)
    assert same.tolist() == [0.7, -0.2]


def test_gd_on_smoothed_step_program():
    cfg = OptimizerConfig(method="gd", learning_rate=1.0, steps=1, start=(0.0,))
    traj = run_optimization(get_program("step"), cfg, TraceConfig(h=1.0))
    # smoothed jump has slope 1/4 at the boundary, so one unit step moves -0.25
    assert abs(traj.final_x[0] + 0.25) <= 1e-12
    assert traj.points[0].objective == 0.5


def test_adam_first_step_saturates_to_learning_rate():
    state = AdamState.zeros(2)
    cfg = OptimizerConfig()
    state, x = adam_step(state, np.zeros(2), np.array([1.0, 0.0]), cfg)
    # bias correction makes m_hat = g and v_hat = g^2 on step one, so the
    # move is lr * g / (|g| + delta): the learning rate, up to delta
    assert abs(x[0] + cfg.learning_rate) <= 1e-9
    assert x[1] == 0.0
    assert state.t == 1
    assert state.m.tolist() == [(1.0 - cfg.beta1) * 1.0, 0.0]
    assert state.v.tolist() == [(1.0 - cfg.beta2) * 1.0, 0.0]
    state, x = adam_step(state, x, np.array([1.0, 0.0]), cfg)
    assert abs(x[0] + 2.0 * cfg.learning_rate) <= 1e-8


def test_adam_zero_gradient_is_fixed_point():
    state = AdamState.zeros(2)
    x0 = np.array([0.3, -0.4])
    state, x = adam_step(state, x0, np.zeros(2), OptimizerConfig())
    assert x.tolist() == x0.tolist()
    assert state.m.tolist() == [0.0, 0.0] and state.v.tolist() == [0.0, 0.0]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(method="sgd"),
        dict(learning_rate=0.0),
        dict(learning_rate=-0.1),
        dict(steps=-1),
        dict(beta1=1.0),
        dict(beta2=-0.1),
        dict(delta=0.0),
    ],
)
def test_optimizer_config_rejects(kwargs):
    with pytest.raises(ValueError):
        OptimizerConfig(**kwargs)


def test_gd_descends_on_quadratic():
    cfg = OptimizerConfig(method="gd", learning_rate=0.1, steps=50)
    traj = run_optimization(get_program("quad"), cfg)  # recommended start (3, 3)
    objs = [p.objective for p in traj.points]
    assert objs[0] == 16.25
    assert all(b <= a for a, b in zip(objs, objs[1:]))
    assert traj.final_objective < 1e-8


def test_adam_displacement_bounded_by_learning_rate():
    cfg = OptimizerConfig(steps=50)
    traj = run_optimization(get_program("crescent"), cfg, TraceConfig(h=10.0))
    for a, b in zip(traj.points, traj.points[1:]):
        for ai, bi in zip(a.x, b.x):
            assert abs(bi - ai) <= cfg.learning_rate * (1.0 + 1e-6)
    assert traj.final_objective < traj.points[0].objective


def test_trajectory_shape_and_reproducibility():
    cfg = OptimizerConfig(steps=20, start=(0.5, -0.5))
    t1 = run_optimization(get_program("crescent"), cfg, TraceConfig(h=5.0))
    t2 = run_optimization(get_program("crescent"), cfg, TraceConfig(h=5.0))
    assert len(t1) == 21
    assert t1.points[0].x == (0.5, -0.5)
    assert t1.objective_after(0) == t1.points[0].objective
    assert t1.points == t2.points  # bitwise: same floats, same tuples


def test_run_optimization_requires_a_start():
    with pytest.raises(ValueError):
        run_optimization(get_program("step"), OptimizerConfig())


def test_discrete_objective():
    assert discrete_objective(get_program("crescent"), (0.0, 1.0)) == 2.0
    # any finite-h trace config is overridden to the exact limit
    assert discrete_objective(get_program("crescent"), (0.0, 1.0), TraceConfig(h=1.0)) == 2.0


def test_sweep_cells_match_independent_runs():
    prog = get_program("quad")
    opt = OptimizerConfig(steps=1, start=(3.0, 3.0))
    matrix, trajs = sweep(prog, [1.0, math.inf], [2, 5], opt)
    assert len(matrix) == 2 and all(len(row) == 2 for row in matrix)
    assert all(len(t) == 6 for t in trajs)
    # prefix sharing must be invisible: cells equal standalone runs, bitwise
    for i, h in enumerate([1.0, math.inf]):
        for j, steps in enumerate([2, 5]):
            alone = run_optimization(prog, OptimizerConfig(steps=steps, start=(3.0, 3.0)),
                                     TraceConfig(h=h))
            assert matrix[i][j] == alone.final_objective


def test_exact_mode_sees_flat_plateaus():
    cfg = OptimizerConfig(steps=5)
    traj = run_optimization(get_program("plateaus"), cfg, TraceConfig(h=math.inf))
    # the discrete program is piecewise constant: zero gradient, no movement
    assert all(p.gradient_norm == 0.0 for p in traj.points)
    assert all(p.x == (1.8, -1.8) for p in traj.points)
    assert all(p.objective == 2.0 for p in traj.points)

"""Time the adjoint reverse sweep: numba kernel vs pure-Python fallback.

Two layers: the raw sweep loop on synthetic tapes of growing size, and an
end-to-end gradient of a corpus program at moderate sharpness (tape build
plus sweep).  Both backends run the identical loop body, so this measures
compilation payoff only.  Run:

    python3 benchmarks/bench_sweep.py --sizes 1e3,1e4,1e5,1e6 --repeats 5
"""

import argparse
import time

import numpy as np

from smoothflow import TraceConfig, get_program, gradient
from smoothflow._sweep import get_sweep


def synthetic_tape(n: int, rng: np.random.Generator):
    """Arrays shaped like a real tape: each entry reads earlier entries."""
    lhs = np.empty(n, dtype=np.int64)
    rhs = np.empty(n, dtype=np.int64)
    lhs[0] = rhs[0] = -1
    for i in range(1, n):
        lhs[i] = rng.integers(0, i)
        rhs[i] = rng.integers(0, i) if rng.random() < 0.7 else -1
    pl = rng.normal(0.0, 1.0, size=n)
    pr = rng.normal(0.0, 1.0, size=n)
    # keep adjoints bounded: scale partials so products stay near unity
    pl *= 0.5
    pr *= 0.5
    adj = np.zeros(n)
    adj[-1] = 1.0
    return lhs, rhs, pl, pr, adj


def time_sweep(fn, arrays, repeats: int) -> float:
    lhs, rhs, pl, pr, adj0 = arrays
    best = float("inf")
    for _ in range(repeats):
        adj = adj0.copy()
        t0 = time.perf_counter()
        fn(lhs, rhs, pl, pr, adj)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_raw(sizes, repeats: int):
    rng = np.random.default_rng(13)
    py = get_sweep("python")
    nb = get_sweep("numba")
    nb(*synthetic_tape(16, rng))  # trigger compilation outside the timings
    print(f"{'tape entries':>14} {'python':>12} {'numba':>12} {'speedup':>9}")
    for n in sizes:
        arrays = synthetic_tape(n, rng)
        t_py = time_sweep(py, arrays, repeats)
        t_nb = time_sweep(nb, arrays, repeats)
        check_py, check_nb = arrays[4].copy(), arrays[4].copy()
        py(arrays[0], arrays[1], arrays[2], arrays[3], check_py)
        nb(arrays[0], arrays[1], arrays[2], arrays[3], check_nb)
        agree = "" if np.array_equal(check_py, check_nb) else "  MISMATCH"
        print(f"{n:>14d} {t_py * 1e3:>10.3f}ms {t_nb * 1e3:>10.3f}ms {t_py / t_nb:>8.1f}x{agree}")


def bench_gradient(repeats: int):
    prog = get_program("crescent")
    cfg = TraceConfig(h=10.0)
    x = (-1.5, 2.0)
    gradient(prog, x, cfg, backend="numba")  # warm the compile cache
    print(f"\n{'end-to-end gradient':>30} {'best of ' + str(repeats):>14}")
    times = {}
    for backend in ("python", "numba"):
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            gradient(prog, x, cfg, backend=backend)
            best = min(best, time.perf_counter() - t0)
        times[backend] = best
        print(f"{'crescent h=10 [' + backend + ']':>30} {best * 1e6:>12.1f}us")
    print(f"{'sweep share is small here:':>30} {times['python'] / times['numba']:>11.2f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1e3,1e4,1e5,1e6",
                    help="comma-separated tape sizes for the raw sweep")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats, best kept")
    ap.add_argument("--skip-gradient", action="store_true",
                    help="only run the raw sweep comparison")
    args = ap.parse_args()
    sizes = [int(float(tok)) for tok in args.sizes.split(",") if tok.strip()]
    bench_raw(sizes, args.repeats)
    if not args.skip_gradient:
        bench_gradient(args.repeats)


if __name__ == "__main__":
    main()

"""Reverse-sweep backends for the adjoint tape.

Two implementations of the same loop over the same numpy arrays: a numba
@njit kernel and a plain Python fallback.  The sweep accumulates adjoints
strictly backward (a loop-carried dependency), so there is no vectorized
numpy formulation; the fallback is the literal loop.

Selection: SMOOTHFLOW_NUMBA=0 forces the Python loop, SMOOTHFLOW_NUMBA=1
forces numba, unset means numba when importable.  See
benchmarks/bench_sweep.py for a timing comparison.
"""

import os


def sweep_python(lhs, rhs, pl, pr, adj):
    # adj[i] is the adjoint of the value produced by tape entry i; entries
    # with lhs/rhs < 0 have no recorded parent on that side.
    for i in range(lhs.shape[0] - 1, -1, -1):
        a = adj[i]
        if a != 0.0:
            l = lhs[i]
            if l >= 0:
                adj[l] += pl[i] * a
            r = rhs[i]
            if r >= 0:
                adj[r] += pr[i] * a


_sweep_numba = None


def _compile_numba():
    global _sweep_numba
    if _sweep_numba is None:
        from numba import njit

        # Same source as sweep_python; numba compiles the identical loop, so
        # both backends produce bit-for-bit equal adjoints.
        _sweep_numba = njit(cache=True)(sweep_python)
    return _sweep_numba


def _default_backend() -> str:
    flag = os.environ.get("SMOOTHFLOW_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return "python"
    if flag in ("1", "true", "on", "yes"):
        return "numba"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "python"
    return "numba"


DEFAULT_BACKEND = _default_backend()


def get_sweep(backend=None):
    name = backend if backend is not None else DEFAULT_BACKEND
    if name == "numba":
        return _compile_numba()
    if name == "python":
        return sweep_python
    raise ValueError(f"unknown sweep backend {name!r} (expected 'numba' or 'python')")

"""Kernel backend selection: numba-jitted hot loops with a pure-Python/numpy fallback.

The backend is chosen once at import time from the ``GRANUFLOW_BACKEND``
environment variable:

* ``numba`` (default when numba is importable): hot kernels are compiled
  with ``numba.njit(cache=True)``.
* ``numpy``: the same kernel functions run as plain Python over numpy
  arrays. Slow, but dependency-free and algorithmically identical, which is
  what the equivalence tests and ``benchmarks/bench_kernels.py`` rely on.
"""

from __future__ import annotations

import os

_requested = os.environ.get("GRANUFLOW_BACKEND", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"GRANUFLOW_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

NUMBA_ENABLED = False
if _requested in ("", "numba"):
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:
        if _requested == "numba":
            raise
        NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def jit(func):
    """Compile ``func`` with numba when enabled, otherwise return it unchanged.

    Kernels decorated with this must be written in nopython-compatible style
    (typed loops over contiguous float64/int arrays, no Python objects).
    """
    if NUMBA_ENABLED:
        return numba.njit(func, cache=True, fastmath=False)
    return func

"""Kernel backend selection: numba-jitted loops or pure-numpy fallback.

Set ``SMELLSTAB_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``)
to force the numpy path; the two paths are numerically interchangeable and
both deterministic.  ``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os


def _env_disabled() -> bool:
    return os.environ.get("SMELLSTAB_DISABLE_NUMBA", "") == "1" or os.environ.get(
        "NUMBA_DISABLE_JIT", ""
    ) == "1"


try:
    import numba as _numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """numba.njit when active, identity decorator otherwise."""
    if USE_NUMBA:
        return _numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]

    def decorator(func):
        return func

    return decorator

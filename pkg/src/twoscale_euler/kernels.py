"""Backend selection for the hot stepping kernels.

The compiled extension (_speedups, Cython) is used when it imported
successfully; otherwise the numpy fallback takes over.  Set
TWOSCALE_EULER_BACKEND=python to force the fallback, e.g. for the
benchmark in benchmarks/bench_kernels.py.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("TWOSCALE_EULER_BACKEND", "").lower() not in ("python", "py"):
    try:
        from . import _speedups as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        pass


def get_backend(name=None):
    """Return the kernel module for `name` ('python', 'cython', or None for
    the active backend)."""
    if name is None:
        return _impl
    if name in ("python", "py"):
        return _kernels_py
    if name == "cython":
        from . import _speedups

        return _speedups
    raise ValueError(f"unknown kernel backend {name!r}")


def scalar_roe_step(q, alpha, beta, k_over_h):
    return _impl.scalar_roe_step(q, alpha, beta, k_over_h)


def scalar_max_speed(q, alpha, beta):
    return _impl.scalar_max_speed(q, alpha, beta)


def direct_roe_step(density, momentum, mach, gamma, k_over_h):
    return _impl.direct_roe_step(density, momentum, mach, gamma, k_over_h)


def direct_max_speed(density, momentum, mach, gamma):
    return _impl.direct_max_speed(density, momentum, mach, gamma)

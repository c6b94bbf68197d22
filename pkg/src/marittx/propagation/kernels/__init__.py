"""Backend dispatch for the hot simulation kernels.

Two interchangeable implementations of the step loops exist: a numba
``@njit``-compiled backend and a pure-numpy fallback. Selection order:

1. ``set_backend("numba"|"numpy")`` at runtime (tests, benchmarks);
2. the ``MARITTX_BACKEND`` environment variable (``numba``, ``numpy`` or
   ``auto``);
3. ``auto``: numba when importable, else numpy.

Both backends implement the same contracts:

``meanfield_run(y0, W, r, dts) -> (states, status, bad_step)``
    RK4 over per-node occupancy fractions. ``y0`` is (n, 6), ``W`` the contact
    matrix, ``r`` the parameter vector in KERNEL_ORDER, ``dts`` the per-step
    step sizes. ``states`` is (len(dts)+1, n, 6) including the initial state.
    status: 0 ok, 1 non-finite, 2 negative beyond tolerance, 3 conservation
    broken; ``bad_step`` is the offending step index (-1 when ok).

``agent_run_ensemble(labels0, W, r, dts, seeds, step0, record_steps) -> labels``
    Discrete per-node sampling for ``len(seeds)`` independent runs. Uniform
    draws come from the shared counter RNG with counter
    ``(step0 + step) * n + node``. ``record_steps`` is a sorted int64 array of
    step indices to record (0 = the initial state); returns
    (runs, len(record_steps), n) int8 labels.
"""

import os

_ENV_VAR = "MARITTX_BACKEND"

_active_name: str | None = None
_active_module = None


class KernelBackendError(RuntimeError):
    """Raised when the requested kernel backend cannot be loaded."""


def _load(name: str):
    if name == "numpy":
        from . import numpy_backend
        return numpy_backend
    if name == "numba":
        from . import numba_backend
        return numba_backend
    raise KernelBackendError(f"unknown kernel backend: {name!r} (use 'numba' or 'numpy')")


def _resolve(name: str):
    if name == "auto":
        try:
            return "numba", _load("numba")
        except Exception:
            return "numpy", _load("numpy")
    try:
        return name, _load(name)
    except ImportError as exc:
        raise KernelBackendError(f"kernel backend {name!r} unavailable: {exc}") from exc


def active_backend() -> str:
    """Name of the backend in use ('numba' or 'numpy')."""
    global _active_name, _active_module
    if _active_module is None:
        requested = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
        _active_name, _active_module = _resolve(requested)
    return _active_name


def set_backend(name: str) -> str:
    """Force a backend at runtime; returns the active backend name."""
    global _active_name, _active_module
    _active_name, _active_module = _resolve(name.strip().lower())
    return _active_name


def _module():
    active_backend()
    return _active_module


def meanfield_run(y0, W, r, dts):
    return _module().meanfield_run(y0, W, r, dts)


def agent_run_ensemble(labels0, W, r, dts, seeds, step0, record_steps):
    return _module().agent_run_ensemble(labels0, W, r, dts, seeds, step0, record_steps)

import pytest

from marittx.propagation import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Pay the one-time JIT cost before any timed assertion runs.
    if kernels.active_backend() == "numba":
        from marittx.propagation.kernels import numba_backend

        numba_backend.warm_up()
    yield


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    """Run a test under each kernel backend, restoring the default after."""
    previous = kernels.active_backend()
    try:
        kernels.set_backend(request.param)
    except kernels.KernelBackendError:
        pytest.skip(f"backend {request.param} unavailable")
    yield request.param
    kernels.set_backend(previous)

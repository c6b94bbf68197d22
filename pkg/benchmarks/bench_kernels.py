#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Workloads mirror the hot paths: a long mean-field run on the bundled 12-node
network and a seeded agent ensemble on the 2-node oracle configuration.

    python benchmarks/bench_kernels.py [--repeats 3]
"""

import argparse
import time

import numpy as np

from marittx.propagation import (
    CompartmentState,
    Mode,
    PropagationParams,
    build_topology,
    run_agent_ensemble,
    simulate,
)
from marittx.propagation import kernels
from marittx.scenario import load_bundled


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def meanfield_workload():
    scenario = load_bundled()
    initial = scenario.initial_state(Mode.MEAN_FIELD)

    def run():
        simulate(scenario.topology, scenario.base_params, horizon=500.0,
                 mode=Mode.MEAN_FIELD, initial_state=initial, dt=0.05)

    return "mean-field 12 nodes x 10,000 steps", run


def agent_workload():
    topo = build_topology([{"id": "n1"}, {"id": "n2"}], [("n1", "n2", 1.0)])
    params = PropagationParams(beta=0.4, sigma=0.5, upsilon=0.2, rho=0.1, kappa_e=0.0)
    initial = CompartmentState.agent([1, 0])
    seeds = np.arange(1, 2001)

    def run():
        run_agent_ensemble(topo, params, initial, 48.0, 0.01, seeds, [24.0, 48.0])

    return "agent ensemble 2 nodes x 4,800 steps x 2,000 seeds", run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    workloads = [meanfield_workload(), agent_workload()]
    results = {}
    for backend in ("numba", "numpy"):
        try:
            kernels.set_backend(backend)
        except kernels.KernelBackendError as exc:
            print(f"{backend}: unavailable ({exc})")
            continue
        for label, run in workloads:
            run()  # warm-up (JIT compile / cache load)
            results[(backend, label)] = timeit(run, args.repeats)

    print(f"\n{'workload':<55} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for label, _ in workloads:
        t_numba = results.get(("numba", label))
        t_numpy = results.get(("numpy", label))
        cell = lambda t: f"{t * 1e3:9.1f}ms" if t is not None else "      n/a"
        ratio = f"{t_numpy / t_numba:8.1f}x" if t_numba and t_numpy else "     n/a"
        print(f"{label:<55} {cell(t_numba)} {cell(t_numpy)} {ratio}")


if __name__ == "__main__":
    main()

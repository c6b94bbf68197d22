"""Simulation driver: force of infection, single steps, and full runs.

Time is in hours. Steps are fixed at ``dt`` except that boundaries snap to
delta times and the horizon, so parameter changes are never applied mid-step:
a delta scheduled at time t takes effect between the step ending at t and the
next one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._rng import stream_seed
from . import kernels
from .compartments import CompartmentState, Mode
from .params import PropagationParams, apply_param_deltas
from .perspectives import PerspectiveSnapshot, PerspectiveWeights, Trajectory, compute_perspectives
from .topology import Topology

DEFAULT_DT = 0.05  # hours

_STATUS_MESSAGES = {
    1: "non-finite occupancy produced",
    2: "occupancy fell below tolerance",
    3: "occupancy conservation broken",
}


class SimulationError(RuntimeError):
    """Raised when integration blows up or inputs are inconsistent."""


def force_of_infection(node_id: str, state: CompartmentState, params: PropagationParams,
                       topology: Topology) -> float:
    """Exposure rate (per hour) pressing on one node.

    lambda_n = beta * sum over neighbors m of contactRate(n, m) *
    (kappa_e * p_m(E) + p_m(D)); agent labels enter as 0/1 indicators.
    """
    index = topology.index_of(node_id)
    occ = state.as_occupancy()
    load = params.kappa_e * occ[:, 1] + occ[:, 3]
    return float(params.beta * (topology.contact_matrix()[index] @ load))


def _check_status(status: int, bad_step: int, time: float):
    if status != 0:
        raise SimulationError(
            f"{_STATUS_MESSAGES[status]} at step {bad_step} (t~{time:.4f} h); "
            "parameters too stiff for this dt - reduce dt or the rates"
        )


def mean_field_step(state: CompartmentState, params: PropagationParams,
                    topology: Topology, dt: float) -> CompartmentState:
    """Advance the deterministic dynamics by one RK4 step."""
    if state.mode is not Mode.MEAN_FIELD:
        raise SimulationError("mean_field_step requires a MEAN_FIELD state")
    if dt <= 0:
        raise SimulationError(f"dt must be > 0, got {dt}")
    states, status, bad = kernels.meanfield_run(
        state.occupancy, topology.contact_matrix(), params.as_vector(),
        np.array([dt], dtype=np.float64),
    )
    _check_status(status, bad, state.time)
    return CompartmentState(Mode.MEAN_FIELD, state.time + dt, occupancy=states[1])


@dataclass
class AgentStream:
    """Deterministic uniform stream for stepwise agent simulation.

    ``seed`` is the effective stream seed; ``step_index`` counts consumed
    steps so repeated agent_step calls reproduce a single full run exactly.
    """

    seed: int
    step_index: int = 0

    @classmethod
    def for_run(cls, logical_seed: int, start_time: float = 0.0) -> "AgentStream":
        return cls(seed=stream_seed(logical_seed, start_time))


def agent_step(state: CompartmentState, params: PropagationParams, topology: Topology,
               dt: float, stream: AgentStream) -> CompartmentState:
    """Advance the stochastic dynamics by one sampled step.

    Each enabled transition with rate r fires with probability 1 - exp(-r*dt);
    competing transitions are resolved by a single categorical draw per node,
    remaining mass means the node keeps its label.
    """
    if state.mode is not Mode.AGENT:
        raise SimulationError("agent_step requires an AGENT state")
    if dt <= 0:
        raise SimulationError(f"dt must be > 0, got {dt}")
    recorded = kernels.agent_run_ensemble(
        state.labels, topology.contact_matrix(), params.as_vector(),
        np.array([dt], dtype=np.float64),
        np.array([stream.seed], dtype=np.uint64),
        stream.step_index,
        np.array([1], dtype=np.int64),
    )
    stream.step_index += 1
    return CompartmentState(Mode.AGENT, state.time + dt, labels=recorded[0, 0].copy())


def _normalize_deltas(timed_deltas, horizon: float):
    """Validate timed deltas and group them by (relative) time."""
    items = list(timed_deltas or ())
    times = [float(t) for t, _ in items]
    if any(b < a for a, b in zip(times, times[1:])):
        raise SimulationError("timed deltas must be sorted by time")
    grouped: list[tuple[float, list]] = []
    for at, deltas in items:
        at = float(at)
        if at < 0 or at > horizon:
            raise SimulationError(f"delta time {at} outside [0, {horizon}]")
        if grouped and grouped[-1][0] == at:
            grouped[-1][1].append(deltas)
        else:
            grouped.append((at, [deltas]))
    return grouped


def _time_grid(t0: float, horizon: float, boundary_times, dt: float):
    """Absolute step times hitting every boundary exactly.

    Returns (times, segment_bounds) where segment_bounds[k] = (i0, i1) are the
    state indices spanned by segment k (steps i0..i1-1 advance it).
    """
    points = [0.0] + [t for t in boundary_times if 0.0 < t < horizon] + [horizon]
    times = [t0]
    segment_bounds = []
    for a, b in zip(points, points[1:]):
        start = len(times) - 1
        span = b - a
        n_steps = max(1, math.ceil(span / dt - 1e-12))
        for j in range(1, n_steps):
            times.append(t0 + a + j * dt)
        times.append(t0 + b)
        segment_bounds.append((start, len(times) - 1))
    return np.array(times, dtype=np.float64), segment_bounds


def simulate(topology: Topology, params: PropagationParams, timed_deltas=(),
             horizon: float = 24.0, mode: Mode = Mode.MEAN_FIELD, seed: int | None = None,
             initial_state: CompartmentState | None = None, dt: float = DEFAULT_DT,
             sample_stride: int = 1, run_id: int = 1,
             weights: PerspectiveWeights | None = None,
             record_raw: bool = False) -> Trajectory:
    """Run one simulation and sample the three perspectives along the way.

    ``timed_deltas`` is a time-sorted list of (time, delta-set) pairs with
    times relative to the start of the run, each applied exactly once at its
    step boundary. ``sample_stride`` thins the recorded snapshots (the initial
    and final states are always included).
    """
    mode = Mode(mode)
    if horizon <= 0:
        raise SimulationError(f"horizon must be > 0, got {horizon}")
    if dt <= 0:
        raise SimulationError(f"dt must be > 0, got {dt}")
    if sample_stride < 1:
        raise SimulationError(f"sample_stride must be >= 1, got {sample_stride}")
    if initial_state is None:
        raise SimulationError("initial_state is required")
    if initial_state.mode is not mode:
        raise SimulationError(
            f"initial state mode {initial_state.mode.value} does not match run mode {mode.value}"
        )
    if mode is Mode.AGENT and seed is None:
        raise SimulationError("AGENT mode requires a seed")

    grouped = _normalize_deltas(timed_deltas, horizon)
    t0 = initial_state.time

    # Parameters active per segment; deltas at t=0 apply before the first step.
    current = params
    for at, delta_sets in grouped:
        if at == 0.0:
            for deltas in delta_sets:
                current = apply_param_deltas(current, deltas)
    boundary_times = [at for at, _ in grouped if 0.0 < at < horizon]
    times, segment_bounds = _time_grid(t0, horizon, boundary_times, dt)
    n_states = len(times)

    delta_lookup = {at: sets for at, sets in grouped}
    segment_params: list[PropagationParams] = []
    for k, (i0, i1) in enumerate(segment_bounds):
        if k > 0:
            rel = times[i0] - t0
            for deltas in delta_lookup.get(rel, ()):  # boundary times are exact grid points
                current = apply_param_deltas(current, deltas)
        segment_params.append(current)
    for deltas in delta_lookup.get(horizon, ()):  # end-of-run deltas: no in-window effect
        current = apply_param_deltas(current, deltas)

    # Which params govern the state at each index: a boundary state belongs to
    # the segment that produced it (pre-delta).
    params_of_state = np.zeros(n_states, dtype=np.int64)
    for k, (i0, i1) in enumerate(segment_bounds):
        params_of_state[i0 + 1: i1 + 1] = k

    sampled = list(range(0, n_states, sample_stride))
    if sampled[-1] != n_states - 1:
        sampled.append(n_states - 1)

    if mode is Mode.MEAN_FIELD:
        all_states = np.empty((n_states, topology.n_nodes, 6), dtype=np.float64)
        all_states[0] = initial_state.occupancy
        y = initial_state.occupancy
        W = topology.contact_matrix()
        for k, (i0, i1) in enumerate(segment_bounds):
            dts = np.diff(times[i0: i1 + 1])
            states, status, bad = kernels.meanfield_run(y, W, segment_params[k].as_vector(), dts)
            _check_status(status, -1 if bad < 0 else bad + i0, times[i0])
            all_states[i0 + 1: i1 + 1] = states[1:]
            y = states[-1]
        get_state = lambda i: CompartmentState(Mode.MEAN_FIELD, float(times[i]),
                                               occupancy=all_states[i].copy())
    else:
        effective = stream_seed(seed, t0)
        labels_at = np.empty((n_states, topology.n_nodes), dtype=np.int8)
        labels_at[0] = initial_state.labels
        labels = initial_state.labels
        W = topology.contact_matrix()
        for k, (i0, i1) in enumerate(segment_bounds):
            dts = np.diff(times[i0: i1 + 1])
            recorded = kernels.agent_run_ensemble(
                labels, W, segment_params[k].as_vector(), dts,
                np.array([effective], dtype=np.uint64), i0,
                np.arange(1, len(dts) + 1, dtype=np.int64),
            )
            labels_at[i0 + 1: i1 + 1] = recorded[0]
            labels = labels_at[i1]
        get_state = lambda i: CompartmentState(Mode.AGENT, float(times[i]),
                                               labels=labels_at[i].copy())

    samples: list[PerspectiveSnapshot] = []
    raw: list[CompartmentState] | None = [] if record_raw else None
    for i in sampled:
        state_i = get_state(i)
        samples.append(compute_perspectives(state_i, topology,
                                            segment_params[params_of_state[i]], weights))
        if raw is not None:
            raw.append(state_i)
    return Trajectory(
        run_id=run_id,
        mode=mode,
        seed=seed if mode is Mode.AGENT else None,
        samples=samples,
        final_state=get_state(n_states - 1),
        raw_states=raw,
    )


def run_agent_ensemble(topology: Topology, params: PropagationParams,
                       initial_state: CompartmentState, horizon: float, dt: float,
                       seeds, record_times) -> np.ndarray:
    """Labels for many independent agent runs at selected times.

    ``record_times`` must lie on the step grid. Returns an
    (len(seeds), len(record_times), n_nodes) int8 array. No timed deltas:
    this is the bulk path for ensembles and calibration experiments.
    """
    if initial_state.mode is not Mode.AGENT:
        raise SimulationError("run_agent_ensemble requires an AGENT state")
    t0 = initial_state.time
    times, _ = _time_grid(t0, horizon, [], dt)
    record_steps = []
    for t in record_times:
        idx = int(np.argmin(np.abs(times - (t0 + t))))
        if abs(times[idx] - (t0 + t)) > 1e-9:
            raise SimulationError(f"record time {t} is not on the step grid")
        record_steps.append(idx)
    effective = np.array([stream_seed(int(s), t0) for s in seeds], dtype=np.uint64)
    return kernels.agent_run_ensemble(
        initial_state.labels, topology.contact_matrix(), params.as_vector(),
        np.diff(times), effective, 0, np.array(record_steps, dtype=np.int64),
    )

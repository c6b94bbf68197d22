"""Event-cycle execution: runs, what-if projections, scoring, conclusions.

The state carried between events is the canonical run's end state plus the
parameter set with every matured delta applied. Chosen courses of action
schedule their deltas at conclusion time + lead time; anything not yet due
stays pending and matures in a later event window.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .._rng import mix64, uniform
from ..propagation import (
    CompartmentState,
    Mode,
    PropagationParams,
    Trajectory,
    apply_param_deltas,
    simulate,
)
from .model import CycleError, CycleStep, EventCycle, Scenario

_JITTER_SALT = 0x7455_4A49_5454_4552  # distinct stream from run seeds
_JITTER_SPAN = 0.10  # +-10% on beta and sigma per run when jitter is enabled


@dataclass
class CarriedState:
    """What one event hands to the next."""

    params: PropagationParams
    state: CompartmentState
    pending: list[tuple[float, dict]] = field(default_factory=list)  # (abs time, deltas)

    @classmethod
    def initial(cls, scenario: Scenario, mode: Mode | None = None) -> "CarriedState":
        return cls(params=scenario.base_params, state=scenario.initial_state(mode))

    def copy(self) -> "CarriedState":
        return CarriedState(self.params, self.state.copy(), list(self.pending))


def start_event(scenario: Scenario, cycles: list[EventCycle], index: int) -> EventCycle:
    """Open event ``index`` at PRESENTATION; previous events must be concluded."""
    scenario.event(index)  # bounds check: raises "no such event"
    if index != len(cycles) + 1:
        raise CycleError(
            f"cannot start event {index}: next expected event is {len(cycles) + 1}"
        )
    if cycles and not cycles[-1].concluded:
        raise CycleError(
            f"cannot start event {index}: event {cycles[-1].event_index} not concluded"
        )
    return EventCycle(event_index=index)


def _jitter_params(params: PropagationParams, base_seed: int, run_id: int) -> PropagationParams:
    seed = mix64(base_seed ^ _JITTER_SALT)
    factor_beta = 1.0 + _JITTER_SPAN * (2.0 * uniform(seed, 2 * run_id) - 1.0)
    factor_sigma = 1.0 + _JITTER_SPAN * (2.0 * uniform(seed, 2 * run_id + 1) - 1.0)
    return replace(params, beta=params.beta * factor_beta, sigma=params.sigma * factor_sigma)


def _window_schedule(scenario: Scenario, event_index: int, carried: CarriedState):
    """Split deltas into (applied-now params, in-window timed deltas, leftover pending)."""
    event = scenario.event(event_index)
    window_start = carried.state.time
    window_end = window_start + scenario.sim.horizon_per_event

    timed: list[tuple[float, dict]] = []
    params = carried.params
    leftover: list[tuple[float, dict]] = []
    for due, deltas in sorted(carried.pending, key=lambda item: item[0]):
        if due <= window_start:
            params = apply_param_deltas(params, deltas)
        elif due <= window_end:
            timed.append((due - window_start, deltas))
        else:
            leftover.append((due, deltas))
    if event.param_deltas:
        timed.append((max(event.at_time, window_start) - window_start, event.param_deltas))
    timed.sort(key=lambda item: item[0])
    return params, timed, leftover, window_start, window_end


def run_event_simulations(scenario: Scenario, cycle: EventCycle,
                          carried: CarriedState) -> EventCycle:
    """Attach the s simulation runs for the cycle's event.

    Run r uses seed baseSeed + r in agent mode; mean-field runs are identical
    unless per-run jitter is configured. The canonical continuation is run 1.
    """
    if cycle.step is not CycleStep.MODEL_APPLICATION:
        raise CycleError(
            f"runs attach at MODEL_APPLICATION; cycle is at {cycle.step.value}"
        )
    if carried is None:
        raise CycleError("missing carried state for event simulations")

    params, timed, leftover, window_start, window_end = _window_schedule(
        scenario, cycle.event_index, carried
    )
    sim = scenario.sim
    runs: list[Trajectory] = []
    for run_id in range(1, sim.runs_per_event + 1):
        run_params = params
        if sim.mode is Mode.MEAN_FIELD and sim.mean_field_jitter:
            run_params = _jitter_params(params, sim.base_seed, run_id)
        runs.append(simulate(
            scenario.topology, run_params, timed,
            horizon=sim.horizon_per_event, mode=sim.mode,
            seed=sim.base_seed + run_id if sim.mode is Mode.AGENT else None,
            initial_state=carried.state, dt=sim.dt,
            sample_stride=sim.sample_stride, run_id=run_id,
            weights=scenario.weights,
        ))
    cycle.runs = runs

    end_params = params
    for _, deltas in timed:
        end_params = apply_param_deltas(end_params, deltas)
    cycle.end_params = end_params
    cycle.end_time = window_end
    cycle.pending_after = leftover
    return cycle


def project_course_of_action(scenario: Scenario, cycle: EventCycle, carried: CarriedState,
                             coa_id: str | None, horizon: float) -> list[Trajectory]:
    """What-if continuation past the event window under one course of action.

    Read-only: the canonical carried state and the cycle are not touched.
    ``coa_id`` None means plain continuation (no new deltas).
    """
    if cycle.step not in (CycleStep.DISCUSSION, CycleStep.CONCLUSIONS):
        raise CycleError(f"what-if projections run at DISCUSSION; cycle is at {cycle.step.value}")
    if horizon <= 0:
        raise CycleError(f"projection horizon must be > 0, got {horizon}")
    if not cycle.runs:
        raise CycleError("no runs attached; apply the model first")

    event = scenario.event(cycle.event_index)
    course = event.course(coa_id) if coa_id is not None else None

    timed: list[tuple[float, dict]] = []
    for due, deltas in cycle.pending_after:
        rel = due - cycle.end_time
        if 0 <= rel <= horizon:
            timed.append((rel, deltas))
    if course is not None and course.param_deltas and course.lead_time <= horizon:
        timed.append((course.lead_time, course.param_deltas))
    timed.sort(key=lambda item: item[0])

    sim = scenario.sim
    start = cycle.runs[0].final_state  # canonical run's end state
    projections = []
    for run_id in range(1, sim.runs_per_event + 1):
        run_params = cycle.end_params
        if sim.mode is Mode.MEAN_FIELD and sim.mean_field_jitter:
            run_params = _jitter_params(cycle.end_params, sim.base_seed, run_id)
        projections.append(simulate(
            scenario.topology, run_params, timed,
            horizon=horizon, mode=sim.mode,
            seed=sim.base_seed + run_id if sim.mode is Mode.AGENT else None,
            initial_state=start, dt=sim.dt,
            sample_stride=sim.sample_stride, run_id=run_id,
            weights=scenario.weights,
        ))
    return projections


@dataclass(frozen=True)
class ProjectionScore:
    """Composite ranking for a set of projected trajectories; higher is better."""

    score: float
    mean_availability: float
    mean_risk: float
    per_run: tuple[float, ...]

    def to_wire(self) -> dict:
        return {
            "score": self.score,
            "meanServiceAvailability": self.mean_availability,
            "meanCyberRisk": self.mean_risk,
            "perRun": list(self.per_run),
        }


def score_projection(trajectories: list[Trajectory]) -> ProjectionScore:
    """0.5 * mean availability - 0.5 * mean risk, averaged over runs."""
    if not trajectories:
        raise CycleError("cannot score an empty trajectory list")
    per_run = []
    availabilities = []
    risks = []
    for trajectory in trajectories:
        avail = sum(trajectory.availability_series()) / len(trajectory.samples)
        risk = sum(trajectory.risk_series()) / len(trajectory.samples)
        availabilities.append(avail)
        risks.append(risk)
        per_run.append(0.5 * avail - 0.5 * risk)
    count = len(per_run)
    return ProjectionScore(
        score=sum(per_run) / count,
        mean_availability=sum(availabilities) / count,
        mean_risk=sum(risks) / count,
        per_run=tuple(per_run),
    )


def conclude_event(scenario: Scenario, cycle: EventCycle, carried: CarriedState,
                   chosen_coa_id: str | None = None,
                   conclusion_notes: str | None = None) -> tuple[EventCycle, CarriedState]:
    """Close the cycle; the chosen course becomes canonical for later events.

    The new carried state is the canonical run's end state; the course's
    deltas are scheduled at window end + lead time (None = no action).
    """
    if cycle.concluded:
        raise CycleError(f"event {cycle.event_index} already concluded")
    if cycle.step is not CycleStep.CONCLUSIONS:
        raise CycleError(
            f"conclude requires the CONCLUSIONS step; cycle is at {cycle.step.value}"
        )
    if not cycle.runs:
        raise CycleError("no runs attached; apply the model first")

    event = scenario.event(cycle.event_index)
    pending = list(cycle.pending_after)
    if chosen_coa_id is not None:
        course = event.course(chosen_coa_id)
        if course.param_deltas:
            pending.append((cycle.end_time + course.lead_time, course.param_deltas))
        cycle.chosen_course = chosen_coa_id
    if conclusion_notes:
        cycle.conclusion_notes.append(conclusion_notes)
    cycle.concluded = True
    new_carried = CarriedState(
        params=cycle.end_params,
        state=cycle.runs[0].final_state,
        pending=sorted(pending, key=lambda item: item[0]),
    )
    return cycle, new_carried

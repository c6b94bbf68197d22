"""Scenario definition and event-cycle execution."""

from .engine import (
    CarriedState,
    ProjectionScore,
    conclude_event,
    project_course_of_action,
    run_event_simulations,
    score_projection,
    start_event,
)
from .loader import (
    BUNDLED_SCENARIO,
    SCENARIO_SCHEMA,
    ScenarioError,
    load_bundled,
    load_scenario,
    load_scenario_file,
)
from .model import (
    MONITORED_PERSPECTIVES,
    STEP_ORDER,
    CourseOfAction,
    CycleError,
    CycleStep,
    Event,
    EventCycle,
    Phase,
    Scenario,
    SimulationConfig,
)

__all__ = [
    "CarriedState",
    "ProjectionScore",
    "conclude_event",
    "project_course_of_action",
    "run_event_simulations",
    "score_projection",
    "start_event",
    "BUNDLED_SCENARIO",
    "SCENARIO_SCHEMA",
    "ScenarioError",
    "load_bundled",
    "load_scenario",
    "load_scenario_file",
    "MONITORED_PERSPECTIVES",
    "STEP_ORDER",
    "CourseOfAction",
    "CycleError",
    "CycleStep",
    "Event",
    "EventCycle",
    "Phase",
    "Scenario",
    "SimulationConfig",
]

"""Scenario, event, and event-cycle types.

A scenario scripts a crisis as an ordered list of events across the three
crisis phases. Each event is played through a fixed five-step cycle:
presentation, model application (the s simulation runs), interpretation,
discussion (courses of action and what-ifs), and conclusions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..propagation import (
    CompartmentState,
    Mode,
    PerspectiveWeights,
    PropagationParams,
    Topology,
    Trajectory,
)

MONITORED_PERSPECTIVES = 3  # network situation, service availability, cyber risk


class Phase(str, Enum):
    PRE_CRISIS = "PRE_CRISIS"
    CRISIS = "CRISIS"
    POST_CRISIS = "POST_CRISIS"


PHASE_ORDER = (Phase.PRE_CRISIS, Phase.CRISIS, Phase.POST_CRISIS)


class CycleStep(str, Enum):
    PRESENTATION = "PRESENTATION"
    MODEL_APPLICATION = "MODEL_APPLICATION"
    INTERPRETATION = "INTERPRETATION"
    DISCUSSION = "DISCUSSION"
    CONCLUSIONS = "CONCLUSIONS"


STEP_ORDER = tuple(CycleStep)


class CycleError(RuntimeError):
    """Raised for out-of-order cycle transitions and bad event references."""


@dataclass(frozen=True)
class CourseOfAction:
    id: str
    title: str
    rationale: str = ""
    param_deltas: dict = field(default_factory=dict)
    lead_time: float = 0.0  # hours before the deltas take effect
    cost_label: str = ""

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "rationale": self.rationale,
            "paramDeltas": self.param_deltas,
            "leadTime": self.lead_time,
            "costLabel": self.cost_label,
        }


@dataclass(frozen=True)
class Event:
    index: int  # 1-based, contiguous
    phase: Phase
    at_time: float  # absolute scenario hours at which the deltas hit
    narrative: str
    context_notes: str = ""
    param_deltas: dict = field(default_factory=dict)
    guiding_questions: tuple[str, ...] = ()
    courses: tuple[CourseOfAction, ...] = ()

    def course(self, coa_id: str) -> CourseOfAction:
        for course in self.courses:
            if course.id == coa_id:
                return course
        raise CycleError(f"unknown course of action: {coa_id}")

    def to_wire(self) -> dict:
        return {
            "i": self.index,
            "phase": self.phase.value,
            "atTime": self.at_time,
            "narrative": self.narrative,
            "contextNotes": self.context_notes,
            "paramDeltas": self.param_deltas,
            "guidingQuestions": list(self.guiding_questions),
            "courses": [course.to_wire() for course in self.courses],
        }


@dataclass(frozen=True)
class SimulationConfig:
    runs_per_event: int = 3           # s
    horizon_per_event: float = 12.0   # hours
    dt: float = 0.05
    mode: Mode = Mode.MEAN_FIELD
    base_seed: int = 42
    mean_field_jitter: bool = False   # +-10% on beta/sigma per run when on
    sample_stride: int = 1


@dataclass
class Scenario:
    id: str
    title: str
    description: str
    topology: Topology
    base_params: PropagationParams
    initial_assignment: dict[str, str]  # node id -> compartment letter
    events: tuple[Event, ...]
    sim: SimulationConfig
    weights: PerspectiveWeights
    source_text: str = ""  # canonical JSON document this scenario came from

    @property
    def event_count(self) -> int:
        return len(self.events)

    def event(self, index: int) -> Event:
        if not 1 <= index <= len(self.events):
            raise CycleError(f"no such event: {index}")
        return self.events[index - 1]

    def initial_state(self, mode: Mode | None = None) -> CompartmentState:
        from ..propagation import Compartment

        mode = mode or self.sim.mode
        labels = [Compartment[self.initial_assignment[node.id]] for node in self.topology.nodes]
        if mode is Mode.AGENT:
            return CompartmentState.agent(labels, time=0.0)
        occ = [[1.0 if c == int(label) else 0.0 for c in range(6)] for label in labels]
        return CompartmentState.mean_field(occ, time=0.0)


@dataclass
class EventCycle:
    """Live progress of one event through the five steps."""

    event_index: int
    step: CycleStep = CycleStep.PRESENTATION
    runs: list[Trajectory] = field(default_factory=list)
    chosen_course: str | None = None
    discussion_notes: list[str] = field(default_factory=list)
    conclusion_notes: list[str] = field(default_factory=list)
    concluded: bool = False
    # Filled by run_event_simulations; carried forward at conclusion.
    end_params: PropagationParams | None = None
    end_time: float | None = None
    pending_after: list = field(default_factory=list)

    def advance_step(self) -> CycleStep:
        """Move to the next of the five steps, strictly in order."""
        if self.concluded:
            raise CycleError(f"event {self.event_index} already concluded")
        position = STEP_ORDER.index(self.step)
        if position == len(STEP_ORDER) - 1:
            raise CycleError(
                f"event {self.event_index} is at {self.step.value}; conclude it instead"
            )
        self.step = STEP_ORDER[position + 1]
        return self.step

    def to_wire(self, include_runs: bool = False) -> dict:
        doc = {
            "event": self.event_index,
            "step": self.step.value,
            "concluded": self.concluded,
            "chosenCourse": self.chosen_course,
            "discussionNotes": list(self.discussion_notes),
            "conclusionNotes": list(self.conclusion_notes),
        }
        if include_runs:
            doc["runs"] = [run.to_wire() for run in self.runs]
        return doc

"""Exercise lifecycle: phases, the action FSM, audit log, replay, reports.

A session moves PRELIMINARY -> EXECUTION -> CLOSURE -> ARCHIVED. During
EXECUTION the current event cycle advances through its five steps via
``advance(NEXT_STEP)``; the step into MODEL_APPLICATION triggers the s
simulation runs, and the step out of CONCLUSIONS concludes the event and
opens the next one. Every state-changing call appends exactly one record to
the session's append-only log; replaying the log reproduces the state hash.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from ..analytics.regression import descriptive_stats
from ..analytics.surveys import SurveyError, SurveyResponse, parse_row
from ..scenario import (
    CarriedState,
    CycleStep,
    EventCycle,
    Scenario,
    conclude_event,
    load_scenario,
    project_course_of_action,
    run_event_simulations,
    score_projection,
    start_event,
)
from .store import SessionStore, digest


class SessionPhase(str, Enum):
    PRELIMINARY = "PRELIMINARY"
    EXECUTION = "EXECUTION"
    CLOSURE = "CLOSURE"
    ARCHIVED = "ARCHIVED"


ACTIONS = ("BEGIN_EXECUTION", "NEXT_STEP", "SUBMIT_COA", "SUBMIT_NOTES",
           "BEGIN_CLOSURE", "ARCHIVE")


class SessionError(RuntimeError):
    code = "session_error"


class UnknownSessionError(SessionError):
    code = "unknown_session"


class UnknownScenarioError(SessionError):
    code = "unknown_scenario"


class TransitionError(SessionError):
    code = "illegal_transition"


class ConflictError(SessionError):
    code = "conflict"


class ValidationError(SessionError):
    code = "validation"


@dataclass(frozen=True)
class Participants:
    count: int          # np
    observers: int = 0  # no
    group_size: str = ""  # gs

    def __post_init__(self):
        if self.count < 1:
            raise ValidationError(f"np must be >= 1, got {self.count}")
        if self.observers < 0:
            raise ValidationError(f"no must be >= 0, got {self.observers}")

    def to_wire(self) -> dict:
        return {"np": self.count, "no": self.observers, "gs": self.group_size}

    @classmethod
    def from_wire(cls, doc) -> "Participants":
        return cls(
            count=int(doc.get("np", 0)),
            observers=int(doc.get("no", 0)),
            group_size=str(doc.get("gs", "")),
        )


class StreamHub:
    """Per-session snapshot stream: publication-ordered, resumable by seq."""

    def __init__(self):
        self._records: list[dict] = []
        self._cond = threading.Condition()
        self._next_seq = 1

    def publish(self, record: dict) -> dict:
        with self._cond:
            record = {"seq": self._next_seq, **record}
            self._next_seq += 1
            self._records.append(record)
            self._cond.notify_all()
            return record

    def after(self, seq: int) -> list[dict]:
        with self._cond:
            return [r for r in self._records if r["seq"] > seq]


@dataclass
class ExerciseSession:
    session_id: str
    scenario: Scenario
    participants: Participants
    phase: SessionPhase = SessionPhase.PRELIMINARY
    cycles: list[EventCycle] = field(default_factory=list)
    carried: CarriedState | None = None
    surveys: list[SurveyResponse] = field(default_factory=list)
    free_notes: list[dict] = field(default_factory=list)
    created_at: float = 0.0
    updated_at: float = 0.0
    seq: int = 0

    def current_cycle(self) -> EventCycle | None:
        if self.cycles and not self.cycles[-1].concluded:
            return self.cycles[-1]
        return None

    def state_document(self) -> dict:
        """Deterministic full-state document; its digest is the state hash."""
        carried = self.carried
        carried_doc = None
        if carried is not None:
            state = carried.state
            carried_doc = {
                "params": carried.params.to_wire(),
                "pending": [[t, deltas] for t, deltas in carried.pending],
                "state": {
                    "mode": state.mode.value,
                    "time": state.time,
                    "occupancy": None if state.occupancy is None else state.occupancy.tolist(),
                    "labels": None if state.labels is None else state.labels.tolist(),
                },
            }
        return {
            "sessionId": self.session_id,
            "scenarioId": self.scenario.id,
            "scenarioDigest": digest(self.scenario.source_text),
            "phase": self.phase.value,
            "participants": self.participants.to_wire(),
            "cycles": [cycle.to_wire(include_runs=True) for cycle in self.cycles],
            "carried": carried_doc,
            "surveys": [row.to_row() for row in self.surveys],
            "freeNotes": self.free_notes,
        }

    def state_hash(self) -> str:
        return digest(self.state_document())


class Orchestrator:
    """Session registry and action dispatcher over a session store."""

    def __init__(self, store_root, clock=time.time):
        self.store = SessionStore(store_root)
        self.scenarios: dict[str, Scenario] = {}
        self.sessions: dict[str, ExerciseSession] = {}
        self.hubs: dict[str, StreamHub] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._clock = clock

    # -- scenario registry ---------------------------------------------------

    def register_scenario(self, scenario: Scenario) -> str:
        self.scenarios[scenario.id] = scenario
        return scenario.id

    def scenario(self, scenario_id: str) -> Scenario:
        try:
            return self.scenarios[scenario_id]
        except KeyError:
            raise UnknownScenarioError(f"unknown scenario: {scenario_id}") from None

    # -- session access ------------------------------------------------------

    def _session(self, session_id: str) -> ExerciseSession:
        if session_id not in self.sessions:
            if self.store.exists(session_id):
                self.sessions[session_id] = self._rebuild(session_id)
            else:
                raise UnknownSessionError(f"unknown session: {session_id}")
        return self.sessions[session_id]

    def _lock(self, session_id: str) -> threading.Lock:
        return self._locks.setdefault(session_id, threading.Lock())

    def hub(self, session_id: str) -> StreamHub:
        self._session(session_id)
        return self.hubs.setdefault(session_id, StreamHub())

    # -- logging -------------------------------------------------------------

    def _log(self, session: ExerciseSession, actor: str, action: str, payload: dict,
             ts: float | None = None) -> None:
        ts = self._clock() if ts is None else ts
        session.seq += 1
        session.updated_at = ts
        record = {
            "seq": session.seq,
            "ts": ts,
            "actor": actor,
            "action": action,
            "payload": payload,
            "digest": digest(payload),
        }
        self.store.append_log(session.session_id, record)

    # -- operations ----------------------------------------------------------

    def create_session(self, scenario_id: str, participants, session_id: str | None = None,
                       actor: str = "facilitator") -> ExerciseSession:
        scenario = self.scenario(scenario_id)
        if not isinstance(participants, Participants):
            participants = Participants.from_wire(participants)
        session_id = session_id or uuid.uuid4().hex[:12]
        if self.store.exists(session_id):
            raise ConflictError(f"session already exists: {session_id}")
        session = ExerciseSession(
            session_id=session_id,
            scenario=scenario,
            participants=participants,
            carried=CarriedState.initial(scenario),
            created_at=self._clock(),
        )
        self.store.create(session_id, scenario.source_text)
        self.sessions[session_id] = session
        self.hubs[session_id] = StreamHub()
        self._log(session, actor, "CREATE", {
            "sessionId": session_id,
            "scenarioId": scenario_id,
            "participants": session.participants.to_wire(),
        }, ts=session.created_at)
        return session

    def advance(self, session_id: str, action: str, payload: dict | None = None,
                actor: str = "facilitator") -> dict:
        """Apply one lifecycle action; exactly one log record on success."""
        payload = payload or {}
        session = self._session(session_id)
        lock = self._lock(session_id)
        if not lock.acquire(blocking=False):
            raise ConflictError("concurrent mutation rejected: another writer is active")
        try:
            self._apply(session, action, payload)
            self._log(session, actor, action, payload)
        finally:
            lock.release()
        return self.view(session_id)

    def _apply(self, session: ExerciseSession, action: str, payload: dict) -> None:
        if action not in ACTIONS:
            raise TransitionError(f"unknown action: {action}")
        scenario = session.scenario
        phase = session.phase

        if action == "BEGIN_EXECUTION":
            if phase is not SessionPhase.PRELIMINARY:
                raise TransitionError(f"BEGIN_EXECUTION requires PRELIMINARY, session is {phase.value}")
            session.cycles.append(start_event(scenario, session.cycles, 1))
            session.phase = SessionPhase.EXECUTION

        elif action == "NEXT_STEP":
            if phase is not SessionPhase.EXECUTION:
                raise TransitionError(f"NEXT_STEP requires EXECUTION, session is {phase.value}")
            cycle = session.current_cycle()
            if cycle is None:
                raise TransitionError(
                    "all events concluded; BEGIN_CLOSURE is the only step left"
                )
            if cycle.step is CycleStep.CONCLUSIONS:
                notes = payload.get("conclusionNotes")
                cycle, session.carried = conclude_event(
                    scenario, cycle, session.carried,
                    chosen_coa_id=cycle.chosen_course, conclusion_notes=notes,
                )
                if cycle.event_index < scenario.event_count:
                    session.cycles.append(
                        start_event(scenario, session.cycles, cycle.event_index + 1)
                    )
            else:
                step = cycle.advance_step()
                if step is CycleStep.MODEL_APPLICATION:
                    run_event_simulations(scenario, cycle, session.carried)
                    self._publish_runs(session, cycle)
                    self.store.write_runs(session.session_id, cycle.event_index, {
                        "event": cycle.event_index,
                        "runs": [run.to_wire() for run in cycle.runs],
                    })

        elif action == "SUBMIT_COA":
            if phase is not SessionPhase.EXECUTION:
                raise TransitionError(f"SUBMIT_COA requires EXECUTION, session is {phase.value}")
            cycle = session.current_cycle()
            if cycle is None or cycle.step not in (CycleStep.DISCUSSION, CycleStep.CONCLUSIONS):
                where = cycle.step.value if cycle else "no open event"
                raise TransitionError(f"SUBMIT_COA requires DISCUSSION or CONCLUSIONS, cycle is at {where}")
            coa_id = payload.get("coaId")
            if coa_id is not None:
                scenario.event(cycle.event_index).course(coa_id)  # raises if unknown
            cycle.chosen_course = coa_id

        elif action == "SUBMIT_NOTES":
            text = str(payload.get("text", ""))
            kind = payload.get("kind", "general")
            if kind not in ("general", "discussion", "conclusion"):
                raise ValidationError(f"unknown notes kind: {kind}")
            if kind == "general":
                if phase is SessionPhase.ARCHIVED:
                    raise TransitionError("session is archived")
                session.free_notes.append({"phase": phase.value, "text": text})
            else:
                if phase is not SessionPhase.EXECUTION:
                    raise TransitionError(f"{kind} notes require EXECUTION, session is {phase.value}")
                cycle = session.current_cycle()
                if cycle is None:
                    raise TransitionError("no open event to attach notes to")
                target = (cycle.discussion_notes if kind == "discussion"
                          else cycle.conclusion_notes)
                target.append(text)

        elif action == "BEGIN_CLOSURE":
            if phase is not SessionPhase.EXECUTION:
                raise TransitionError(f"BEGIN_CLOSURE requires EXECUTION, session is {phase.value}")
            concluded = sum(1 for cycle in session.cycles if cycle.concluded)
            if concluded != scenario.event_count:
                raise TransitionError(
                    f"BEGIN_CLOSURE requires all {scenario.event_count} events concluded, "
                    f"only {concluded} are"
                )
            session.phase = SessionPhase.CLOSURE

        elif action == "ARCHIVE":
            if phase is not SessionPhase.CLOSURE:
                raise TransitionError(f"ARCHIVE requires CLOSURE, session is {phase.value}")
            session.phase = SessionPhase.ARCHIVED

    def _publish_runs(self, session: ExerciseSession, cycle: EventCycle) -> None:
        hub = self.hubs.setdefault(session.session_id, StreamHub())
        for run in cycle.runs:
            for snapshot in run.samples:
                hub.publish({
                    "event": cycle.event_index,
                    "runId": run.run_id,
                    "snapshot": snapshot.to_wire(),
                })

    # -- read-only operations --------------------------------------------------

    def whatif(self, session_id: str, coa_id: str | None, horizon: float) -> dict:
        """Project a course of action; never mutates canonical state."""
        session = self._session(session_id)
        cycle = session.current_cycle()
        if session.phase is not SessionPhase.EXECUTION or cycle is None:
            raise TransitionError("what-if projections require an open event in EXECUTION")
        trajectories = project_course_of_action(
            session.scenario, cycle, session.carried, coa_id, horizon
        )
        score = score_projection(trajectories)
        return {
            "coaId": coa_id,
            "horizon": horizon,
            "trajectories": [run.to_wire() for run in trajectories],
            "score": score.to_wire(),
        }

    def view(self, session_id: str) -> dict:
        session = self._session(session_id)
        scenario = session.scenario
        cycle = session.current_cycle()
        current = None
        if cycle is not None:
            event = scenario.event(cycle.event_index)
            current = {
                "event": cycle.event_index,
                "phase": event.phase.value,
                "step": cycle.step.value,
                "narrative": event.narrative,
                "contextNotes": event.context_notes,
                "guidingQuestions": list(event.guiding_questions),
                "courses": [course.to_wire() for course in event.courses],
                "chosenCourse": cycle.chosen_course,
            }
        return {
            "sessionId": session.session_id,
            "scenarioId": scenario.id,
            "scenarioTitle": scenario.title,
            "phase": session.phase.value,
            "participants": session.participants.to_wire(),
            "eventCount": scenario.event_count,
            "runsPerEvent": scenario.sim.runs_per_event,
            "mode": scenario.sim.mode.value,
            "concludedEvents": sum(1 for c in session.cycles if c.concluded),
            "currentEvent": current,
            "cycles": [cycle.to_wire() for cycle in session.cycles],
            "surveyCount": len(session.surveys),
            "stateHash": session.state_hash(),
        }

    def runs(self, session_id: str, event_index: int) -> dict:
        session = self._session(session_id)
        for cycle in session.cycles:
            if cycle.event_index == event_index and cycle.runs:
                return {
                    "event": event_index,
                    "runs": [run.to_wire() for run in cycle.runs],
                }
        raise ValidationError(f"no runs recorded for event {event_index}")

    # -- surveys and reporting -------------------------------------------------

    def ingest_survey(self, session_id: str, rows, actor: str = "facilitator") -> dict:
        """Validate and store survey rows; all-or-nothing on validation errors."""
        session = self._session(session_id)
        if session.phase is not SessionPhase.CLOSURE:
            raise TransitionError(
                f"survey ingestion requires CLOSURE, session is {session.phase.value}"
            )
        lock = self._lock(session_id)
        if not lock.acquire(blocking=False):
            raise ConflictError("concurrent mutation rejected: another writer is active")
        try:
            parsed = []
            errors = []
            for index, row in enumerate(rows, start=1):
                try:
                    parsed.append(parse_row(row, row_number=index))
                except SurveyError as exc:
                    errors.append(str(exc))
            if errors:
                raise ValidationError("; ".join(errors))
            session.surveys.extend(parsed)
            self.store.write_surveys(session_id, session.surveys)
            self._log(session, actor, "INGEST_SURVEY",
                      {"rows": [row.to_row() for row in parsed]})
        finally:
            lock.release()
        return {"accepted": len(parsed), "total": len(session.surveys)}

    def export_report(self, session_id: str) -> dict:
        """Deterministic session report; exporting twice is byte-identical."""
        session = self._session(session_id)
        if session.phase not in (SessionPhase.CLOSURE, SessionPhase.ARCHIVED):
            raise TransitionError(
                f"report export requires CLOSURE or ARCHIVED, session is {session.phase.value}"
            )
        scenario = session.scenario
        events = []
        series = {}
        for cycle in session.cycles:
            if not cycle.concluded:
                continue
            event = scenario.event(cycle.event_index)
            events.append({
                "event": cycle.event_index,
                "phase": event.phase.value,
                "chosenCourse": cycle.chosen_course,
                "score": score_projection(cycle.runs).to_wire(),
                "discussionNotes": list(cycle.discussion_notes),
                "conclusionNotes": list(cycle.conclusion_notes),
            })
            series[str(cycle.event_index)] = {
                "runs": [run.to_wire() for run in cycle.runs],
                "mean": _mean_series(cycle.runs),
            }
        aggregates = descriptive_stats(session.surveys) if session.surveys else None
        lessons = [note for cycle in session.cycles for note in cycle.conclusion_notes]
        lessons += [note["text"] for note in session.free_notes
                    if note["phase"] == SessionPhase.CLOSURE.value]
        report = {
            "sessionId": session.session_id,
            "scenarioId": scenario.id,
            "scenarioTitle": scenario.title,
            "participants": session.participants.to_wire(),
            "createdAt": session.created_at,
            "events": events,
            "perspectiveSeries": series,
            "surveyAggregates": aggregates,
            "lessonsLearned": lessons,
            "stateHash": session.state_hash(),
        }
        self.store.write_report(session_id, report)
        return report

    # -- replay ------------------------------------------------------------------

    def _rebuild(self, session_id: str) -> ExerciseSession:
        return replay_session(self.store, session_id, self.scenarios,
                              hub=self.hubs.setdefault(session_id, StreamHub()))

    def replay(self, session_id: str) -> ExerciseSession:
        """Reconstruct a fresh session object from the persisted log."""
        return replay_session(self.store, session_id, self.scenarios)


def _mean_series(runs) -> dict:
    times = [snap.time for snap in runs[0].samples]
    count = len(runs)
    availability = [0.0] * len(times)
    risk = [0.0] * len(times)
    healthy = [0.0] * len(times)
    for run in runs:
        for k, snap in enumerate(run.samples):
            availability[k] += snap.service_availability
            risk[k] += snap.cyber_risk
            healthy[k] += snap.healthy_fraction
    return {
        "times": times,
        "serviceAvailability": [v / count for v in availability],
        "cyberRisk": [v / count for v in risk],
        "healthyFraction": [v / count for v in healthy],
    }


def replay_session(store: SessionStore, session_id: str, known_scenarios=None,
                   hub: StreamHub | None = None) -> ExerciseSession:
    """Fold the persisted log into a fresh ExerciseSession.

    Simulations re-run deterministically, so the rebuilt session matches the
    original state hash exactly.
    """
    records = store.read_log(session_id)
    if not records or records[0]["action"] != "CREATE":
        raise SessionError(f"log for {session_id} does not start with CREATE")
    scenario = load_scenario(store.scenario_text(session_id))
    if known_scenarios and scenario.id in known_scenarios:
        scenario = known_scenarios[scenario.id]

    create = records[0]
    session = ExerciseSession(
        session_id=session_id,
        scenario=scenario,
        participants=Participants.from_wire(create["payload"]["participants"]),
        carried=CarriedState.initial(scenario),
        created_at=create["ts"],
        updated_at=create["ts"],
        seq=create["seq"],
    )

    shadow = Orchestrator.__new__(Orchestrator)  # dispatcher without storage side effects
    shadow.store = _NullStore()
    shadow.scenarios = {scenario.id: scenario}
    shadow.sessions = {session_id: session}
    shadow.hubs = {session_id: hub or StreamHub()}
    shadow._locks = {}
    shadow._clock = time.time

    for record in records[1:]:
        action = record["action"]
        if action == "INGEST_SURVEY":
            parsed = [parse_row(row) for row in record["payload"]["rows"]]
            session.surveys.extend(parsed)
        else:
            shadow._apply(session, action, record["payload"])
        session.seq = record["seq"]
        session.updated_at = record["ts"]
    return session


class _NullStore:
    def write_runs(self, *args, **kwargs):
        pass

    def write_surveys(self, *args, **kwargs):
        pass

    def append_log(self, *args, **kwargs):
        pass

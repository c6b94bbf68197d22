"""Scenario file loading and validation.

Scenario files are JSON with top-level keys meta, topology, params,
initialState, events, simulation, and optional perspectiveWeights. Unknown
keys are rejected anywhere in the document; semantic problems (dangling node
ids, unordered events, out-of-window delta times) are reported with the
offending path.
"""

from __future__ import annotations

import json
from importlib import resources

import jsonschema

from ..propagation import (
    LETTERS,
    Mode,
    ParamError,
    PerspectiveWeights,
    PropagationParams,
    TopologyError,
    build_topology,
)
from ..propagation.params import validate_deltas
from .model import (
    PHASE_ORDER,
    CourseOfAction,
    Event,
    Phase,
    Scenario,
    SimulationConfig,
)

BUNDLED_SCENARIO = "maersk-notpetya-12"


class ScenarioError(ValueError):
    """Raised for scenario files that fail schema or semantic validation."""


_DELTA_SCHEMA = {
    "type": "object",
    "additionalProperties": {
        "type": "object",
        "properties": {
            "set": {"type": "number"},
            "add": {"type": "number"},
            "mul": {"type": "number"},
        },
        "additionalProperties": False,
        "minProperties": 1,
        "maxProperties": 1,
    },
}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["meta", "topology", "params", "initialState", "events", "simulation"],
    "additionalProperties": False,
    "properties": {
        "meta": {
            "type": "object",
            "required": ["id", "title"],
            "additionalProperties": False,
            "properties": {
                "id": {"type": "string", "minLength": 1},
                "title": {"type": "string"},
                "description": {"type": "string"},
            },
        },
        "topology": {
            "type": "object",
            "required": ["nodes", "edges"],
            "additionalProperties": False,
            "properties": {
                "nodes": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["id"],
                        "additionalProperties": False,
                        "properties": {
                            "id": {"type": "string", "minLength": 1},
                            "label": {"type": "string"},
                            "kind": {"enum": ["IT", "OT", "NETWORK", "SERVICE"]},
                            "serviceWeight": {"type": "number"},
                        },
                    },
                },
                "edges": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["from", "to"],
                        "additionalProperties": False,
                        "properties": {
                            "from": {"type": "string"},
                            "to": {"type": "string"},
                            "contactRate": {"type": "number"},
                        },
                    },
                },
                "directed": {"type": "boolean"},
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                key: {"type": "number"}
                for key in (
                    "beta", "kappaE", "sigma", "alpha", "upsilon", "rho",
                    "xi", "gamma", "nu", "eta", "omega", "threatLevel",
                )
            },
        },
        "initialState": {
            "type": "object",
            "required": ["default"],
            "additionalProperties": False,
            "properties": {
                "default": {"enum": list(LETTERS)},
                "overrides": {
                    "type": "object",
                    "additionalProperties": {"enum": list(LETTERS)},
                },
            },
        },
        "events": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["i", "phase", "atTime", "narrative"],
                "additionalProperties": False,
                "properties": {
                    "i": {"type": "integer", "minimum": 1},
                    "phase": {"enum": [phase.value for phase in PHASE_ORDER]},
                    "atTime": {"type": "number", "minimum": 0},
                    "narrative": {"type": "string"},
                    "contextNotes": {"type": "string"},
                    "paramDeltas": _DELTA_SCHEMA,
                    "guidingQuestions": {"type": "array", "items": {"type": "string"}},
                    "courses": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "title"],
                            "additionalProperties": False,
                            "properties": {
                                "id": {"type": "string", "minLength": 1},
                                "title": {"type": "string"},
                                "rationale": {"type": "string"},
                                "paramDeltas": _DELTA_SCHEMA,
                                "leadTime": {"type": "number", "minimum": 0},
                                "costLabel": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
        "simulation": {
            "type": "object",
            "required": ["s", "horizonPerEvent"],
            "additionalProperties": False,
            "properties": {
                "s": {"type": "integer", "minimum": 1},
                "horizonPerEvent": {"type": "number", "exclusiveMinimum": 0},
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "mode": {"enum": ["meanfield", "agent"]},
                "baseSeed": {"type": "integer"},
                "meanFieldJitter": {"type": "boolean"},
                "sampleStride": {"type": "integer", "minimum": 1},
            },
        },
        "perspectiveWeights": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "availability": {
                    "type": "object",
                    "additionalProperties": {"type": "number"},
                },
                "risk": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "compromised": {"type": "number"},
                        "threat": {"type": "number"},
                    },
                },
            },
        },
    },
}


def load_scenario(text: str) -> Scenario:
    """Parse and fully validate a scenario document (JSON text)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from None

    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: e.json_path)
    if errors:
        first = errors[0]
        raise ScenarioError(f"{first.json_path}: {first.message}")

    try:
        topology = build_topology(
            doc["topology"]["nodes"], doc["topology"]["edges"],
            directed=doc["topology"].get("directed", False),
        )
    except TopologyError as exc:
        raise ScenarioError(f"$.topology: {exc}") from None

    try:
        params = PropagationParams.from_wire(doc["params"])
    except ParamError as exc:
        raise ScenarioError(f"$.params: {exc}") from None

    assignment = {node.id: doc["initialState"]["default"] for node in topology.nodes}
    for node_id, letter in doc["initialState"].get("overrides", {}).items():
        if node_id not in assignment:
            raise ScenarioError(f"$.initialState.overrides: unknown node id: {node_id}")
        assignment[node_id] = letter

    sim_doc = doc["simulation"]
    sim = SimulationConfig(
        runs_per_event=sim_doc["s"],
        horizon_per_event=float(sim_doc["horizonPerEvent"]),
        dt=float(sim_doc.get("dt", 0.05)),
        mode=Mode.AGENT if sim_doc.get("mode", "meanfield") == "agent" else Mode.MEAN_FIELD,
        base_seed=int(sim_doc.get("baseSeed", 42)),
        mean_field_jitter=bool(sim_doc.get("meanFieldJitter", False)),
        sample_stride=int(sim_doc.get("sampleStride", 1)),
    )

    events = _parse_events(doc["events"], sim.horizon_per_event)
    weights = PerspectiveWeights.from_wire(doc.get("perspectiveWeights"))

    meta = doc["meta"]
    return Scenario(
        id=meta["id"],
        title=meta.get("title", meta["id"]),
        description=meta.get("description", ""),
        topology=topology,
        base_params=params,
        initial_assignment=assignment,
        events=events,
        sim=sim,
        weights=weights,
        source_text=json.dumps(doc, sort_keys=True),
    )


def _parse_events(event_docs, horizon_per_event: float) -> tuple[Event, ...]:
    events = []
    for position, event_doc in enumerate(event_docs):
        path = f"$.events[{position}]"
        index = event_doc["i"]
        if index != position + 1:
            raise ScenarioError(f"{path}.i: event indices must be contiguous from 1 "
                                f"(expected {position + 1}, got {index})")
        for deltas_path, deltas in _event_deltas(event_doc, path):
            try:
                validate_deltas(deltas)
            except ParamError as exc:
                raise ScenarioError(f"{deltas_path}: {exc}") from None
        courses = []
        course_ids = set()
        for k, course_doc in enumerate(event_doc.get("courses", [])):
            if course_doc["id"] in course_ids:
                raise ScenarioError(f"{path}.courses[{k}]: duplicate course id: {course_doc['id']}")
            course_ids.add(course_doc["id"])
            courses.append(CourseOfAction(
                id=course_doc["id"],
                title=course_doc["title"],
                rationale=course_doc.get("rationale", ""),
                param_deltas=course_doc.get("paramDeltas", {}),
                lead_time=float(course_doc.get("leadTime", 0.0)),
                cost_label=course_doc.get("costLabel", ""),
            ))
        events.append(Event(
            index=index,
            phase=Phase(event_doc["phase"]),
            at_time=float(event_doc["atTime"]),
            narrative=event_doc["narrative"],
            context_notes=event_doc.get("contextNotes", ""),
            param_deltas=event_doc.get("paramDeltas", {}),
            guiding_questions=tuple(event_doc.get("guidingQuestions", [])),
            courses=tuple(courses),
        ))

    times = [event.at_time for event in events]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ScenarioError("$.events: events not time-ordered")
    phases = [PHASE_ORDER.index(event.phase) for event in events]
    if any(b < a for a, b in zip(phases, phases[1:])):
        raise ScenarioError("$.events: phases must be non-decreasing "
                            "(PRE_CRISIS, CRISIS, POST_CRISIS)")
    for event in events:
        window = ((event.index - 1) * horizon_per_event, event.index * horizon_per_event)
        if not window[0] <= event.at_time <= window[1]:
            raise ScenarioError(
                f"$.events[{event.index - 1}].atTime: {event.at_time} outside the event's "
                f"window [{window[0]}, {window[1]}]"
            )
    return tuple(events)


def _event_deltas(event_doc, path):
    yield f"{path}.paramDeltas", event_doc.get("paramDeltas", {})
    for k, course_doc in enumerate(event_doc.get("courses", [])):
        yield f"{path}.courses[{k}].paramDeltas", course_doc.get("paramDeltas", {})


def load_scenario_file(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return load_scenario(handle.read())


def load_bundled(name: str = BUNDLED_SCENARIO) -> Scenario:
    """Load a scenario shipped with the package."""
    resource = resources.files("marittx.scenario").joinpath(f"data/{name}.json")
    return load_scenario(resource.read_text(encoding="utf-8"))

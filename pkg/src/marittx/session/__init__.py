"""Exercise lifecycle service: orchestration, persistence, HTTP API, CLI."""

from .orchestrator import (
    ACTIONS,
    ConflictError,
    ExerciseSession,
    Orchestrator,
    Participants,
    SessionError,
    SessionPhase,
    StreamHub,
    TransitionError,
    UnknownScenarioError,
    UnknownSessionError,
    ValidationError,
    replay_session,
)
from .store import SessionStore, StoreError, canonical_json, digest

__all__ = [
    "ACTIONS",
    "ConflictError",
    "ExerciseSession",
    "Orchestrator",
    "Participants",
    "SessionError",
    "SessionPhase",
    "StreamHub",
    "TransitionError",
    "UnknownScenarioError",
    "UnknownSessionError",
    "ValidationError",
    "replay_session",
    "SessionStore",
    "StoreError",
    "canonical_json",
    "digest",
]

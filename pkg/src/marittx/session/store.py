"""Per-session persistence: one directory per session, no database.

Layout under the store root:

    <session-id>/
        scenario.json   canonical copy of the scenario document
        log.jsonl       append-only action log, one JSON record per line
        surveys.csv     ingested survey table (created on first ingest)
        runs/           attached trajectories, one JSON file per event
        report.json     last exported report (informational copy)

The log is the source of truth: replaying it against the scenario copy
reconstructs the exact session state.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..analytics.surveys import COLUMNS, to_csv


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


class StoreError(RuntimeError):
    pass


class SessionStore:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _dir(self, session_id: str) -> Path:
        return self.root / session_id

    def exists(self, session_id: str) -> bool:
        return (self._dir(session_id) / "log.jsonl").exists()

    def list_sessions(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if (p / "log.jsonl").exists())

    def create(self, session_id: str, scenario_text: str) -> None:
        directory = self._dir(session_id)
        if directory.exists():
            raise StoreError(f"session directory already exists: {session_id}")
        directory.mkdir(parents=True)
        (directory / "runs").mkdir()
        (directory / "scenario.json").write_text(scenario_text, encoding="utf-8")
        (directory / "log.jsonl").touch()

    def scenario_text(self, session_id: str) -> str:
        return (self._dir(session_id) / "scenario.json").read_text(encoding="utf-8")

    def append_log(self, session_id: str, record: dict) -> None:
        line = canonical_json(record)
        with open(self._dir(session_id) / "log.jsonl", "a", encoding="utf-8") as handle:
            handle.write(line + "\n")
            handle.flush()

    def read_log(self, session_id: str) -> list[dict]:
        path = self._dir(session_id) / "log.jsonl"
        if not path.exists():
            raise StoreError(f"unknown session: {session_id}")
        records = []
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records

    def write_runs(self, session_id: str, event_index: int, payload: dict) -> None:
        path = self._dir(session_id) / "runs" / f"event-{event_index}.json"
        path.write_text(canonical_json(payload), encoding="utf-8")

    def read_runs(self, session_id: str, event_index: int) -> dict:
        path = self._dir(session_id) / "runs" / f"event-{event_index}.json"
        if not path.exists():
            raise StoreError(f"no runs recorded for event {event_index}")
        return json.loads(path.read_text(encoding="utf-8"))

    def write_surveys(self, session_id: str, rows) -> None:
        (self._dir(session_id) / "surveys.csv").write_text(to_csv(rows), encoding="utf-8")

    def write_report(self, session_id: str, report: dict) -> bytes:
        data = canonical_json(report).encode("utf-8")
        (self._dir(session_id) / "report.json").write_bytes(data)
        return data


# Survey table column order, re-exported for callers assembling rows.
SURVEY_COLUMNS = COLUMNS

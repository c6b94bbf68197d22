"""HTTP facade for the orchestrator (facilitator console backend).

Endpoints (JSON bodies): POST /sessions, GET /sessions/{id},
POST /sessions/{id}/advance, POST /sessions/{id}/whatif,
GET /sessions/{id}/runs/{event}, POST /sessions/{id}/surveys,
GET /sessions/{id}/report, GET /sessions/{id}/stream (SSE stream of
perspective snapshots in publication order, resumable via Last-Event-ID or
?after=N). Errors carry a machine-readable code and a human message.

If the MARITTX_TOKEN environment variable is set, every request must carry
``Authorization: Bearer <token>``.
"""

from __future__ import annotations

import asyncio
import json
import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse

from ..propagation import ParamError, SimulationError, StateError, TopologyError
from ..scenario import CycleError, ScenarioError
from .orchestrator import Orchestrator, SessionError, UnknownScenarioError, UnknownSessionError
from .store import StoreError

_STREAM_POLL_SECONDS = 0.2
_STREAM_KEEPALIVE_SECONDS = 15.0


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(orchestrator: Orchestrator) -> FastAPI:
    app = FastAPI(title="marittx orchestrator", version="0.1.0")
    token = os.environ.get("MARITTX_TOKEN", "")

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if token and request.headers.get("authorization") != f"Bearer {token}":
            return _error_response(401, "unauthorized", "missing or invalid session token")
        return await call_next(request)

    @app.exception_handler(UnknownSessionError)
    @app.exception_handler(UnknownScenarioError)
    async def not_found(request: Request, exc: SessionError):
        return _error_response(404, exc.code, str(exc))

    @app.exception_handler(SessionError)
    async def session_error(request: Request, exc: SessionError):
        status = 409 if exc.code in ("conflict", "illegal_transition") else 400
        return _error_response(status, exc.code, str(exc))

    @app.exception_handler(CycleError)
    async def cycle_error(request: Request, exc: CycleError):
        return _error_response(409, "illegal_transition", str(exc))

    @app.exception_handler(ScenarioError)
    @app.exception_handler(TopologyError)
    @app.exception_handler(ParamError)
    @app.exception_handler(StateError)
    async def bad_input(request: Request, exc: Exception):
        return _error_response(400, "validation", str(exc))

    @app.exception_handler(SimulationError)
    async def simulation_error(request: Request, exc: SimulationError):
        return _error_response(422, "simulation", str(exc))

    @app.exception_handler(StoreError)
    async def store_error(request: Request, exc: StoreError):
        return _error_response(404, "not_found", str(exc))

    @app.get("/health")
    def health():
        return {"status": "ok", "scenarios": sorted(orchestrator.scenarios)}

    @app.get("/scenarios")
    def scenarios():
        return {
            "scenarios": [
                {
                    "id": scenario.id,
                    "title": scenario.title,
                    "events": scenario.event_count,
                    "runsPerEvent": scenario.sim.runs_per_event,
                    "mode": scenario.sim.mode.value,
                }
                for scenario in orchestrator.scenarios.values()
            ]
        }

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.json()
        session = orchestrator.create_session(
            scenario_id=body.get("scenarioId", ""),
            participants=body.get("participants", {}),
            session_id=body.get("sessionId"),
            actor=body.get("actor", "facilitator"),
        )
        return orchestrator.view(session.session_id)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return orchestrator.view(session_id)

    @app.post("/sessions/{session_id}/advance")
    async def advance(session_id: str, request: Request):
        body = await request.json()
        return orchestrator.advance(
            session_id,
            action=body.get("action", ""),
            payload=body.get("payload", {}),
            actor=body.get("actor", "facilitator"),
        )

    @app.post("/sessions/{session_id}/whatif")
    async def whatif(session_id: str, request: Request):
        body = await request.json()
        horizon = float(body.get("horizon", 12.0))
        return orchestrator.whatif(session_id, body.get("coaId"), horizon)

    @app.get("/sessions/{session_id}/runs/{event}")
    def runs(session_id: str, event: int):
        return orchestrator.runs(session_id, event)

    @app.post("/sessions/{session_id}/surveys")
    async def surveys(session_id: str, request: Request):
        body = await request.json()
        return orchestrator.ingest_survey(
            session_id, body.get("rows", []), actor=body.get("actor", "facilitator")
        )

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        document = orchestrator.export_report(session_id)
        # Serialized once, canonically: exporting twice is byte-identical.
        data = json.dumps(document, sort_keys=True, separators=(",", ":"))
        return Response(content=data, media_type="application/json")

    @app.get("/sessions/{session_id}/stream")
    async def stream(session_id: str, request: Request, after: int = 0,
                     limit: int = 0, idleTimeout: float = 0.0):
        """Snapshot stream in publication order; resumable via Last-Event-ID.

        ``limit`` > 0 closes the stream after that many records and
        ``idleTimeout`` > 0 closes it after that many idle seconds, for
        fetch-and-close consumers; both default to unbounded.
        """
        last_event_id = request.headers.get("last-event-id")
        if last_event_id is not None:
            after = int(last_event_id)
        hub = orchestrator.hub(session_id)

        async def generate(cursor: int):
            sent = 0
            idle = 0.0
            since_keepalive = 0.0
            while True:
                if await request.is_disconnected():
                    return
                records = hub.after(cursor)
                if records:
                    idle = 0.0
                    since_keepalive = 0.0
                    for record in records:
                        cursor = record["seq"]
                        payload = json.dumps(record, sort_keys=True)
                        yield f"id: {record['seq']}\ndata: {payload}\n\n"
                        sent += 1
                        if limit and sent >= limit:
                            return
                else:
                    if idleTimeout and idle >= idleTimeout:
                        return
                    await asyncio.sleep(_STREAM_POLL_SECONDS)
                    idle += _STREAM_POLL_SECONDS
                    since_keepalive += _STREAM_POLL_SECONDS
                    if since_keepalive >= _STREAM_KEEPALIVE_SECONDS:
                        since_keepalive = 0.0
                        yield ": keepalive\n\n"

        return StreamingResponse(generate(after), media_type="text/event-stream")

    return app


def serve(orchestrator: Orchestrator, host: str = "127.0.0.1", port: int = 8000):
    import uvicorn

    uvicorn.run(create_app(orchestrator), host=host, port=port, log_level="warning")

"""Local HTTP API over sessions: create, message, long-poll events, inject
world events, and read graph snapshots.

The service is a thin adapter over the orchestrator: it assigns sequence
numbers and timestamps to the loop's events and serializes turn execution
per session, nothing more.
"""

from __future__ import annotations

import threading
import time
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import __version__, fixtures, scenario, toolkit
from .gateway import LiveConfig, LiveGateway, ScriptedGateway
from .orchestrator import (
    Session,
    SessionConfig,
    TERMINATION_CONTEXT,
    TERMINATION_TRANSPORT,
)


class SessionRunner:
    """One live session: event log, turn serialization, queued world events."""

    def __init__(self, session_id: str, session: Session):
        self.id = session_id
        self.session = session
        session.on_event = self._on_session_event
        self.events: list[dict] = []
        self.finished = False
        self._busy = False
        self._pending_events: list[scenario.WorldEvent] = []
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)

    # -- event log ------------------------------------------------------------

    def _append(self, kind: str, payload: dict) -> None:
        with self._cond:
            self.events.append({
                "seq": len(self.events) + 1,
                "kind": kind,
                "payload": payload,
                "timestamp": time.time(),
            })
            self._cond.notify_all()

    def _on_session_event(self, event) -> None:
        self._append(event.kind, event.payload)

    def events_since(self, since: int, timeout: float) -> list[dict]:
        deadline = time.monotonic() + timeout
        with self._cond:
            while True:
                pending = [e for e in self.events if e["seq"] > since]
                if pending or time.monotonic() >= deadline:
                    return list(pending)
                self._cond.wait(timeout=max(0.01, deadline - time.monotonic()))

    # -- turns ------------------------------------------------------------------

    def accept_message(self, text: str) -> None:
        with self._lock:
            if self.finished:
                raise HTTPException(status_code=409, detail="session is finished")
            if self._busy:
                raise HTTPException(status_code=409, detail="a turn is already in flight")
            self._busy = True
        threading.Thread(target=self._worker, args=(text,), daemon=True).start()

    def accept_world_event(self, event: scenario.WorldEvent) -> None:
        world = self.session.state.world
        if world is None:
            raise HTTPException(status_code=400, detail="world events only apply to disaster sessions")
        if event.kind not in scenario.EVENT_KINDS:
            raise HTTPException(status_code=400,
                                detail=f"unknown event kind '{event.kind}'")
        if event.location not in world.locations:
            raise HTTPException(status_code=400, detail=f"unknown location '{event.location}'")
        with self._lock:
            if self.finished:
                raise HTTPException(status_code=409, detail="session is finished")
            self._pending_events.append(event)
            if self._busy:
                return  # applied at the next turn boundary
            self._busy = True
        threading.Thread(target=self._worker, args=(None,), daemon=True).start()

    def _apply_world_event(self, event: scenario.WorldEvent) -> str | None:
        world = self.session.state.world
        try:
            summary = world.apply_event(event)
        except scenario.ScenarioError as exc:
            self._append("world_event", {**event.to_json(), "error": str(exc)})
            return None
        self._append("world_event", {**event.to_json(), "summary": summary})
        return event.user_message()

    def _worker(self, text: str | None) -> None:
        while True:
            if text is None:
                with self._lock:
                    event = self._pending_events.pop(0) if self._pending_events else None
                if event is not None:
                    text = self._apply_world_event(event)
                    if text is None:
                        continue
            if text is not None:
                outcome = self.session.send(text)
                if outcome.termination in (TERMINATION_CONTEXT, TERMINATION_TRANSPORT):
                    self.finished = True
                text = None
            with self._lock:
                if not self._pending_events or self.finished:
                    self._busy = False
                    return


class CreateSessionBody(BaseModel):
    kind: str = toolkit.GRAPH_SESSION
    config: dict = {}


class MessageBody(BaseModel):
    text: str


class WorldEventBody(BaseModel):
    kind: str
    location: str
    details: dict = {}


def _build_session(body: CreateSessionBody) -> Session:
    if body.kind not in toolkit.SESSION_KINDS:
        raise HTTPException(status_code=400,
                            detail=f"unknown session kind '{body.kind}'; expected one of "
                                   + ", ".join(toolkit.SESSION_KINDS))
    cfg = body.config or {}
    try:
        config = SessionConfig(
            session_kind=body.kind,
            max_rounds=int(cfg.get("max_rounds", 16)),
            context_budget_tokens=int(cfg.get("context_budget_tokens", 8192)),
            model=str(cfg.get("model", "gpt-4-0613")),
            temperature=float(cfg.get("temperature", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=f"bad config: {exc}") from exc
    policy = cfg.get("policy")
    if policy:
        try:
            gateway: object = fixtures.scripted_gateway(policy)
        except KeyError as exc:
            raise HTTPException(status_code=400, detail=str(exc.args[0])) from exc
    else:
        gateway = LiveGateway(LiveConfig(
            base_url=str(cfg.get("base_url", LiveConfig.base_url)),
            api_key_env=str(cfg.get("api_key_env", LiveConfig.api_key_env)),
        ))
    state = toolkit.SessionState(kind=body.kind)
    if body.kind == toolkit.DISASTER_SESSION and cfg.get("scenario_file"):
        try:
            state.world = scenario.load_scenario(cfg["scenario_file"])
        except (OSError, scenario.ScenarioError) as exc:
            raise HTTPException(status_code=400, detail=f"bad scenario file: {exc}") from exc
    return Session(config, gateway, state=state)


def create_app() -> FastAPI:
    app = FastAPI(title="graphcall", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    runners: dict[str, SessionRunner] = {}

    def get_runner(session_id: str) -> SessionRunner:
        runner = runners.get(session_id)
        if runner is None:
            raise HTTPException(status_code=404, detail=f"no session '{session_id}'")
        return runner

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "name": "graphcall", "version": __version__}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        session = _build_session(body)
        session_id = uuid.uuid4().hex[:12]
        runners[session_id] = SessionRunner(session_id, session)
        return {"session_id": session_id}

    @app.post("/sessions/{session_id}/message", status_code=202)
    def post_message(session_id: str, body: MessageBody) -> dict:
        get_runner(session_id).accept_message(body.text)
        return {"accepted": True}

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str, since: int = 0, timeout: float = 10.0) -> dict:
        runner = get_runner(session_id)
        events = runner.events_since(since, min(timeout, 30.0))
        return {"events": events, "finished": runner.finished}

    @app.post("/sessions/{session_id}/world-event", status_code=202)
    def post_world_event(session_id: str, body: WorldEventBody) -> dict:
        runner = get_runner(session_id)
        runner.accept_world_event(scenario.WorldEvent(
            kind=body.kind, location=body.location, details=body.details or {}
        ))
        return {"accepted": True}

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str) -> dict:
        return get_runner(session_id).session.state.graph_snapshot()

    return app

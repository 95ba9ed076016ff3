"""HTTP service: live sessions over JSON, backed by an event-sourced store.

Endpoints: POST /sessions, POST /sessions/{id}/messages,
GET /sessions/{id}/state, GET /tasks. Each session's turns are appended to a
write-ahead JSONL log whose replay reproduces the live snapshot.
"""

from __future__ import annotations

import json
import logging
import threading
from pathlib import Path
from typing import Any, Optional

from .config import ServiceConfig
from .errors import (
    GatewayFailure,
    SessionComplete,
    StacktalkError,
    UnknownSession,
    UnknownTask,
)
from .gateway import Backend, HttpBackend, HttpBackendConfig, PromptPack, ScriptedBackend
from .model import Completion
from .pipeline import DialogueEngine, EngineConfig, SessionState, TurnResult
from .stack import render_stack_status
from .tasks import TaskLibrary, load_library

logger = logging.getLogger(__name__)


def _greeting_for(session: SessionState) -> str:
    """Deterministic greeting derived from the first enrichment, no LLM call."""
    top = session.stack.current_topic()
    if top is None:
        return "Hello! How can I help you today?"
    return f"Hello! To get started, let's talk about: {top.title}."


class SessionStore:
    """In-memory sessions plus an append-only per-session event log on disk."""

    def __init__(self, log_dir: Optional[Path] = None):
        self.sessions: dict[str, SessionState] = {}
        self.events: dict[str, list[dict[str, Any]]] = {}
        self.locks: dict[str, threading.Lock] = {}
        self.log_dir = log_dir
        self._store_lock = threading.Lock()
        if log_dir is not None:
            log_dir.mkdir(parents=True, exist_ok=True)

    def add(self, session: SessionState) -> None:
        with self._store_lock:
            self.sessions[session.session_id] = session
            self.events[session.session_id] = []
            self.locks[session.session_id] = threading.Lock()
        self.append_event(
            session.session_id,
            {"type": "created", "session": session.to_dict()},
        )

    def get(self, session_id: str) -> SessionState:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        if session_id not in self.locks:
            raise UnknownSession(session_id)
        return self.locks[session_id]

    def append_event(self, session_id: str, event: dict[str, Any]) -> None:
        self.events[session_id].append(event)
        if self.log_dir is not None:
            path = self.log_dir / f"{session_id}.jsonl"
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event) + "\n")

    def event_log(self, session_id: str) -> list[dict[str, Any]]:
        if session_id not in self.events:
            raise UnknownSession(session_id)
        return list(self.events[session_id])


def replay_session(events: list[dict[str, Any]]) -> SessionState:
    """Rebuild a session purely from its event log, without any LLM calls.

    The created snapshot already holds the preloaded checklist, so only the
    recorded turn deltas are applied on top of it.
    """
    from .model import ChatMessage
    from .stack import _replay_one

    if not events or events[0]["type"] != "created":
        raise ValueError("event log must start with a 'created' event")
    session = SessionState.from_dict(events[0]["session"])
    for event in events[1:]:
        if event["type"] != "turn":
            continue
        result = TurnResult.from_dict(event["result"])
        _replay_one(session.stack, result.delta)
        if result.report_delta is not None:
            _replay_one(session.stack, result.report_delta)
        session.history.extend(ChatMessage.from_dict(m) for m in event["messages"])
        session.round = result.round + 1
        session.completion = result.completion
    return session


class SessionService:
    """Framework-free core of the HTTP API; the FastAPI layer is a thin shim."""

    def __init__(self, engine: DialogueEngine, library: TaskLibrary, store: SessionStore):
        self.engine = engine
        self.library = library
        self.store = store

    def handle_create_session(self, task_id: str) -> dict[str, Any]:
        if task_id not in self.library:
            raise UnknownTask(task_id)
        session = self.engine.start_session(self.library.get(task_id))
        self.store.add(session)
        return {
            "session_id": session.session_id,
            "task_id": task_id,
            "greeting": _greeting_for(session),
            "stack": session.stack.to_dict(),
            "stack_rendered": render_stack_status(session.stack),
            "completion": session.completion.value,
        }

    def handle_post_message(self, session_id: str, text: str) -> dict[str, Any]:
        session = self.store.get(session_id)
        with self.store.lock(session_id):
            if session.completion is Completion.COMPLETE:
                raise SessionComplete(session_id)
            result = self.engine.take_turn(session, text)
            self.store.append_event(
                session_id,
                {
                    "type": "turn",
                    "user_message": text,
                    "messages": [m.to_dict() for m in session.history[-2:]],
                    "result": result.to_dict(),
                },
            )
        payload = result.to_dict()
        payload["session_id"] = session_id
        payload["stack"] = session.stack.to_dict()
        payload["stack_rendered"] = render_stack_status(session.stack)
        completed, total = session.stack.checklist_progress(session.task)
        payload["checklist_progress"] = {"completed": completed, "total": total}
        return payload

    def handle_get_state(self, session_id: str) -> dict[str, Any]:
        session = self.store.get(session_id)
        completed, total = session.stack.checklist_progress(session.task)
        return {
            "session_id": session_id,
            "task_id": session.task.task_id,
            "round": session.round,
            "completion": session.completion.value,
            "stack": session.stack.to_dict(),
            "stack_rendered": render_stack_status(session.stack),
            "history": [m.to_dict() for m in session.history],
            "checklist_progress": {"completed": completed, "total": total},
            "turns": [
                e["result"]
                for e in self.store.event_log(session_id)
                if e["type"] == "turn"
            ],
        }

    def handle_list_tasks(self) -> list[dict[str, str]]:
        from .tasks import list_scenarios

        return list_scenarios(self.library)


def build_backend(config: ServiceConfig) -> Backend:
    if config.backend == "scripted":
        return ScriptedBackend()
    if config.backend == "http":
        return HttpBackend(
            HttpBackendConfig(
                base_url=config.api_base_url,
                model=config.model,
                api_key_env=config.api_key_env,
                retry_limit=config.retry_limit,
            )
        )
    raise ValueError(f"unknown backend '{config.backend}'")


def build_service(config: ServiceConfig, backend: Optional[Backend] = None) -> SessionService:
    backend = backend or build_backend(config)
    pack = PromptPack.load(config.prompt_pack_path, config.prompt_profile)
    engine = DialogueEngine(
        backend,
        pack,
        EngineConfig(
            eviction_window=config.eviction_window,
            context_window=config.context_window,
        ),
    )
    library = load_library(config.task_library_path, strict=True)
    log_dir = Path(config.session_log_dir) if config.session_log_dir else None
    return SessionService(engine, library, SessionStore(log_dir))


from pydantic import BaseModel


class CreateSessionBody(BaseModel):
    task_id: str


class MessageBody(BaseModel):
    text: str


def create_app(config: ServiceConfig, backend: Optional[Backend] = None):
    """FastAPI application wrapping a SessionService."""
    from fastapi import FastAPI, HTTPException
    from fastapi.responses import JSONResponse

    service = build_service(config, backend)
    app = FastAPI(title="stacktalk", version="0.1.0")
    app.state.service = service

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            return service.handle_create_session(body.task_id)
        except UnknownTask as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageBody):
        try:
            return service.handle_post_message(session_id, body.text)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except SessionComplete as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except GatewayFailure as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        except StacktalkError as exc:
            raise HTTPException(status_code=500, detail=str(exc))

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        try:
            return service.handle_get_state(session_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/tasks")
    def list_tasks():
        return service.handle_list_tasks()

    @app.exception_handler(StacktalkError)
    def engine_error(_request, exc: StacktalkError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    static_dir = config.static_dir
    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app

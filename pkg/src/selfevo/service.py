"""Human-guidance service: read endpoints, command endpoints, event stream.

A background ticker advances the runtime at a configurable pace while
request handlers only read snapshots or enqueue commands, so reads never
block the tick loop. The event stream is incremental: clients pass the
last sequence number they saw and receive everything after it, gap-free,
either as one JSON page (`/events`) or as a server-sent-event stream
(`/events/stream`).
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import ValidationError
from .runtime import Runtime


class EvolutionTargetBody(BaseModel):
    utility: list[float]
    context: list[float]


class GoalBody(BaseModel):
    loss_threshold: float


class FeedbackBody(BaseModel):
    subject_seq: int | None = None
    verdict: str


class Ticker:
    """Advances the runtime on a wall-clock pace; tick work stays serialized."""

    def __init__(self, runtime: Runtime, ms_per_tick: int = 200):
        self.runtime = runtime
        self.ms_per_tick = ms_per_tick
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._loop, daemon=True)

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        self._thread.join(timeout=5)

    def _loop(self) -> None:
        while not self._stop.is_set():
            if not self.runtime.paused and not self.runtime.finished:
                self.runtime.tick_once()
            if self.runtime.finished:
                self.runtime.paused = True
            self._stop.wait(self.ms_per_tick / 1000.0)


def create_service_app(runtime: Runtime, dashboard_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="selfevo-guidance")

    @app.get("/state")
    def state():
        return runtime.snapshot()

    @app.get("/odd")
    def odd_model():
        return runtime.odd_snapshot()

    @app.get("/events")
    def events(since: int = 0, limit: int = 1000):
        records = runtime.log.records(since=since)[:limit]
        return {"since": since, "last_seq": runtime.log.last_seq,
                "events": [r.to_dict() for r in records]}

    @app.get("/events/stream")
    def events_stream(since: int = 0, limit: int | None = None):
        def frames():
            cursor = since
            sent = 0
            while True:
                records = runtime.log.wait_for(cursor, timeout=0.5)
                if not records:
                    yield ": keepalive\n\n"
                    continue
                for record in records:
                    yield f"id: {record.seq}\ndata: {json.dumps(record.to_dict())}\n\n"
                    sent += 1
                    if limit is not None and sent >= limit:
                        return
                cursor = records[-1].seq

        return StreamingResponse(frames(), media_type="text/event-stream")

    def _submit(kind: str, body: dict):
        try:
            command = runtime.submit_command(kind, body)
        except ValidationError as exc:
            raise HTTPException(422, detail={"error": str(exc), "fields": exc.fields})
        return {"command_id": command.command_id, "kind": kind,
                "issued_at": command.issued_at, "status": "queued"}

    @app.post("/commands/evolution-target")
    def submit_evolution_target(body: EvolutionTargetBody):
        return _submit("add_evolution_target",
                       {"utility": body.utility, "context": body.context})

    @app.post("/commands/goal")
    def submit_goal(body: GoalBody):
        return _submit("add_goal", {"loss_threshold": body.loss_threshold})

    @app.post("/commands/approve")
    def approve():
        return _submit("approve", {})

    @app.post("/commands/feedback")
    def feedback(body: FeedbackBody):
        return _submit("feedback", {"subject_seq": body.subject_seq,
                                    "verdict": body.verdict})

    @app.post("/commands/pause")
    def pause():
        runtime.paused = True
        return {"paused": True}

    @app.post("/commands/resume")
    def resume():
        runtime.paused = False
        return {"paused": False}

    if dashboard_dir and Path(dashboard_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(dashboard_dir), html=True),
                  name="dashboard")

    return app

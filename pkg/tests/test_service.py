import json
import time

import pytest
from fastapi.testclient import TestClient

from selfevo.runtime import Runtime
from selfevo.service import Ticker, create_service_app


@pytest.fixture
def runtime(evolution):
    return Runtime(evolution)


@pytest.fixture
def client(runtime):
    return TestClient(create_service_app(runtime))


class TestReadEndpoints:
    def test_state_snapshot(self, client, runtime):
        runtime.tick_once()
        doc = client.get("/state").json()
        assert doc["tick"] == 1
        assert doc["working_point"] == {"utility": 5.0, "context": -5.0}
        assert doc["config"] == "power-min"
        assert doc["safe_state"] is False
        assert doc["odd_version"] == 1

    def test_odd_document(self, client):
        doc = client.get("/odd").json()
        assert doc["version"] == 1
        ids = [c["id"] for c in doc["configurations"]]
        assert ids == ["power-min", "power-medium", "power-max"]

    def test_events_incremental_without_gaps_or_duplicates(self, client, runtime):
        for _ in range(5):
            runtime.tick_once()
        first = client.get("/events", params={"since": 0}).json()
        seqs = [e["seq"] for e in first["events"]]
        assert seqs == list(range(1, len(seqs) + 1))
        cut = seqs[len(seqs) // 2]
        rest = client.get("/events", params={"since": cut}).json()
        resumed = seqs[:seqs.index(cut) + 1] + [e["seq"] for e in rest["events"]]
        assert resumed == seqs

    def test_event_stream_frames_carry_ids(self, client, runtime):
        for _ in range(2):
            runtime.tick_once()
        with client.stream("GET", "/events/stream",
                           params={"since": 0, "limit": 3}) as response:
            body = "".join(response.iter_text())
        frames = [f for f in body.split("\n\n") if f.startswith("id:")]
        assert len(frames) == 3
        first = frames[0].splitlines()
        assert first[0] == "id: 1"
        assert json.loads(first[1].removeprefix("data: "))["seq"] == 1


class TestCommandEndpoints:
    def test_evolution_target_drives_pipeline(self, client, runtime):
        runtime.tick_once()
        ack = client.post("/commands/evolution-target",
                          json={"utility": [20, 40], "context": [-20, 0]}).json()
        assert ack["status"] == "queued" and ack["command_id"] >= 1
        runtime.tick_once()   # command applies at the boundary, pipeline runs
        kinds = [r.kind for r in runtime.log.records()]
        assert "trigger" in kinds and "enactment" in kinds
        assert client.get("/state").json()["odd_version"] == 2

    def test_inverted_interval_rejected_with_fields(self, client):
        response = client.post("/commands/evolution-target",
                               json={"utility": [40, 20], "context": [-20, 0]})
        assert response.status_code == 422
        assert any(field[0] == "utility"
                   for field in response.json()["detail"]["fields"])

    def test_approve_without_pending_is_validation_error(self, client):
        response = client.post("/commands/approve")
        assert response.status_code == 422

    def test_approval_gate_flow(self, evolution):
        runtime = Runtime(evolution, approval_gate=True)
        client = TestClient(create_service_app(runtime))
        for _ in range(10):
            runtime.tick_once()
        state = client.get("/state").json()
        assert state["safe_state"] is True
        assert state["pending_approval"]["element_id"] == "dualband-radio"
        assert client.post("/commands/approve").status_code == 200
        runtime.tick_once()
        state = client.get("/state").json()
        assert state["odd_version"] == 2
        assert state["pending_approval"] is None

    def test_feedback_reject_cancels_pending(self, evolution):
        runtime = Runtime(evolution, approval_gate=True)
        client = TestClient(create_service_app(runtime))
        for _ in range(10):
            runtime.tick_once()
        assert client.get("/state").json()["pending_approval"] is not None
        client.post("/commands/feedback", json={"verdict": "reject"})
        runtime.tick_once()
        state = client.get("/state").json()
        assert state["pending_approval"] is None
        assert state["odd_version"] == 1

    def test_goal_update(self, client, runtime):
        client.post("/commands/goal", json={"loss_threshold": 0.1})
        runtime.tick_once()
        assert client.get("/state").json()["loss_threshold"] == 0.1

    def test_pause_and_resume(self, client, runtime):
        assert client.post("/commands/pause").json() == {"paused": True}
        assert runtime.paused
        assert client.post("/commands/resume").json() == {"paused": False}
        assert not runtime.paused


class TestTicker:
    def test_background_ticker_advances_and_stops(self, adaptation):
        runtime = Runtime(adaptation)
        ticker = Ticker(runtime, ms_per_tick=1)
        ticker.start()
        deadline = time.time() + 10
        while not runtime.finished and time.time() < deadline:
            time.sleep(0.01)
        ticker.stop()
        assert runtime.finished
        assert runtime.paused   # a finished run parks itself

    def test_reads_are_safe_while_ticking(self, evolution):
        runtime = Runtime(evolution)
        client = TestClient(create_service_app(runtime))
        ticker = Ticker(runtime, ms_per_tick=1)
        ticker.start()
        try:
            last = 0
            for _ in range(20):
                doc = client.get("/events", params={"since": last}).json()
                seqs = [e["seq"] for e in doc["events"]]
                assert seqs == list(range(last + 1, last + 1 + len(seqs)))
                if seqs:
                    last = seqs[-1]
                time.sleep(0.005)
        finally:
            ticker.stop()

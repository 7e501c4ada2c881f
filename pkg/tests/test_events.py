import threading

import pytest

from selfevo.errors import ValidationError
from selfevo.events import EventLog, EventRecord, replay


def test_seq_is_contiguous_from_one():
    log = EventLog()
    records = [log.append("telemetry", tick=t, payload={"t": t}, odd_version=1)
               for t in range(5)]
    assert [r.seq for r in records] == [1, 2, 3, 4, 5]


def test_unknown_kind_rejected():
    log = EventLog()
    with pytest.raises(ValidationError):
        log.append("gossip", tick=0, payload={}, odd_version=1)


def test_line_round_trip():
    record = EventRecord(seq=3, tick=7, kind="decision",
                         payload={"chosen": "power-min"}, odd_version=2)
    assert EventRecord.from_line(record.to_line()) == record


def test_file_sink_and_replay(tmp_path):
    path = tmp_path / "events.jsonl"
    log = EventLog(sink_path=path)
    for t in range(3):
        log.append("telemetry", tick=t, payload={"loss": 0.0}, odd_version=1)
    log.close()
    records = replay(path)
    assert [r.seq for r in records] == [1, 2, 3]
    assert records[2].payload == {"loss": 0.0}


def test_replay_rejects_seq_gap(tmp_path):
    path = tmp_path / "events.jsonl"
    log = EventLog(sink_path=path)
    log.append("telemetry", tick=0, payload={}, odd_version=1)
    log.append("telemetry", tick=1, payload={}, odd_version=1)
    log.close()
    lines = path.read_text().splitlines()
    path.write_text(lines[1] + "\n")   # drop the first record
    with pytest.raises(ValidationError):
        replay(path)


def test_records_since_filtering():
    log = EventLog()
    for t in range(4):
        log.append("telemetry", tick=t, payload={}, odd_version=1)
    log.append("decision", tick=4, payload={"chosen": "x"}, odd_version=1)
    assert [r.seq for r in log.records(since=3)] == [4, 5]
    assert [r.kind for r in log.records(kinds=["decision"])] == ["decision"]


def test_wait_for_wakes_on_append():
    log = EventLog()
    got = []

    def consumer():
        got.extend(log.wait_for(since=0, timeout=5.0))

    thread = threading.Thread(target=consumer)
    thread.start()
    log.append("warning", tick=0, payload={"m": "hi"}, odd_version=1)
    thread.join(timeout=5.0)
    assert len(got) == 1 and got[0].kind == "warning"


def test_unsupported_schema_version_rejected():
    with pytest.raises(ValidationError):
        EventRecord.from_line('{"v": 99, "seq": 1, "tick": 0, "kind": "telemetry", '
                              '"payload": {}, "odd_version": 1}')

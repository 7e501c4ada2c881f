"""Append-only, replayable event log.

One JSON object per line, schema-versioned via a ``v`` field. Sequence
numbers are contiguous from 1, so a reader that remembers the last seq
it saw can resume without gaps or duplicates. Records carry simulated
ticks only; nothing wall-clock-dependent is written, which is what makes
two equally seeded runs byte-identical.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .errors import ValidationError

SCHEMA_VERSION = 1

EVENT_KINDS = ("telemetry", "decision", "trigger", "evolution",
               "enactment", "command", "warning")


@dataclass(frozen=True)
class EventRecord:
    seq: int
    tick: int
    kind: str
    payload: dict
    odd_version: int

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValidationError([("kind", f"unknown event kind {self.kind!r}")])

    def to_line(self) -> str:
        return json.dumps({
            "v": SCHEMA_VERSION,
            "seq": self.seq,
            "tick": self.tick,
            "kind": self.kind,
            "odd_version": self.odd_version,
            "payload": self.payload,
        })

    @classmethod
    def from_line(cls, line: str) -> "EventRecord":
        doc = json.loads(line)
        if doc.get("v") != SCHEMA_VERSION:
            raise ValidationError([("v", f"unsupported schema version {doc.get('v')!r}")])
        return cls(seq=doc["seq"], tick=doc["tick"], kind=doc["kind"],
                   payload=doc["payload"], odd_version=doc["odd_version"])

    def to_dict(self) -> dict:
        return json.loads(self.to_line())


class EventLog:
    """In-memory append-only log with an optional file sink.

    Appends are serialized; readers work off the immutable record list
    (records are frozen, appends only extend), so waiting consumers can
    follow the log with `wait_for` without blocking the writer.
    """

    def __init__(self, sink_path: str | Path | None = None):
        self._records: list[EventRecord] = []
        self._lock = threading.Lock()
        self._new_record = threading.Condition(self._lock)
        self._sink = None
        if sink_path is not None:
            Path(sink_path).parent.mkdir(parents=True, exist_ok=True)
            self._sink = open(sink_path, "a", encoding="utf-8")

    def append(self, kind: str, tick: int, payload: dict, odd_version: int) -> EventRecord:
        with self._new_record:
            record = EventRecord(seq=len(self._records) + 1, tick=tick, kind=kind,
                                 payload=payload, odd_version=odd_version)
            self._records.append(record)
            if self._sink:
                self._sink.write(record.to_line() + "\n")
                self._sink.flush()
            self._new_record.notify_all()
            return record

    def close(self) -> None:
        if self._sink:
            self._sink.close()
            self._sink = None

    @property
    def last_seq(self) -> int:
        with self._lock:
            return len(self._records)

    def records(self, since: int = 0, kinds: Iterable[str] | None = None) -> list[EventRecord]:
        """Records with seq > since, optionally restricted to some kinds."""
        with self._lock:
            snapshot = self._records[since:]
        if kinds is not None:
            wanted = set(kinds)
            snapshot = [r for r in snapshot if r.kind in wanted]
        return snapshot

    def wait_for(self, since: int, timeout: float) -> list[EventRecord]:
        """Block until a record with seq > since exists, or the timeout passes."""
        with self._new_record:
            self._new_record.wait_for(lambda: len(self._records) > since, timeout=timeout)
            return self._records[since:]


def replay(path: str | Path) -> list[EventRecord]:
    """Read a log file back; verifies seq contiguity while doing so."""
    records = []
    for i, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        record = EventRecord.from_line(line)
        if record.seq != len(records) + 1:
            raise ValidationError([("seq", f"line {i}: expected seq {len(records) + 1}, "
                                           f"got {record.seq}")])
        records.append(record)
    return records


EmitFn = Callable[..., EventRecord]

"""Compare an event log against an expected trace.

An expectation file is JSON with two optional keys:

  decisions  -- the run's chosen-configuration walk, consecutive
                duplicates collapsed; an out-of-ODD period appears as
                the token "out-of-odd". Compared for exact equality.
  evolution  -- ordered list of evolution step labels ("trigger",
                "evolution:target", ..., "enactment") that must appear
                in the log as a subsequence.

An empty expectation passes vacuously, with a warning saying so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .events import EventRecord, replay

OUT_OF_ODD_TOKEN = "out-of-odd"


@dataclass
class VerifyReport:
    passed: bool
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, ok, detail))
        if not ok:
            self.passed = False

    def lines(self) -> list[str]:
        out = [f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
               for name, ok, detail in self.checks]
        out.extend(f"WARN  {w}" for w in self.warnings)
        out.append(f"{'PASS' if self.passed else 'FAIL'}  overall")
        return out


def decision_walk(records: list[EventRecord]) -> list[tuple[str, int]]:
    """Chosen-config sequence with consecutive duplicates collapsed.

    Each element is (config or out-of-odd token, seq of the first record
    in the stretch), so a mismatch can be pinned to a log location.
    """
    walk: list[tuple[str, int]] = []
    for record in records:
        if record.kind != "decision":
            continue
        chosen = record.payload.get("chosen") or OUT_OF_ODD_TOKEN
        if not walk or walk[-1][0] != chosen:
            walk.append((chosen, record.seq))
    return walk


def evolution_steps(records: list[EventRecord]) -> list[tuple[str, int]]:
    steps = []
    for record in records:
        if record.kind == "trigger":
            steps.append(("trigger", record.seq))
        elif record.kind == "evolution":
            steps.append((f"evolution:{record.payload.get('phase')}", record.seq))
        elif record.kind == "enactment":
            steps.append(("enactment", record.seq))
    return steps


def _is_subsequence(expected: list[str], steps: list[tuple[str, int]]) -> tuple[bool, str]:
    position = 0
    for label in expected:
        while position < len(steps) and steps[position][0] != label:
            position += 1
        if position == len(steps):
            return False, f"missing step {label!r}"
        position += 1
    return True, ""


def verify(log_path: str | Path, expectation_path: str | Path) -> VerifyReport:
    report = VerifyReport(passed=True)
    try:
        records = replay(log_path)
    except (ValidationError, json.JSONDecodeError, OSError) as exc:
        report.add("log parses", False, str(exc))
        return report
    report.add("log parses", True, f"{len(records)} records")

    try:
        expectation = json.loads(Path(expectation_path).read_text())
    except (json.JSONDecodeError, OSError) as exc:
        report.add("expectation parses", False, str(exc))
        return report

    if not expectation:
        report.warnings.append("expectation file is empty; nothing was checked")
        return report

    if "decisions" in expectation:
        expected = list(expectation["decisions"])
        actual = decision_walk(records)
        ok = [config for config, _ in actual] == expected
        detail = ""
        if not ok:
            for i, (config, seq) in enumerate(actual):
                if i >= len(expected) or expected[i] != config:
                    detail = f"diverges at seq {seq}: expected {expected[i] if i < len(expected) else '<end>'!r}, got {config!r}"
                    break
            else:
                detail = f"expected {len(expected)} stretches, got {len(actual)}"
        report.add("decision walk", ok, detail or " -> ".join(c for c, _ in actual))

    if "evolution" in expectation:
        ok, detail = _is_subsequence(list(expectation["evolution"]), evolution_steps(records))
        report.add("evolution steps", ok, detail)

    return report

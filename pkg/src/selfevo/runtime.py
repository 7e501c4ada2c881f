"""Tick-loop runtime: wires simulator, feedback loop, engine, and log.

One writer advances the loop; everything observable flows into the
append-only event log. Operator commands are queued and take effect at
the next tick boundary, never mid-tick, and the evolution engine runs
between ticks, so a tick always sees a consistent (ODD, configuration)
pair. Given equal seeds, two runs of the same scenario produce
byte-identical logs.
"""

from __future__ import annotations

import csv
import itertools
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError
from .evolution import EngineConfig, EvolutionEngine
from .mape import AdaptationGoals, Knowledge, MapeLoop
from .odd import Region, model_to_dict
from .presets import SAFE_CONFIG, canonical_catalogue
from .events import EventLog
from .scenario import Scenario
from .simulator import EnvironmentTrace, Simulator
from .warehouse import Catalogue


@dataclass
class GuidanceCommand:
    kind: str                  # add_goal | add_evolution_target | approve | feedback
    body: dict
    issued_at: int             # tick index; commands are clocked by simulated time
    command_id: int = 0

    VALID_KINDS = ("add_goal", "add_evolution_target", "approve", "feedback")

    def validate(self) -> None:
        problems = []
        if self.kind not in self.VALID_KINDS:
            problems.append(("kind", f"unknown command kind {self.kind!r}"))
        if self.kind == "add_evolution_target":
            for axis in ("utility", "context"):
                interval = self.body.get(axis)
                if (not isinstance(interval, (list, tuple)) or len(interval) != 2
                        or interval[0] > interval[1]):
                    problems.append((axis, "must be an ordered [lo, hi] pair"))
        if self.kind == "add_goal":
            threshold = self.body.get("loss_threshold")
            if not isinstance(threshold, (int, float)) or not 0 < threshold < 1:
                problems.append(("loss_threshold", "must be a fraction in (0, 1)"))
        if self.kind == "feedback":
            if self.body.get("verdict") not in ("accept", "reject"):
                problems.append(("verdict", "must be 'accept' or 'reject'"))
        if problems:
            raise ValidationError(problems)


class Runtime:
    """Owns one scenario run end to end."""

    def __init__(self, scenario: Scenario, catalogue: Catalogue | None = None,
                 log_path: str | Path | None = None,
                 approval_gate: bool | None = None,
                 warehouse_client=None, endless: bool = False):
        self.scenario = scenario
        if warehouse_client is not None:
            self.warehouse = warehouse_client
        else:
            catalogue = catalogue if catalogue is not None else (
                Catalogue.load(scenario.catalogue_path) if scenario.catalogue_path
                else canonical_catalogue())
            self.warehouse = catalogue

        gate = scenario.approval_gate if approval_gate is None else approval_gate
        sandbox = scenario.sandbox
        self.engine = EvolutionEngine(
            warehouse=self.warehouse,
            platform_tags=scenario.platform_tags,
            config=EngineConfig(
                debounce=scenario.debounce,
                sandbox_runs=int(sandbox.get("runs", 5)),
                sandbox_grid=tuple(sandbox.get("grid", (5, 5))),
                sandbox_ticks=int(sandbox.get("ticks_per_run", 20)),
                pass_threshold=float(sandbox.get("pass_threshold", 1.0)),
                loss_goal=scenario.loss_goal,
                approval_gate=gate,
            ),
        )

        self.sim = Simulator.init(scenario)
        self.knowledge = Knowledge(
            odd=scenario.odd_model,
            goals=AdaptationGoals(loss_threshold=scenario.loss_goal),
            current_config=self.sim.current_config,
        )
        self.loop = MapeLoop(self.knowledge, safe_config=SAFE_CONFIG)
        self.env = EnvironmentTrace(scenario.environment)
        self.log = EventLog(sink_path=log_path)
        self.telemetry_rows: list[dict] = []

        self._lock = threading.RLock()
        self._command_queue: list[GuidanceCommand] = []
        self._command_ids = itertools.count(1)
        self._scheduled = sorted(scenario.commands, key=lambda c: c["tick"])
        self._current_tick = 0
        self.paused = False
        self.finished = False
        # interactive sessions keep ticking past the scripted schedule (the
        # environment holds its last value) so operator commands still apply
        self.endless = endless

    # -- event emission -------------------------------------------------------

    def _emit(self, kind: str, payload: dict, odd_version: int | None = None):
        version = odd_version if odd_version is not None else self.knowledge.odd.version
        return self.log.append(kind=kind, tick=self._current_tick,
                               payload=payload, odd_version=version)

    # -- commands ---------------------------------------------------------------

    def submit_command(self, kind: str, body: dict) -> GuidanceCommand:
        """Queue an operator command; it takes effect at the next tick boundary."""
        with self._lock:
            command = GuidanceCommand(kind=kind, body=dict(body),
                                      issued_at=self.sim.state.tick,
                                      command_id=next(self._command_ids))
            command.validate()
            if kind == "approve" and self.engine.pending is None:
                raise ValidationError([("approve", "no enactment is awaiting approval")])
            self._command_queue.append(command)
            return command

    def _apply_command(self, command: GuidanceCommand) -> None:
        acknowledged: dict = {"command_id": command.command_id, "kind": command.kind,
                              "body": command.body, "issued_at": command.issued_at}
        if command.kind == "add_evolution_target":
            u = command.body["utility"]
            c = command.body["context"]
            region = Region(context_lo=float(c[0]), context_hi=float(c[1]),
                            utility_lo=float(u[0]), utility_hi=float(u[1]),
                            knowledge="known_unknown")
            self.engine.submit_goal((region,), tick=self.sim.state.tick)
        elif command.kind == "add_goal":
            self.knowledge.goals.loss_threshold = float(command.body["loss_threshold"])
        elif command.kind == "approve":
            acknowledged["applied"] = self.engine.approve()
        elif command.kind == "feedback":
            if command.body.get("verdict") == "reject" and self.engine.pending is not None:
                self.engine.reject_pending()
                acknowledged["applied"] = True
        self._emit("command", acknowledged)

    def _due_commands(self) -> list[GuidanceCommand]:
        tick = self.sim.state.tick
        due = []
        while self._scheduled and self._scheduled[0]["tick"] <= tick:
            entry = self._scheduled.pop(0)
            command = GuidanceCommand(kind=entry["kind"], body=dict(entry.get("body", {})),
                                      issued_at=entry["tick"],
                                      command_id=next(self._command_ids))
            command.validate()
            due.append(command)
        with self._lock:
            due.extend(self._command_queue)
            self._command_queue = []
        return due

    # -- the tick loop ---------------------------------------------------------

    def tick_once(self) -> None:
        """One full cycle: commands, environment, step, feedback loop, engine."""
        with self._lock:
            self._current_tick = self.sim.state.tick
            for command in self._due_commands():
                self._apply_command(command)

            env = self.env.at(self.sim.state.tick)
            telemetry = self.sim.step(env)
            self.telemetry_rows.append(telemetry.to_dict())
            self._emit("telemetry", {
                "demand": telemetry.demand,
                "interference": telemetry.interference,
                "achieved": telemetry.achieved_throughput,
                "loss": telemetry.packet_loss_fraction,
                "energy_mj": telemetry.energy_used_mj,
                "config": telemetry.config_id,
                "safe_state": self.knowledge.safe_state,
            })

            _decision, mape_events = self.loop.mape_tick(telemetry, env, self.sim)
            for kind, payload in mape_events:
                self._emit(kind, payload)

            self.knowledge.odd = self.engine.on_tick(
                list(self.knowledge.history), self.sim, self.knowledge.odd, self._emit)

            if not self.endless and self.sim.state.tick >= self.scenario.ticks:
                self.finished = True

    def run(self) -> None:
        while not self.finished:
            self.tick_once()
        self.log.close()

    # -- state for readers -------------------------------------------------------

    def snapshot(self) -> dict:
        with self._lock:
            point = self.knowledge.current_point
            return {
                "scenario": self.scenario.name,
                "tick": self.sim.state.tick,
                "working_point": None if point is None else
                    {"utility": point.utility, "context": point.context},
                "config": self.knowledge.current_config,
                "safe_state": self.knowledge.safe_state,
                "odd_version": self.knowledge.odd.version,
                "loss_threshold": self.knowledge.goals.loss_threshold,
                "paused": self.paused,
                "finished": self.finished,
                "last_seq": self.log.last_seq,
                "pending_approval": None if self.engine.pending is None else {
                    "element_id": self.engine.pending.entry.element_id,
                    "version": self.engine.pending.entry.version,
                    "target_regions": [r.as_box() for r in self.engine.pending.target.regions],
                    "pass_fraction": self.engine.pending.evidence.pass_fraction,
                },
            }

    def odd_snapshot(self) -> dict:
        with self._lock:
            return model_to_dict(self.knowledge.odd)

    def export_telemetry(self, path: str | Path) -> None:
        fieldnames = ["tick", "demand", "interference", "achieved", "loss", "config"]
        with open(path, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=fieldnames, extrasaction="ignore")
            writer.writeheader()
            for row in self.telemetry_rows:
                writer.writerow(row)


def run_scenario(scenario: Scenario, log_path: str | Path | None = None,
                 telemetry_path: str | Path | None = None,
                 catalogue: Catalogue | None = None,
                 approval_gate: bool | None = None) -> Runtime:
    """Execute a scenario to completion; returns the finished runtime."""
    runtime = Runtime(scenario, catalogue=catalogue, log_path=log_path,
                      approval_gate=approval_gate)
    runtime.run()
    if telemetry_path is not None:
        runtime.export_telemetry(telemetry_path)
    return runtime

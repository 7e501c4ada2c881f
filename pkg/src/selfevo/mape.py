"""Monitor-analyze-plan-execute loop over ODD knowledge.

The loop tracks the working point (demanded throughput, interference),
looks up which configurations' ODD regions contain it, and switches to
the option with the best expected lifetime. When no configuration
contains the point, it falls back to the safe configuration and flags
the tick for the evolution engine; the loop itself never aborts, phase
errors surface as warning events.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import ValidationError
from .odd import OddModel, WorkingPoint, satisfying_configs
from .simulator import Simulator, Telemetry

HISTORY_CAPACITY = 100

REASON_STAY = "stay"
REASON_SWITCH = "switch"
REASON_OUT_OF_ODD = "out_of_odd"


@dataclass
class AdaptationGoals:
    """Keep loss under the threshold; prefer the longest-lived option."""

    loss_threshold: float = 0.05
    lifetime_objective: str = "maximize"

    def __post_init__(self):
        if not 0 < self.loss_threshold < 1:
            raise ValidationError([("loss_threshold",
                                    f"must be in (0, 1), got {self.loss_threshold}")])


@dataclass(frozen=True)
class AdaptationDecision:
    options: tuple[tuple[str, tuple[float, float]], ...]
    chosen: str | None
    reason: str

    def __post_init__(self):
        if self.reason != REASON_OUT_OF_ODD:
            if self.chosen not in {config_id for config_id, _ in self.options}:
                raise ValidationError([("chosen", f"{self.chosen!r} not among the options")])

    def to_payload(self) -> dict:
        return {
            "options": [[config_id, list(lifetime)] for config_id, lifetime in self.options],
            "chosen": self.chosen,
            "reason": self.reason,
        }


@dataclass
class Knowledge:
    """What the managing system knows: point, config, ODD snapshot, history."""

    odd: OddModel
    goals: AdaptationGoals
    current_config: str
    current_point: WorkingPoint | None = None
    history: deque = field(default_factory=lambda: deque(maxlen=HISTORY_CAPACITY))
    last_tick: int = -1
    safe_state: bool = False

    def observe(self, tick: int, point: WorkingPoint) -> None:
        self.current_point = point
        self.history.append((tick, point, self.current_config))
        self.last_tick = tick


def plan(options: tuple[tuple[str, tuple[float, float]], ...],
         current_config: str) -> AdaptationDecision:
    """Pick the option with the best lifetime.

    Ordering: highest lifetime lower bound, then highest upper bound,
    then the incumbent configuration, then lexicographic id. Only the
    ordering of lifetimes matters, never their absolute values. Empty
    options mean the working point is outside the whole ODD.
    """
    if not options:
        return AdaptationDecision(options=(), chosen=None, reason=REASON_OUT_OF_ODD)
    best = min(options, key=lambda option: (
        -option[1][0], -option[1][1], option[0] != current_config, option[0]))
    reason = REASON_STAY if best[0] == current_config else REASON_SWITCH
    return AdaptationDecision(options=tuple(options), chosen=best[0], reason=reason)


class MapeLoop:
    """One feedback loop instance; single-threaded, driven once per tick."""

    def __init__(self, knowledge: Knowledge, safe_config: str = "power-max"):
        self.knowledge = knowledge
        self.safe_config = safe_config

    def monitor(self, telemetry: Telemetry, env: tuple[float, float]) -> bool:
        """Update the working point from fresh telemetry; stale ticks are ignored."""
        if telemetry.tick <= self.knowledge.last_tick:
            return False
        interference, demand = env
        self.knowledge.observe(telemetry.tick, WorkingPoint(utility=demand,
                                                            context=interference))
        return True

    def analyze(self) -> tuple[tuple[str, tuple[float, float]], ...]:
        """Adaptation options: configs whose regions contain the point, with lifetimes."""
        knowledge = self.knowledge
        if knowledge.current_point is None:
            return ()
        config_ids = satisfying_configs(knowledge.odd, knowledge.current_point)
        return tuple((config_id, knowledge.odd.configuration(config_id).lifetime_years)
                     for config_id in config_ids)

    def plan(self, options) -> AdaptationDecision:
        return plan(tuple(options), self.knowledge.current_config)

    def execute(self, decision: AdaptationDecision, sim: Simulator) -> None:
        """Apply the decision; out-of-ODD falls back to the safe configuration."""
        knowledge = self.knowledge
        if decision.reason == REASON_SWITCH:
            sim.set_configuration(decision.chosen)
            knowledge.current_config = decision.chosen
            knowledge.safe_state = False
        elif decision.reason == REASON_STAY:
            knowledge.safe_state = False
        else:
            if knowledge.current_config != self.safe_config:
                sim.set_configuration(self.safe_config)
                knowledge.current_config = self.safe_config
            knowledge.safe_state = True

    def mape_tick(self, telemetry: Telemetry, env: tuple[float, float],
                  sim: Simulator) -> tuple[AdaptationDecision | None, list[tuple[str, dict]]]:
        """Run the four phases once; returns (decision, loggable events)."""
        events: list[tuple[str, dict]] = []
        if not self.monitor(telemetry, env):
            events.append(("warning", {"phase": "monitor",
                                       "message": f"stale telemetry tick {telemetry.tick} ignored"}))
            return None, events
        try:
            options = self.analyze()
            decision = self.plan(options)
            self.execute(decision, sim)
        except Exception as exc:   # the loop must survive any phase failure
            events.append(("warning", {"phase": "execute", "message": str(exc)}))
            return None, events
        events.append(("decision", decision.to_payload()))
        return decision, events

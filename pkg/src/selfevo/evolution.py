"""Evolution engine: detect, target, search, sandbox, assess, enact.

When the working point leaves the ODD for long enough (or an operator
submits a new goal), the engine derives an evolution target, asks the
warehouse for elements whose data sheets cover it, gathers evidence by
installing each candidate in a sandboxed clone of the simulator, and
enacts the first candidate whose evidence passes: the element is
installed on the live network and the ODD grows by the element's
contribution, leaving every previously covered working point covered.

The engine runs between simulator ticks and talks to the rest of the
system only through emitted events, so the feedback loop never blocks
on it. One pipeline runs at a time; a repeated trigger for a target
that already failed is suppressed until the catalogue changes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as dc_replace
from typing import Callable, Protocol, Sequence

from .errors import ConflictError, EnactmentError, IntegrityError, NotFoundError, SelfEvoError
from .odd import (
    ConfigurationOdd,
    EvolutionTarget,
    OddModel,
    Region,
    WorkingPoint,
    contains,
    coverage,
    grid_points,
    union,
)
from .simulator import DEFAULT_ELEMENT_LIFETIME, Simulator, derive_rng
from .warehouse import CatalogueEntry, MatchResult, UsageGuide, match

TRIGGER_KINDS = ("anomaly", "novelty", "stakeholder_goal")

STATUS_ENACTED = "enacted"
STATUS_REJECTED = "rejected"
STATUS_AWAITING_APPROVAL = "awaiting_approval"
STATUS_NO_CANDIDATE = "no_candidate"


class WarehouseUnreachable(SelfEvoError):
    """The warehouse could not be reached; the pipeline may retry later."""


class WarehouseClient(Protocol):
    """What the engine needs from a warehouse, local or remote."""

    def list_entries(self) -> tuple[list[CatalogueEntry], int]: ...

    def fetch(self, element_id: str, version: str) -> tuple[dict, UsageGuide]: ...


@dataclass(frozen=True)
class EvolutionTrigger:
    kind: str
    evidence: tuple[WorkingPoint, ...]
    tick: int
    goal_regions: tuple[Region, ...] = ()

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "evidence": [[p.utility, p.context] for p in self.evidence],
            "goal_regions": [r.as_box() for r in self.goal_regions],
            "tick": self.tick,
        }


@dataclass(frozen=True)
class SandboxEvidence:
    element_id: str
    sampled_points: tuple[WorkingPoint, ...]
    runs: int
    pass_fraction: float
    worst_loss: tuple[tuple[WorkingPoint, float], ...]
    failure: str | None = None

    def to_payload(self) -> dict:
        return {
            "element_id": self.element_id,
            "points": len(self.sampled_points),
            "runs": self.runs,
            "pass_fraction": self.pass_fraction,
            "worst_loss_max": max((loss for _, loss in self.worst_loss), default=0.0),
            "failure": self.failure,
        }


@dataclass(frozen=True)
class EvolutionOutcome:
    status: str
    element_id: str | None
    odd_version: int | None
    target: EvolutionTarget


@dataclass(frozen=True)
class PendingEnactment:
    entry: CatalogueEntry
    payload: dict
    guide: UsageGuide
    target: EvolutionTarget
    evidence: SandboxEvidence


@dataclass
class EngineConfig:
    debounce: int = 3
    target_margin_utility: float = 2.0
    target_margin_context: float = 2.0
    sandbox_runs: int = 5
    sandbox_grid: tuple[int, int] = (5, 5)
    sandbox_ticks: int = 20
    pass_threshold: float = 1.0
    loss_goal: float = 0.05
    approval_gate: bool = False


def detect(history: Sequence[tuple[int, WorkingPoint, str]], odd: OddModel,
           debounce: int = 3) -> EvolutionTrigger | None:
    """Inspect recent working points for an anomaly or novelty.

    Novelty fires on the newest point alone when its context falls outside
    every region's context interval: a context value the design never
    spanned cannot be transient noise of the modeled kind. An anomaly
    needs `debounce` consecutive out-of-ODD points, filtering spikes.
    """
    if not history:
        return None
    regions = odd.all_regions()
    newest_tick, newest_point, _ = history[-1]
    if (not contains(regions, newest_point)
            and not any(r.contains_context(newest_point.context) for r in regions)):
        return EvolutionTrigger(kind="novelty", evidence=(newest_point,), tick=newest_tick)
    if len(history) < debounce:
        return None
    tail = list(history)[-debounce:]
    if all(not contains(regions, point) for _, point, _ in tail):
        return EvolutionTrigger(kind="anomaly",
                                evidence=tuple(point for _, point, _ in tail),
                                tick=newest_tick)
    return None


def derive_target(trigger: EvolutionTrigger,
                  margin_utility: float = 2.0,
                  margin_context: float = 2.0) -> EvolutionTarget:
    """Turn a trigger into the region set the evolved system must cover.

    Stakeholder goals pass through verbatim. Detection evidence becomes
    its bounding box inflated by the configured margins, clamped to the
    valid domain (utility >= 0, context <= 0).
    """
    if trigger.kind == "stakeholder_goal":
        return EvolutionTarget(regions=trigger.goal_regions, origin="stakeholder_goal",
                               created_at=trigger.tick)
    u_lo = min(p.utility for p in trigger.evidence)
    u_hi = max(p.utility for p in trigger.evidence)
    c_lo = min(p.context for p in trigger.evidence)
    c_hi = max(p.context for p in trigger.evidence)
    box = Region(
        context_lo=c_lo - margin_context,
        context_hi=min(0.0, c_hi + margin_context),
        utility_lo=max(0.0, u_lo - margin_utility),
        utility_hi=u_hi + margin_utility,
        knowledge="known_unknown",
    )
    return EvolutionTarget(regions=(box,), origin=trigger.kind, created_at=trigger.tick)


def search(target: EvolutionTarget, warehouse: WarehouseClient,
           platform_tags: Sequence[str]) -> tuple[list[tuple[CatalogueEntry, MatchResult]], int]:
    """Matching candidates ranked by tightest fit, plus the catalogue revision."""
    entries, revision = warehouse.list_entries()
    candidates = []
    for entry in entries:
        result = match(entry, target, platform_tags)
        if result.matched:
            candidates.append((entry, result))
    candidates.sort(key=lambda pair: (pair[1].total_margin(), pair[0].element_id))
    return candidates, revision


def sandbox_evaluate(payload: dict, guide: UsageGuide, target: EvolutionTarget,
                     sim: Simulator, config: EngineConfig) -> SandboxEvidence:
    """Gather evidence in an isolated clone: grid of target points x seeded runs.

    Each (point, run) pair runs the cloned network for a fixed window at
    constant environment with the candidate's configuration selected;
    it passes when the steady-state loss (mean over the second half of
    the window) stays within the loss goal. Installation failure yields
    zero evidence with the reason recorded, never an exception.
    """
    element_id = payload.get("element_id", "unknown")
    base = sim.clone()
    try:
        base.install_element(payload, guide.defaults())
    except (EnactmentError, SelfEvoError) as exc:
        return SandboxEvidence(element_id=element_id, sampled_points=(), runs=0,
                               pass_fraction=0.0, worst_loss=(), failure=str(exc))

    points: list[WorkingPoint] = []
    for region in target.regions:
        points.extend(grid_points(region, config.sandbox_grid))

    passes = 0
    total = 0
    worst: list[tuple[WorkingPoint, float]] = []
    settle = config.sandbox_ticks // 2
    for index, point in enumerate(points):
        point_worst = 0.0
        for run in range(config.sandbox_runs):
            trial = base.clone()
            run_seed = derive_rng(sim.state.rng_seed, "sandbox", element_id,
                                  run, index).getrandbits(32)
            trial.state = dc_replace(trial.state, rng_seed=run_seed)
            losses = []
            for _ in range(config.sandbox_ticks):
                telemetry = trial.step((point.context, point.utility), element_id)
                losses.append(telemetry.packet_loss_fraction)
            steady = sum(losses[settle:]) / len(losses[settle:])
            point_worst = max(point_worst, steady)
            total += 1
            if steady <= config.loss_goal:
                passes += 1
        worst.append((point, point_worst))

    return SandboxEvidence(element_id=element_id, sampled_points=tuple(points),
                           runs=config.sandbox_runs,
                           pass_fraction=passes / total if total else 0.0,
                           worst_loss=tuple(worst))


def assess(evidence: SandboxEvidence, threshold: float = 1.0) -> bool:
    """Accept when enough (point, run) pairs met the loss goal."""
    return evidence.failure is None and evidence.pass_fraction >= threshold


def enact(entry: CatalogueEntry, payload: dict, guide: UsageGuide,
          target: EvolutionTarget, sim: Simulator,
          odd_model: OddModel) -> tuple[EvolutionOutcome, OddModel]:
    """Install the element on the live network and extend the ODD.

    The extension is computed first (it can only fail on an id conflict),
    then the element is installed; if installation fails the previous
    model stays in force, so a failed enactment changes nothing.
    """
    lifetime = guide.defaults().get("lifetime_years", DEFAULT_ELEMENT_LIFETIME)
    configuration = ConfigurationOdd(
        config_id=entry.element_id,
        regions=entry.odd_contribution,
        lifetime_years=(float(lifetime[0]), float(lifetime[1])),
    )
    try:
        new_model = union(odd_model, (configuration,))
        sim.install_element(payload, guide.defaults())
    except (ConflictError, EnactmentError):
        return (EvolutionOutcome(status=STATUS_REJECTED, element_id=entry.element_id,
                                 odd_version=None, target=target),
                odd_model)
    report = coverage(new_model, target)
    if report.fraction != 1.0:
        raise EnactmentError(
            f"enacted model does not cover the target (fraction {report.fraction})")
    return (EvolutionOutcome(status=STATUS_ENACTED, element_id=entry.element_id,
                             odd_version=new_model.version, target=target),
            new_model)


def _target_signature(target: EvolutionTarget) -> tuple:
    return (target.origin, tuple(sorted(tuple(r.as_box()) for r in target.regions)))


class EvolutionEngine:
    """Stateful pipeline orchestration: coalescing, approval gate, retries."""

    def __init__(self, warehouse: WarehouseClient, platform_tags: Sequence[str],
                 config: EngineConfig | None = None):
        self.warehouse = warehouse
        self.platform_tags = tuple(platform_tags)
        self.config = config or EngineConfig()
        self.pending: PendingEnactment | None = None
        self._approved = False
        self._goal_queue: list[EvolutionTrigger] = []
        self._settled: dict[tuple, int] = {}   # target signature -> catalogue revision
        self._last_trigger_signature: tuple | None = None

    # -- inputs ------------------------------------------------------------

    def submit_goal(self, regions: Sequence[Region], tick: int) -> EvolutionTrigger:
        trigger = EvolutionTrigger(kind="stakeholder_goal", evidence=(), tick=tick,
                                   goal_regions=tuple(regions))
        self._goal_queue.append(trigger)
        return trigger

    def approve(self) -> bool:
        """Mark the pending enactment approved; False when nothing is pending."""
        if self.pending is None:
            return False
        self._approved = True
        return True

    def reject_pending(self) -> bool:
        if self.pending is None:
            return False
        self.pending = None
        self._approved = False
        return True

    # -- per-tick driver ----------------------------------------------------

    def on_tick(self, history, sim: Simulator, odd_model: OddModel,
                emit: Callable[..., object]) -> OddModel:
        """Run between ticks: finish approvals, then at most one new pipeline."""
        if self.pending is not None:
            if self._approved:
                odd_model = self._finish_enactment(sim, odd_model, emit)
            return odd_model

        trigger = None
        if self._goal_queue:
            trigger = self._goal_queue.pop(0)
        else:
            detected = detect(history, odd_model, self.config.debounce)
            if detected is not None:
                target = derive_target(detected, self.config.target_margin_utility,
                                       self.config.target_margin_context)
                signature = _target_signature(target)
                if signature != self._last_trigger_signature \
                        and not self._is_settled(signature):
                    trigger = detected
        if trigger is None:
            return odd_model
        return self._run_pipeline(trigger, sim, odd_model, emit)

    # -- pipeline ------------------------------------------------------------

    def _is_settled(self, signature: tuple) -> bool:
        if signature not in self._settled:
            return False
        try:
            _, revision = self.warehouse.list_entries()
        except WarehouseUnreachable:
            return True
        if revision != self._settled[signature]:
            del self._settled[signature]
            return False
        return True

    def _run_pipeline(self, trigger: EvolutionTrigger, sim: Simulator,
                      odd_model: OddModel, emit) -> OddModel:
        emit("trigger", trigger.to_payload())
        target = derive_target(trigger, self.config.target_margin_utility,
                               self.config.target_margin_context)
        signature = _target_signature(target)
        self._last_trigger_signature = signature
        emit("evolution", {
            "phase": "target",
            "origin": target.origin,
            "regions": [r.as_box() for r in target.regions],
            "created_at": target.created_at,
        })

        if coverage(odd_model, target).fraction == 1.0:
            emit("warning", {"phase": "evolution",
                             "message": "target already covered; nothing to evolve"})
            return odd_model

        try:
            candidates, revision = search(target, self.warehouse, self.platform_tags)
        except WarehouseUnreachable as exc:
            emit("warning", {"phase": "search", "retriable": True, "message": str(exc)})
            self._last_trigger_signature = None   # retry on the next trigger
            return odd_model

        emit("evolution", {
            "phase": "search",
            "revision": revision,
            "candidates": [
                {"element_id": entry.element_id, "version": entry.version,
                 "total_margin": result.total_margin(), "margin": dict(result.margin)}
                for entry, result in candidates
            ],
        })
        if not candidates:
            emit("evolution", {"phase": "outcome", "status": STATUS_NO_CANDIDATE,
                               "element_id": None})
            self._settled[signature] = revision
            return odd_model

        for entry, _result in candidates:
            try:
                payload, guide = self.warehouse.fetch(entry.element_id, entry.version)
            except (WarehouseUnreachable, NotFoundError, IntegrityError) as exc:
                emit("warning", {"phase": "fetch", "element_id": entry.element_id,
                                 "message": str(exc)})
                continue
            evidence = sandbox_evaluate(payload, guide, target, sim, self.config)
            emit("evolution", {"phase": "evidence", **evidence.to_payload()})
            accepted = assess(evidence, self.config.pass_threshold)
            emit("evolution", {"phase": "assessment", "element_id": entry.element_id,
                               "accepted": accepted,
                               "threshold": self.config.pass_threshold})
            if not accepted:
                continue

            if self.config.approval_gate:
                self.pending = PendingEnactment(entry=entry, payload=payload,
                                                guide=guide, target=target,
                                                evidence=evidence)
                self._approved = False
                emit("evolution", {"phase": "outcome",
                                   "status": STATUS_AWAITING_APPROVAL,
                                   "element_id": entry.element_id})
                return odd_model
            return self._enact(entry, payload, guide, target, sim, odd_model,
                               emit, signature, revision)

        emit("evolution", {"phase": "outcome", "status": STATUS_REJECTED,
                           "element_id": None})
        self._settled[signature] = revision
        return odd_model

    def _enact(self, entry, payload, guide, target, sim, odd_model, emit,
               signature, revision) -> OddModel:
        outcome, new_model = enact(entry, payload, guide, target, sim, odd_model)
        if outcome.status == STATUS_ENACTED:
            emit("enactment", {
                "element_id": entry.element_id,
                "version": entry.version,
                "config_id": entry.element_id,
                "target_regions": [r.as_box() for r in target.regions],
                "odd_version": new_model.version,
            }, odd_version=new_model.version)
        else:
            emit("evolution", {"phase": "outcome", "status": outcome.status,
                               "element_id": entry.element_id})
            self._settled[signature] = revision
        return new_model

    def _finish_enactment(self, sim: Simulator, odd_model: OddModel, emit) -> OddModel:
        pending, self.pending = self.pending, None
        self._approved = False
        signature = _target_signature(pending.target)
        try:
            _, revision = self.warehouse.list_entries()
        except WarehouseUnreachable:
            revision = -1
        return self._enact(pending.entry, pending.payload, pending.guide,
                           pending.target, sim, odd_model, emit, signature, revision)

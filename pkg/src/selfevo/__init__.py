"""Self-adaptive IoT network simulation that can extend its own ODD.

The package models a multi-hop IoT network whose valid operating
conditions are captured as an operational design domain (ODD): a set of
(throughput demand, interference) boxes per configuration. A feedback
loop keeps the network inside its ODD by switching power settings; when
the working point leaves the ODD, an evolution engine acquires a
matching element from a computing warehouse, validates it in a sandbox
clone, and enacts it, growing the ODD at runtime. A guidance service
and CLI expose the whole loop to operators.
"""

from .errors import (
    ConflictError,
    EnactmentError,
    IntegrityError,
    NotFoundError,
    SelfEvoError,
    ValidationError,
)
from .odd import (
    ConfigurationOdd,
    CoverageReport,
    EvolutionTarget,
    OddModel,
    Region,
    WorkingPoint,
    contains,
    coverage,
    satisfying_configs,
    union,
)
from .mape import AdaptationDecision, AdaptationGoals, Knowledge, MapeLoop, plan
from .simulator import CapabilityModel, EnvironmentTrace, Mote, NetworkState, Simulator, Telemetry
from .warehouse import Catalogue, CatalogueEntry, DataSheet, MatchResult, UsageGuide, match
from .evolution import (
    EvolutionEngine,
    EvolutionOutcome,
    EvolutionTrigger,
    SandboxEvidence,
    assess,
    derive_target,
    detect,
    enact,
    sandbox_evaluate,
    search,
)
from .events import EventLog, EventRecord, replay
from .runtime import Runtime, run_scenario
from .scenario import Scenario, load_scenario, parse_scenario
from .verify import verify

__version__ = "0.1.0"

__all__ = [
    "AdaptationDecision", "AdaptationGoals", "CapabilityModel", "Catalogue",
    "CatalogueEntry", "ConfigurationOdd", "ConflictError", "CoverageReport",
    "DataSheet", "EnactmentError", "EnvironmentTrace", "EventLog", "EventRecord",
    "EvolutionEngine", "EvolutionOutcome", "EvolutionTarget", "EvolutionTrigger",
    "IntegrityError", "Knowledge", "MapeLoop", "MatchResult", "Mote",
    "NetworkState", "NotFoundError", "OddModel", "Region", "Runtime",
    "SandboxEvidence", "Scenario", "SelfEvoError", "Simulator", "Telemetry",
    "UsageGuide", "ValidationError", "WorkingPoint", "assess", "contains",
    "coverage", "derive_target", "detect", "enact", "load_scenario", "match",
    "parse_scenario", "plan", "replay", "run_scenario", "sandbox_evaluate",
    "satisfying_configs", "search", "union", "verify",
]

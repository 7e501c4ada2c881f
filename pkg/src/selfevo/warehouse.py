"""Computing warehouse: a catalogue of auto-evolution-enabled elements.

Each element carries a machine-readable data sheet (capability ranges)
and a usage guide (compatibility tags, integration steps, parameter
schema). Matching against an evolution target is typed interval /
enumeration containment over a fixed capability vocabulary: the sheet's
``throughput`` range must cover the target's utility intervals and its
``interference`` range must cover the context intervals; platform
compatibility requires a common tag. Mismatches are reported, never
thrown.

The catalogue is append-only: published entries are never mutated, and
every publish bumps the catalogue revision. Reads take an immutable
snapshot so concurrent clients are safe; publishes are serialized.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

from .errors import ConflictError, IntegrityError, NotFoundError, ValidationError
from .odd import EvolutionTarget, Region

logger = logging.getLogger(__name__)

#: Capability names the matcher maps onto the ODD axes.
UTILITY_CAPABILITY = "throughput"
CONTEXT_CAPABILITY = "interference"


@dataclass(frozen=True)
class RangeCapability:
    """A closed numeric capability range with a unit."""

    lo: float
    hi: float
    unit: str

    def __post_init__(self):
        problems = []
        if self.lo > self.hi:
            problems.append(("range", f"lo {self.lo} > hi {self.hi}"))
        if not self.unit:
            problems.append(("unit", "must be present"))
        if problems:
            raise ValidationError(problems)

    def covers_interval(self, lo: float, hi: float) -> bool:
        return self.lo <= lo and hi <= self.hi

    def to_dict(self) -> dict:
        return {"range": [self.lo, self.hi], "unit": self.unit}


@dataclass(frozen=True)
class EnumCapability:
    """An enumerated capability, e.g. supported modulations."""

    values: tuple[str, ...]

    def __post_init__(self):
        if not self.values:
            raise ValidationError([("values", "must be non-empty")])
        object.__setattr__(self, "values", tuple(self.values))

    def to_dict(self) -> dict:
        return {"enum": list(self.values)}


Capability = Union[RangeCapability, EnumCapability]


@dataclass(frozen=True)
class DataSheet:
    """Abstract representation of what an element can do."""

    capabilities: Mapping[str, Capability]

    def __post_init__(self):
        object.__setattr__(self, "capabilities", dict(self.capabilities))

    def numeric_range(self, name: str) -> RangeCapability | None:
        cap = self.capabilities.get(name)
        return cap if isinstance(cap, RangeCapability) else None

    def to_dict(self) -> dict:
        return {name: cap.to_dict() for name, cap in sorted(self.capabilities.items())}

    @classmethod
    def from_dict(cls, doc: dict) -> "DataSheet":
        caps: dict[str, Capability] = {}
        for name, body in doc.items():
            if "range" in body:
                caps[name] = RangeCapability(body["range"][0], body["range"][1], body["unit"])
            elif "enum" in body:
                caps[name] = EnumCapability(tuple(body["enum"]))
            else:
                raise ValidationError([(name, f"unrecognized capability body {body!r}")])
        return cls(capabilities=caps)


@dataclass(frozen=True)
class UsageGuide:
    """How to obtain, integrate, and configure an element."""

    platform_tags: tuple[str, ...]
    obtain: str
    integrate: tuple[str, ...]
    configure: Mapping[str, dict]

    def __post_init__(self):
        problems = []
        if not self.platform_tags:
            problems.append(("platform_tags", "must be non-empty"))
        for name, schema in dict(self.configure).items():
            problem = _default_violates_schema(schema)
            if problem:
                problems.append((f"configure.{name}", problem))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "platform_tags", tuple(self.platform_tags))
        object.__setattr__(self, "integrate", tuple(self.integrate))
        object.__setattr__(self, "configure", dict(self.configure))

    def defaults(self) -> dict:
        return {name: schema.get("default") for name, schema in self.configure.items()}

    def to_dict(self) -> dict:
        return {
            "platform_tags": list(self.platform_tags),
            "obtain": self.obtain,
            "integrate": list(self.integrate),
            "configure": dict(self.configure),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "UsageGuide":
        return cls(
            platform_tags=tuple(doc["platform_tags"]),
            obtain=doc["obtain"],
            integrate=tuple(doc.get("integrate", ())),
            configure=doc.get("configure", {}),
        )


def _default_violates_schema(schema: dict) -> str | None:
    """Check a parameter default against its own schema; None when fine."""
    default = schema.get("default")
    kind = schema.get("type")
    if default is None:
        return "missing default"
    if kind == "number":
        if not isinstance(default, (int, float)):
            return f"default {default!r} is not a number"
        if "minimum" in schema and default < schema["minimum"]:
            return f"default {default} below minimum {schema['minimum']}"
        if "maximum" in schema and default > schema["maximum"]:
            return f"default {default} above maximum {schema['maximum']}"
    elif kind == "interval":
        if (not isinstance(default, (list, tuple)) or len(default) != 2
                or default[0] > default[1]):
            return f"default {default!r} is not an ordered [lo, hi] pair"
    return None


def payload_checksum(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class CatalogueEntry:
    """One published element: sheet + guide + payload reference."""

    element_id: str
    version: str
    data_sheet: DataSheet
    usage_guide: UsageGuide
    payload: dict
    checksum: str
    odd_contribution: tuple[Region, ...] = ()

    @classmethod
    def build(cls, element_id: str, version: str, data_sheet: DataSheet,
              usage_guide: UsageGuide, payload: dict) -> "CatalogueEntry":
        """Construct an entry, deriving checksum and ODD contribution.

        The contribution is one box spanning the sheet's interference and
        throughput ranges; an element whose enacted configuration claims
        anything beyond its sheet would defeat sandbox assessment.
        """
        contribution: tuple[Region, ...] = ()
        throughput = data_sheet.numeric_range(UTILITY_CAPABILITY)
        interference = data_sheet.numeric_range(CONTEXT_CAPABILITY)
        if throughput and interference:
            contribution = (Region(
                context_lo=interference.lo, context_hi=interference.hi,
                utility_lo=throughput.lo, utility_hi=throughput.hi,
                knowledge="known_unknown",
            ),)
        return cls(element_id=element_id, version=version, data_sheet=data_sheet,
                   usage_guide=usage_guide, payload=dict(payload),
                   checksum=payload_checksum(payload), odd_contribution=contribution)

    def key(self) -> tuple[str, str]:
        return (self.element_id, self.version)

    def to_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "version": self.version,
            "data_sheet": self.data_sheet.to_dict(),
            "usage_guide": self.usage_guide.to_dict(),
            "payload": self.payload,
            "checksum": self.checksum,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CatalogueEntry":
        entry = cls.build(
            element_id=doc["element_id"],
            version=doc["version"],
            data_sheet=DataSheet.from_dict(doc["data_sheet"]),
            usage_guide=UsageGuide.from_dict(doc["usage_guide"]),
            payload=doc["payload"],
        )
        recorded = doc.get("checksum")
        if recorded and recorded != entry.checksum:
            raise IntegrityError(
                f"{entry.element_id}@{entry.version}: payload checksum "
                f"{entry.checksum} does not match recorded {recorded}")
        return entry


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one entry against an evolution target."""

    element_id: str
    matched: bool
    margin: Mapping[str, float]
    failures: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if self.matched != (len(self.failures) == 0):
            raise ValidationError([("matched", "must hold exactly when failures is empty")])
        object.__setattr__(self, "margin", dict(self.margin))
        object.__setattr__(self, "failures", tuple(self.failures))

    def total_margin(self) -> float:
        return sum(self.margin.values())


def match(entry: CatalogueEntry, target: EvolutionTarget,
          platform_tags: Iterable[str]) -> MatchResult:
    """Containment match of a data sheet against a target, plus compatibility.

    Matched iff the sheet's throughput range covers every target utility
    interval, its interference range covers every context interval, and
    the platform tags share at least one identifier with the usage guide.
    """
    failures: list[tuple[str, str]] = []
    margin: dict[str, float] = {}

    throughput = entry.data_sheet.numeric_range(UTILITY_CAPABILITY)
    interference = entry.data_sheet.numeric_range(CONTEXT_CAPABILITY)

    u_lo = min(r.utility_lo for r in target.regions)
    u_hi = max(r.utility_hi for r in target.regions)
    c_lo = min(r.context_lo for r in target.regions)
    c_hi = max(r.context_hi for r in target.regions)

    if throughput is None:
        failures.append((UTILITY_CAPABILITY, "capability missing from data sheet"))
    else:
        margin[UTILITY_CAPABILITY] = (u_lo - throughput.lo) + (throughput.hi - u_hi)
        if not throughput.covers_interval(u_lo, u_hi):
            failures.append((UTILITY_CAPABILITY,
                             f"sheet [{throughput.lo}, {throughput.hi}] does not cover "
                             f"target [{u_lo}, {u_hi}]"))

    if interference is None:
        failures.append((CONTEXT_CAPABILITY, "capability missing from data sheet"))
    else:
        margin[CONTEXT_CAPABILITY] = (c_lo - interference.lo) + (interference.hi - c_hi)
        if not interference.covers_interval(c_lo, c_hi):
            failures.append((CONTEXT_CAPABILITY,
                             f"sheet [{interference.lo}, {interference.hi}] does not cover "
                             f"target [{c_lo}, {c_hi}]"))

    if not set(platform_tags) & set(entry.usage_guide.platform_tags):
        failures.append(("platform", "no common platform tags"))

    return MatchResult(element_id=entry.element_id, matched=not failures,
                       margin=margin, failures=tuple(failures))


FilterValue = Union[float, int, str, list, tuple]


def _sheet_satisfies(sheet: DataSheet, name: str, wanted: FilterValue) -> bool:
    cap = sheet.capabilities.get(name)
    if cap is None:
        return False
    if isinstance(cap, EnumCapability):
        return str(wanted) in cap.values
    if isinstance(wanted, (list, tuple)):
        lo, hi = min(wanted), max(wanted)
        return cap.covers_interval(float(lo), float(hi))
    return cap.covers_interval(float(wanted), float(wanted))


class Catalogue:
    """In-process warehouse: append-only entries plus a revision counter."""

    def __init__(self, entries: Iterable[CatalogueEntry] = ()):
        self._lock = threading.Lock()
        self._entries: list[CatalogueEntry] = []
        self.revision = 0
        for entry in entries:
            self.publish(entry)

    def publish(self, entry: CatalogueEntry) -> int:
        """Add an entry; returns the new revision. Duplicate id+version conflicts."""
        with self._lock:
            if any(e.key() == entry.key() for e in self._entries):
                raise ConflictError(
                    f"entry {entry.element_id}@{entry.version} already published")
            self._entries.append(entry)
            self.revision += 1
            return self.revision

    def entries(self) -> list[CatalogueEntry]:
        with self._lock:
            return sorted(self._entries, key=CatalogueEntry.key)

    def list_entries(self) -> tuple[list[CatalogueEntry], int]:
        """Entries plus the revision they correspond to, as one snapshot."""
        with self._lock:
            return sorted(self._entries, key=CatalogueEntry.key), self.revision

    def unknown_filter_keys(self, capability_filter: Mapping[str, FilterValue]) -> list[str]:
        known: set[str] = set()
        for entry in self.entries():
            known.update(entry.data_sheet.capabilities)
        return sorted(set(capability_filter) - known)

    def query(self, capability_filter: Mapping[str, FilterValue] | None = None) -> list[CatalogueEntry]:
        """Entries whose sheets satisfy every predicate, ordered by element id.

        A predicate is a capability name mapped to a contained value,
        [lo, hi] interval, or enum member. A name no sheet declares simply
        matches nothing; it is warned about, not an error.
        """
        snapshot = self.entries()
        if not capability_filter:
            return snapshot
        unknown = self.unknown_filter_keys(capability_filter)
        if unknown:
            logger.warning("query filter names unknown capabilities: %s", unknown)
        return [
            entry for entry in snapshot
            if all(_sheet_satisfies(entry.data_sheet, name, wanted)
                   for name, wanted in capability_filter.items())
        ]

    def fetch(self, element_id: str, version: str) -> tuple[dict, UsageGuide]:
        """Payload plus usage guide; verifies the stored checksum first."""
        with self._lock:
            entry = next((e for e in self._entries if e.key() == (element_id, version)), None)
        if entry is None:
            raise NotFoundError(f"no entry {element_id}@{version}")
        actual = payload_checksum(entry.payload)
        if actual != entry.checksum:
            raise IntegrityError(
                f"{element_id}@{version}: payload checksum {actual} does not "
                f"match recorded {entry.checksum}")
        return dict(entry.payload), entry.usage_guide

    # -- persistence -----------------------------------------------------

    def to_dict(self) -> dict:
        return {"revision": self.revision,
                "entries": [e.to_dict() for e in self.entries()]}

    @classmethod
    def from_dict(cls, doc: dict) -> "Catalogue":
        catalogue = cls(CatalogueEntry.from_dict(e) for e in doc.get("entries", []))
        return catalogue

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Catalogue":
        return cls.from_dict(json.loads(Path(path).read_text()))

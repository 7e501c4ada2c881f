"""Region algebra for operational design domains.

An operational design domain (ODD) is modeled as a set of axis-aligned
boxes over (context, utility): context is network interference in dB
(non-positive), utility is demanded throughput in packets/sec. Each
system configuration claims a set of boxes plus an expected-lifetime
interval; the system-level ODD is the union of all configuration boxes.

All intervals are closed: a working point exactly on a boundary is a
member. Models are immutable snapshots; every change produces a new
model with a strictly larger version number, so snapshots can be shared
freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import ConflictError, ValidationError

KNOWLEDGE_TAGS = ("known_known", "known_unknown", "unknown_unknown")

#: Origins an evolution target can have.
TARGET_ORIGINS = ("stakeholder_goal", "anomaly", "novelty")


@dataclass(frozen=True)
class WorkingPoint:
    """A (utility, context) pair: demanded throughput at an interference level."""

    utility: float   # packets/sec, >= 0
    context: float   # dB, <= 0

    def __post_init__(self):
        problems = []
        if self.utility < 0:
            problems.append(("utility", f"must be >= 0, got {self.utility}"))
        if self.context > 0:
            problems.append(("context", f"interference is non-positive dB, got {self.context}"))
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class Region:
    """One closed axis-aligned box of the ODD, with a knowledge tag.

    The knowledge tag records how well this part of the domain is
    understood; it is surfaced in reports only and carries no
    operational semantics.
    """

    context_lo: float
    context_hi: float
    utility_lo: float
    utility_hi: float
    knowledge: str = "known_known"

    def __post_init__(self):
        problems = []
        if self.context_lo > self.context_hi:
            problems.append(("context", f"lo {self.context_lo} > hi {self.context_hi}"))
        if self.utility_lo > self.utility_hi:
            problems.append(("utility", f"lo {self.utility_lo} > hi {self.utility_hi}"))
        if self.knowledge not in KNOWLEDGE_TAGS:
            problems.append(("knowledge", f"unknown tag {self.knowledge!r}"))
        if problems:
            raise ValidationError(problems)

    def contains(self, point: WorkingPoint) -> bool:
        return (self.context_lo <= point.context <= self.context_hi
                and self.utility_lo <= point.utility <= self.utility_hi)

    def contains_context(self, context: float) -> bool:
        return self.context_lo <= context <= self.context_hi

    def corners(self) -> tuple[WorkingPoint, ...]:
        return tuple(WorkingPoint(u, c)
                     for c in (self.context_lo, self.context_hi)
                     for u in (self.utility_lo, self.utility_hi))

    def as_box(self) -> list[float]:
        return [self.context_lo, self.context_hi, self.utility_lo, self.utility_hi]


@dataclass(frozen=True)
class ConfigurationOdd:
    """The part of the ODD one configuration covers, plus its expected lifetime."""

    config_id: str
    regions: tuple[Region, ...]
    lifetime_years: tuple[float, float]

    def __post_init__(self):
        problems = []
        if not self.config_id:
            problems.append(("config_id", "must be non-empty"))
        if not self.regions:
            problems.append(("regions", "must be non-empty"))
        lo, hi = self.lifetime_years
        if lo <= 0:
            problems.append(("lifetime_years", f"lower bound must be > 0, got {lo}"))
        if lo > hi:
            problems.append(("lifetime_years", f"lo {lo} > hi {hi}"))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "regions", tuple(self.regions))
        object.__setattr__(self, "lifetime_years", (float(lo), float(hi)))

    def contains(self, point: WorkingPoint) -> bool:
        return any(r.contains(point) for r in self.regions)


@dataclass(frozen=True)
class OddModel:
    """Immutable ODD snapshot: all configurations plus a monotone version."""

    configurations: tuple[ConfigurationOdd, ...]
    version: int = 1

    def __post_init__(self):
        ids = [c.config_id for c in self.configurations]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError([("configurations", f"duplicate config ids: {dupes}")])
        if self.version < 1:
            raise ValidationError([("version", f"must be >= 1, got {self.version}")])
        object.__setattr__(self, "configurations", tuple(self.configurations))

    def config_ids(self) -> list[str]:
        return sorted(c.config_id for c in self.configurations)

    def configuration(self, config_id: str) -> ConfigurationOdd:
        for c in self.configurations:
            if c.config_id == config_id:
                return c
        raise KeyError(config_id)

    def all_regions(self) -> tuple[Region, ...]:
        return tuple(r for c in self.configurations for r in c.regions)


@dataclass(frozen=True)
class EvolutionTarget:
    """A region set the evolved system must additionally cover."""

    regions: tuple[Region, ...]
    origin: str
    created_at: int = 0

    def __post_init__(self):
        problems = []
        if not self.regions:
            problems.append(("regions", "must be non-empty"))
        if self.origin not in TARGET_ORIGINS:
            problems.append(("origin", f"unknown origin {self.origin!r}"))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "regions", tuple(self.regions))


@dataclass(frozen=True)
class CoverageReport:
    """How much of a target's sample grid the model covers."""

    fraction: float
    uncovered_samples: tuple[WorkingPoint, ...]
    grid_resolution: tuple[int, int]

    def __post_init__(self):
        if (self.fraction == 1.0) != (len(self.uncovered_samples) == 0):
            raise ValidationError(
                [("fraction", "must be 1 exactly when uncovered_samples is empty")])


def contains(regions: Iterable[Region], point: WorkingPoint) -> bool:
    """True iff some region's closed intervals both contain the point."""
    return any(r.contains(point) for r in regions)


def satisfying_configs(model: OddModel, point: WorkingPoint) -> list[str]:
    """Every configuration whose regions contain the point, lexicographic by id.

    An empty result means the point lies outside the system ODD.
    """
    return sorted(c.config_id for c in model.configurations if c.contains(point))


def union(model: OddModel, new_configs: Iterable[ConfigurationOdd]) -> OddModel:
    """Extend the model with additional configurations; bumps the version.

    New config ids must be disjoint from the model's; a duplicate id is a
    conflict. The existing configurations are carried over untouched, so
    an extension never removes regions.
    """
    new_configs = tuple(new_configs)
    existing = {c.config_id for c in model.configurations}
    clashes = sorted(c.config_id for c in new_configs if c.config_id in existing)
    if clashes:
        raise ConflictError(f"config ids already present: {clashes}")
    return OddModel(configurations=model.configurations + new_configs,
                    version=model.version + 1)


def grid_points(region: Region, resolution: tuple[int, int]) -> list[WorkingPoint]:
    """Evenly spaced closed-grid sample of a region, endpoints included.

    Subdivision is done in exact rational arithmetic with one final
    rounding per value, so a grid node that mathematically equals a
    region boundary compares equal to it (boundary points must count
    as covered, and accumulated float error must not flip them).
    """
    n_u, n_c = resolution
    if n_u < 2 or n_c < 2:
        raise ValidationError([("resolution", f"must be >= (2, 2), got {resolution}")])

    def axis(lo: float, hi: float, n: int) -> list[float]:
        if hi == lo:
            return [lo] * n
        step = (Fraction(hi) - Fraction(lo)) / (n - 1)
        return [float(Fraction(lo) + i * step) for i in range(n)]

    us = axis(region.utility_lo, region.utility_hi, n_u)
    cs = axis(region.context_lo, region.context_hi, n_c)
    return [WorkingPoint(u, c) for u in us for c in cs]


def coverage(model: OddModel, target: EvolutionTarget,
             resolution: tuple[int, int] = (21, 21)) -> CoverageReport:
    """Fraction of the target's grid points the model's regions contain.

    The grid is sampled per target region at the given resolution; every
    missed grid point is listed so callers can see exactly what is not
    covered yet.
    """
    regions = model.all_regions()
    total = 0
    uncovered: list[WorkingPoint] = []
    for target_region in target.regions:
        for point in grid_points(target_region, resolution):
            total += 1
            if not contains(regions, point):
                uncovered.append(point)
    fraction = (total - len(uncovered)) / total
    return CoverageReport(fraction=fraction, uncovered_samples=tuple(uncovered),
                          grid_resolution=resolution)


# -- serialization ------------------------------------------------------------
#
# On-disk schema: one object per configuration holding its id, a list of
# [c_lo, c_hi, u_lo, u_hi] boxes, the lifetime interval, and a knowledge
# tag per box; the model version sits at the top level. Round-trips are
# bit-exact because floats are emitted with repr.

def model_to_dict(model: OddModel) -> dict:
    return {
        "version": model.version,
        "configurations": [
            {
                "id": c.config_id,
                "boxes": [r.as_box() for r in c.regions],
                "knowledge": [r.knowledge for r in c.regions],
                "lifetime_years": list(c.lifetime_years),
            }
            for c in model.configurations
        ],
    }


def model_from_dict(doc: dict) -> OddModel:
    try:
        configs = []
        for entry in doc["configurations"]:
            tags = entry.get("knowledge") or ["known_known"] * len(entry["boxes"])
            regions = tuple(
                Region(context_lo=box[0], context_hi=box[1],
                       utility_lo=box[2], utility_hi=box[3], knowledge=tag)
                for box, tag in zip(entry["boxes"], tags)
            )
            configs.append(ConfigurationOdd(
                config_id=entry["id"],
                regions=regions,
                lifetime_years=(entry["lifetime_years"][0], entry["lifetime_years"][1]),
            ))
        return OddModel(configurations=tuple(configs), version=doc["version"])
    except (KeyError, IndexError, TypeError) as exc:
        raise ValidationError([("model", f"malformed model document: {exc!r}")]) from exc


def dumps(model: OddModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def loads(text: str) -> OddModel:
    return model_from_dict(json.loads(text))


def save(model: OddModel, path: str | Path) -> None:
    Path(path).write_text(dumps(model))


def load(path: str | Path) -> OddModel:
    return loads(Path(path).read_text())

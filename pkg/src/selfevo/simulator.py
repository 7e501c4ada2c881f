"""Deterministic discrete-time simulator of the multi-hop IoT network.

The network is a tree of battery-powered motes reporting through a
gateway. One tick is one simulated minute. The only uncertainty is
network interference; what a configuration can deliver at a given
interference level is derived from that configuration's ODD boxes
(capacity at context c = highest box utility covering c), which keeps
the simulator and the ODD model consistent by construction.

Per tick, delivered throughput is min(demand, capacity + noise) with a
small subtractive capacity noise drawn from U(-0.25, 0), seeded per
(seed, tick) so replays are byte-identical. Batteries drain by a fixed
energy cost per power setting; a depleted mote is dead and its share of
network capacity is lost.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import EnactmentError, NotFoundError, ValidationError
from .odd import OddModel, Region
from .scenario import Scenario

NOISE_SPAN = 0.25  # packets/sec, subtractive capacity fluctuation per tick

#: Fallback settings for installed elements whose usage guide leaves them out.
DEFAULT_ELEMENT_ENERGY_MJ = 4.0
DEFAULT_ELEMENT_LIFETIME = (1.0, 3.0)


def derive_rng(*parts) -> random.Random:
    """Stable RNG derived from a seed path, reproducible across processes."""
    return random.Random(":".join(str(p) for p in parts))


@dataclass(frozen=True)
class Mote:
    id: str
    parent_link: str
    battery_mj: float
    power_setting: str = "minimum"
    installed_elements: tuple[str, ...] = ()

    def __post_init__(self):
        if self.battery_mj < 0:
            raise ValidationError([("battery_mj", f"must be >= 0, got {self.battery_mj}")])

    @property
    def alive(self) -> bool:
        return self.battery_mj > 0


@dataclass(frozen=True)
class NetworkState:
    motes: tuple[Mote, ...]
    gateway_id: str
    topology: Mapping[str, str]   # mote id -> parent id
    tick: int
    rng_seed: int

    def __post_init__(self):
        object.__setattr__(self, "motes", tuple(self.motes))
        object.__setattr__(self, "topology", dict(self.topology))

    def mote(self, mote_id: str) -> Mote:
        for m in self.motes:
            if m.id == mote_id:
                return m
        raise KeyError(mote_id)

    def alive_fraction(self) -> float:
        if not self.motes:
            return 0.0
        return sum(1 for m in self.motes if m.alive) / len(self.motes)

    def mean_battery_fraction(self, full_mj: float) -> float:
        if not self.motes or full_mj <= 0:
            return 0.0
        return sum(m.battery_mj for m in self.motes) / (len(self.motes) * full_mj)


@dataclass(frozen=True)
class Telemetry:
    tick: int
    achieved_throughput: float
    packet_loss_fraction: float
    interference: float
    demand: float
    energy_used_mj: float
    lifetime_estimate_years: tuple[float, float]
    config_id: str

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "demand": self.demand,
            "interference": self.interference,
            "achieved": self.achieved_throughput,
            "loss": self.packet_loss_fraction,
            "energy_mj": self.energy_used_mj,
            "lifetime_years": list(self.lifetime_estimate_years),
            "config": self.config_id,
        }


@dataclass(frozen=True)
class EnvironmentTrace:
    """Step schedule of (tick, interference, demand); values hold until the next entry."""

    schedule: tuple[tuple[int, float, float], ...]

    def __post_init__(self):
        problems = []
        ticks = [entry[0] for entry in self.schedule]
        if not self.schedule:
            problems.append(("schedule", "must be non-empty"))
        elif ticks != sorted(set(ticks)):
            problems.append(("schedule", "ticks must be strictly increasing"))
        for tick, interference, demand in self.schedule:
            if interference > 0:
                problems.append((f"schedule[{tick}]", f"interference must be <= 0, got {interference}"))
            if demand < 0:
                problems.append((f"schedule[{tick}]", f"demand must be >= 0, got {demand}"))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "schedule", tuple(tuple(e) for e in self.schedule))

    def at(self, tick: int) -> tuple[float, float]:
        """(interference, demand) in force at a tick; first entry covers earlier ticks."""
        current = self.schedule[0]
        for entry in self.schedule:
            if entry[0] <= tick:
                current = entry
            else:
                break
        return current[1], current[2]


@dataclass
class ConfigCapability:
    """Capacity step function plus per-tick energy for one configuration."""

    config_id: str
    boxes: tuple[Region, ...]
    energy_per_tick_mj: float
    lifetime_years: tuple[float, float]

    def max_throughput(self, interference: float) -> float:
        covering = [box.utility_hi for box in self.boxes if box.contains_context(interference)]
        return max(covering) if covering else 0.0


class CapabilityModel:
    """Per-configuration capacity functions derived from ODD boxes."""

    def __init__(self, configs: dict[str, ConfigCapability]):
        self._configs = dict(configs)
        self._validate()

    def _validate(self):
        problems = []
        for config in self._configs.values():
            edges = sorted({e for box in config.boxes
                            for e in (box.context_lo, box.context_hi)})
            samples = sorted(edges + [(a + b) / 2 for a, b in zip(edges, edges[1:])])
            capacities = [config.max_throughput(c) for c in samples]
            if any(a > b for a, b in zip(capacities, capacities[1:])):
                problems.append((config.config_id,
                                 "capacity must not increase as interference worsens"))
        power = [self._configs.get(name) for name in ("power-min", "power-medium", "power-max")]
        if all(power):
            energies = [c.energy_per_tick_mj for c in power]
            if not (energies[0] < energies[1] < energies[2]):
                problems.append(("energy_per_tick_mj",
                                 f"must increase with power setting, got {energies}"))
        if problems:
            raise ValidationError(problems)

    @classmethod
    def from_odd(cls, model: OddModel, energy_per_tick_mj: Mapping[str, float]) -> "CapabilityModel":
        configs = {}
        for config in model.configurations:
            if config.config_id not in energy_per_tick_mj:
                raise ValidationError([("energy_per_tick_mj",
                                        f"missing entry for {config.config_id}")])
            configs[config.config_id] = ConfigCapability(
                config_id=config.config_id,
                boxes=config.regions,
                energy_per_tick_mj=float(energy_per_tick_mj[config.config_id]),
                lifetime_years=config.lifetime_years,
            )
        return cls(configs)

    def config_ids(self) -> list[str]:
        return sorted(self._configs)

    def get(self, config_id: str) -> ConfigCapability:
        try:
            return self._configs[config_id]
        except KeyError:
            raise NotFoundError(f"unknown configuration {config_id!r}") from None

    def add(self, capability: ConfigCapability) -> None:
        if capability.config_id in self._configs:
            raise ValidationError([("config_id", f"{capability.config_id} already present")])
        self._configs[capability.config_id] = capability
        self._validate()

    def max_throughput(self, config_id: str, interference: float) -> float:
        return self.get(config_id).max_throughput(interference)


@dataclass
class Simulator:
    """Mutable façade over the functional step; one writer advances it."""

    state: NetworkState
    capabilities: CapabilityModel
    full_battery_mj: float
    platform_tags: tuple[str, ...]
    current_config: str = "power-min"

    @classmethod
    def init(cls, scenario: "Scenario") -> "Simulator":
        """Fresh network at tick 0: full batteries, minimum power."""
        motes = tuple(
            Mote(id=m["id"], parent_link=m["parent"], battery_mj=scenario.battery_mj)
            for m in scenario.topology["motes"]
        )
        state = NetworkState(
            motes=motes,
            gateway_id=scenario.topology["gateway"],
            topology={m["id"]: m["parent"] for m in scenario.topology["motes"]},
            tick=0,
            rng_seed=scenario.seed,
        )
        capabilities = CapabilityModel.from_odd(scenario.odd_model, scenario.energy_per_tick_mj)
        return cls(state=state, capabilities=capabilities,
                   full_battery_mj=scenario.battery_mj,
                   platform_tags=tuple(scenario.platform_tags),
                   current_config="power-min")

    def clone(self) -> "Simulator":
        """Independent deep copy for sandbox what-if runs."""
        return copy.deepcopy(self)

    def step(self, env: tuple[float, float], config_id: str | None = None) -> Telemetry:
        """Advance one tick under (interference, demand); returns telemetry."""
        config_id = config_id or self.current_config
        capability = self.capabilities.get(config_id)
        interference, demand = env
        state = self.state

        rng = derive_rng(state.rng_seed, "tick", state.tick)
        noise = rng.uniform(-NOISE_SPAN, 0.0)

        capacity = capability.max_throughput(interference) * state.alive_fraction()
        achieved = max(0.0, min(demand, capacity + noise))
        loss = max(0.0, 1.0 - achieved / demand) if demand > 0 else 0.0

        energy_each = capability.energy_per_tick_mj
        energy_used = 0.0
        motes = []
        for mote in state.motes:
            if mote.alive:
                spent = min(mote.battery_mj, energy_each)
                energy_used += spent
                mote = replace(mote, battery_mj=mote.battery_mj - spent,
                               power_setting=_power_setting(config_id))
            motes.append(mote)

        self.state = replace(state, motes=tuple(motes), tick=state.tick + 1)
        self.current_config = config_id
        return Telemetry(
            tick=state.tick,
            achieved_throughput=achieved,
            packet_loss_fraction=loss,
            interference=interference,
            demand=demand,
            energy_used_mj=energy_used,
            lifetime_estimate_years=self.lifetime_estimate(config_id),
            config_id=config_id,
        )

    def set_configuration(self, config_id: str) -> None:
        """Selects the configuration used from the next tick on."""
        self.capabilities.get(config_id)   # raises NotFoundError when unknown
        self.current_config = config_id

    def install_element(self, payload: dict, settings: Mapping[str, object] | None = None) -> str:
        """Extend the capability model with an element's configuration.

        The payload must be self-describing: element id, data sheet, and
        platform tags. Compatibility tags must intersect the scenario's
        platform tags or the enactment is refused with no state change.
        Returns the new configuration's id.
        """
        settings = dict(settings or {})
        element_id = payload.get("element_id")
        sheet = payload.get("data_sheet", {})
        tags = set(payload.get("platform_tags", ()))
        if not element_id or not sheet:
            raise EnactmentError("payload is missing element_id or data_sheet")
        if not tags & set(self.platform_tags):
            raise EnactmentError(
                f"element {element_id} platform tags {sorted(tags)} do not match "
                f"this network's {sorted(self.platform_tags)}")

        throughput = sheet.get("throughput", {}).get("range")
        interference = sheet.get("interference", {}).get("range")
        if not throughput or not interference:
            raise EnactmentError(
                f"element {element_id} data sheet lacks throughput/interference ranges")

        lifetime = settings.get("lifetime_years", DEFAULT_ELEMENT_LIFETIME)
        box = Region(context_lo=interference[0], context_hi=interference[1],
                     utility_lo=throughput[0], utility_hi=throughput[1],
                     knowledge="known_unknown")
        self.capabilities.add(ConfigCapability(
            config_id=element_id,
            boxes=(box,),
            energy_per_tick_mj=float(settings.get("energy_per_tick_mj",
                                                  DEFAULT_ELEMENT_ENERGY_MJ)),
            lifetime_years=(float(lifetime[0]), float(lifetime[1])),
        ))
        motes = tuple(replace(m, installed_elements=m.installed_elements + (element_id,))
                      for m in self.state.motes)
        self.state = replace(self.state, motes=motes)
        return element_id

    def lifetime_estimate(self, config_id: str) -> tuple[float, float]:
        """The configuration's lifetime interval scaled by remaining battery."""
        capability = self.capabilities.get(config_id)
        fraction = self.state.mean_battery_fraction(self.full_battery_mj)
        lo, hi = capability.lifetime_years
        return (lo * fraction, hi * fraction)


def _power_setting(config_id: str) -> str:
    return {"power-min": "minimum", "power-medium": "medium",
            "power-max": "maximum"}.get(config_id, config_id)

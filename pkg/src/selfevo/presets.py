"""Built-in model, catalogue, and scenario definitions.

These are the desk-scale defaults the CLI ships with and the test suite
runs against: a three-power-setting IoT network whose configuration
regions realize the reference working points (minimum power covers low
demand at mild interference, maximum power trades lifetime for the
widest coverage), plus a small warehouse catalogue containing a
dual-band radio module able to extend the network's throughput range.
"""

from __future__ import annotations

from .odd import ConfigurationOdd, OddModel, Region
from .warehouse import (
    Catalogue,
    CatalogueEntry,
    DataSheet,
    EnumCapability,
    RangeCapability,
    UsageGuide,
)

POWER_MIN = "power-min"
POWER_MEDIUM = "power-medium"
POWER_MAX = "power-max"

#: Conservative fallback held while no configuration satisfies the
#: working point: widest context coverage in the built-in model.
SAFE_CONFIG = POWER_MAX

RADIO_ELEMENT_ID = "dualband-radio"

PLATFORM_TAGS = ("mote-v2", "radio-bus-a")


def canonical_model() -> OddModel:
    """The initial ODD: per-power-setting boxes plus lifetime intervals.

    Minimum power reaches 10 packets/sec down to -12 dB; medium doubles
    the throughput at mild interference and holds 10 packets/sec to
    -22 dB; maximum reaches 30 packets/sec near 0 dB and still delivers
    10 packets/sec at -30 dB.
    """
    return OddModel(version=1, configurations=(
        ConfigurationOdd(
            config_id=POWER_MIN,
            regions=(Region(-12.0, 0.0, 0.0, 10.0),),
            lifetime_years=(5.0, 8.0),
        ),
        ConfigurationOdd(
            config_id=POWER_MEDIUM,
            regions=(
                Region(-12.0, 0.0, 0.0, 20.0),
                Region(-22.0, -12.0, 0.0, 10.0),
            ),
            lifetime_years=(3.0, 5.0),
        ),
        ConfigurationOdd(
            config_id=POWER_MAX,
            regions=(
                Region(-10.0, 0.0, 0.0, 30.0),
                Region(-22.0, -10.0, 0.0, 20.0),
                Region(-30.0, -22.0, 0.0, 10.0),
            ),
            lifetime_years=(1.0, 3.0),
        ),
    ))


def radio_module_entry() -> CatalogueEntry:
    """Dual-band radio module: 0..50 packets/sec down to -30 dB."""
    sheet = DataSheet(capabilities={
        "frequency": RangeCapability(415.0, 868.0, "MHz"),
        "modulation": EnumCapability(("FM",)),
        "throughput": RangeCapability(0.0, 50.0, "packets/sec"),
        "interference": RangeCapability(-30.0, 0.0, "dB"),
    })
    guide = UsageGuide(
        platform_tags=("mote-v2", "radio-bus-a"),
        obtain=f"payload:{RADIO_ELEMENT_ID}",
        integrate=("power-down-radio", "flash-radio-firmware", "register-configuration"),
        configure={
            "energy_per_tick_mj": {"type": "number", "minimum": 0.0, "default": 4.0},
            "lifetime_years": {"type": "interval", "default": [1.0, 3.0]},
        },
    )
    payload = {
        "element_id": RADIO_ELEMENT_ID,
        "version": "1.0.0",
        "kind": "radio-driver",
        "data_sheet": sheet.to_dict(),
        "platform_tags": list(guide.platform_tags),
    }
    return CatalogueEntry.build(
        element_id=RADIO_ELEMENT_ID,
        version="1.0.0",
        data_sheet=sheet,
        usage_guide=guide,
        payload=payload,
    )


def antenna_extender_entry() -> CatalogueEntry:
    """Low-rate long-range antenna: only 15 packets/sec but down to -45 dB."""
    sheet = DataSheet(capabilities={
        "throughput": RangeCapability(0.0, 15.0, "packets/sec"),
        "interference": RangeCapability(-45.0, 0.0, "dB"),
    })
    guide = UsageGuide(
        platform_tags=("mote-v2", "antenna-mast"),
        obtain="payload:antenna-extender",
        integrate=("mount-antenna", "register-configuration"),
        configure={
            "energy_per_tick_mj": {"type": "number", "minimum": 0.0, "default": 2.5},
            "lifetime_years": {"type": "interval", "default": [2.0, 4.0]},
        },
    )
    payload = {
        "element_id": "antenna-extender",
        "version": "1.0.0",
        "kind": "antenna-driver",
        "data_sheet": sheet.to_dict(),
        "platform_tags": list(guide.platform_tags),
    }
    return CatalogueEntry.build(
        element_id="antenna-extender",
        version="1.0.0",
        data_sheet=sheet,
        usage_guide=guide,
        payload=payload,
    )


def canonical_catalogue() -> Catalogue:
    catalogue = Catalogue()
    catalogue.publish(radio_module_entry())
    catalogue.publish(antenna_extender_entry())
    return catalogue


def default_topology(n_motes: int = 15) -> dict:
    """A small multi-hop tree: first tier talks to the gateway directly."""
    motes = []
    for i in range(1, n_motes + 1):
        mote_id = f"m{i:02d}"
        parent = "gateway" if i <= 3 else f"m{(i - 1) // 2:02d}"
        motes.append({"id": mote_id, "parent": parent})
    return {"gateway": "gateway", "motes": motes}


def base_scenario(name: str, environment: list[list[float]], ticks: int,
                  seed: int = 42) -> dict:
    return {
        "name": name,
        "seed": seed,
        "ticks": ticks,
        "loss_goal": 0.05,
        "battery_mj": 20000.0,
        "energy_per_tick_mj": {POWER_MIN: 1.0, POWER_MEDIUM: 2.0, POWER_MAX: 4.0},
        "platform_tags": list(PLATFORM_TAGS),
        "topology": default_topology(),
        "odd_model": None,   # None selects the built-in model
        "environment": environment,
        "debounce": 3,
        "approval_gate": False,
        "sandbox": {"runs": 5, "grid": [5, 5], "ticks_per_run": 20, "pass_threshold": 1.0},
        "commands": [],
    }


def adaptation_scenario() -> dict:
    """Five environment phases driving the reference adaptation walk."""
    env = [
        [0, -5.0, 5.0],
        [10, -5.0, 20.0],
        [20, -20.0, 15.0],
        [30, -20.0, 5.0],
        [40, -10.0, 5.0],
    ]
    return base_scenario("adaptation-walk", env, ticks=50)


def evolution_scenario() -> dict:
    """Sustained demand outside the initial ODD; needs a warehouse element."""
    env = [
        [0, -5.0, 5.0],
        [5, -15.0, 35.0],
    ]
    return base_scenario("evolution-anomaly", env, ticks=60)


def stakeholder_evolution_scenario() -> dict:
    """In-ODD operation with a scheduled operator-submitted extension goal."""
    scenario = base_scenario("evolution-stakeholder", [[0, -5.0, 5.0]], ticks=30)
    scenario["commands"] = [
        {
            "tick": 5,
            "kind": "add_evolution_target",
            "body": {"utility": [20.0, 40.0], "context": [-20.0, 0.0]},
        }
    ]
    return scenario

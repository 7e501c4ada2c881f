"""Scenario configuration: loading, validation, and the parsed form.

A scenario file is a JSON document naming the topology, seed, energy
table, loss goal, environment schedule, the ODD model (inline document,
file path, or null for the built-in one), an optional catalogue path,
and optional scheduled operator commands. Validation collects every
offending field instead of stopping at the first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import odd
from .errors import ValidationError


@dataclass
class Scenario:
    name: str
    seed: int
    ticks: int
    loss_goal: float
    battery_mj: float
    energy_per_tick_mj: dict[str, float]
    platform_tags: tuple[str, ...]
    topology: dict
    odd_model: odd.OddModel
    environment: tuple[tuple[int, float, float], ...]
    debounce: int = 3
    approval_gate: bool = False
    sandbox: dict = field(default_factory=lambda: {
        "runs": 5, "grid": [5, 5], "ticks_per_run": 20, "pass_threshold": 1.0})
    commands: tuple[dict, ...] = ()
    catalogue_path: str | None = None


def _validate_topology(topology, problems: list[tuple[str, str]]) -> None:
    if not isinstance(topology, dict) or "gateway" not in topology or "motes" not in topology:
        problems.append(("topology", "must be an object with 'gateway' and 'motes'"))
        return
    gateway = topology["gateway"]
    motes = topology["motes"]
    if not motes:
        problems.append(("topology.motes", "must be non-empty"))
        return
    ids = [m.get("id") for m in motes]
    if len(ids) != len(set(ids)):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        problems.append(("topology.motes", f"duplicate mote ids: {dupes}"))
        return
    parents = {m["id"]: m.get("parent") for m in motes}
    known = set(parents) | {gateway}
    for mote_id, parent in parents.items():
        if parent not in known:
            problems.append((f"topology.motes[{mote_id}]", f"unknown parent {parent!r}"))
        if parent == mote_id:
            problems.append((f"topology.motes[{mote_id}]", "mote cannot be its own parent"))
    # every mote must reach the gateway without a cycle
    for mote_id in parents:
        seen = set()
        node = mote_id
        while node != gateway:
            if node in seen or node not in parents:
                problems.append((f"topology.motes[{mote_id}]", "does not reach the gateway"))
                break
            seen.add(node)
            node = parents[node]


def parse_scenario(doc: Mapping, base_dir: Path | None = None) -> Scenario:
    """Validate a scenario document; raises ValidationError listing all problems."""
    from .presets import canonical_model   # local import: presets builds scenario dicts

    problems: list[tuple[str, str]] = []

    def require(key, kind, predicate=None, hint=""):
        value = doc.get(key)
        if value is None or not isinstance(value, kind) or (predicate and not predicate(value)):
            problems.append((key, hint or f"missing or invalid {key}"))
            return None
        return value

    name = require("name", str) or "unnamed"
    seed = require("seed", int, hint="seed must be an integer")
    ticks = require("ticks", int, lambda v: v > 0, "ticks must be a positive integer")
    loss_goal = require("loss_goal", (int, float), lambda v: 0 < v < 1,
                        "loss_goal must be a fraction in (0, 1)")
    battery = require("battery_mj", (int, float), lambda v: v > 0,
                      "battery_mj must be positive")
    energy = require("energy_per_tick_mj", dict)
    platform_tags = doc.get("platform_tags") or []

    _validate_topology(doc.get("topology"), problems)

    model = None
    model_ref = doc.get("odd_model")
    try:
        if model_ref is None:
            model = canonical_model()
        elif isinstance(model_ref, str):
            path = (base_dir / model_ref) if base_dir and not Path(model_ref).is_absolute() \
                else Path(model_ref)
            model = odd.load(path)
        elif isinstance(model_ref, dict):
            model = odd.model_from_dict(model_ref)
        else:
            problems.append(("odd_model", "must be null, a path, or an inline document"))
    except (OSError, ValidationError, json.JSONDecodeError) as exc:
        problems.append(("odd_model", str(exc)))

    environment = doc.get("environment")
    env_trace = None
    if not environment:
        problems.append(("environment", "must be a non-empty schedule"))
    else:
        try:
            from .simulator import EnvironmentTrace
            env_trace = EnvironmentTrace(tuple(
                (int(e[0]), float(e[1]), float(e[2])) for e in environment))
        except (ValidationError, TypeError, IndexError, ValueError) as exc:
            problems.append(("environment", str(exc)))

    commands = doc.get("commands") or []
    for i, command in enumerate(commands):
        if not isinstance(command, dict) or "tick" not in command or "kind" not in command:
            problems.append((f"commands[{i}]", "must carry 'tick' and 'kind'"))

    if problems:
        raise ValidationError(problems)

    catalogue_path = doc.get("catalogue")
    if catalogue_path and base_dir and not Path(catalogue_path).is_absolute():
        catalogue_path = str(base_dir / catalogue_path)

    return Scenario(
        name=name,
        seed=seed,
        ticks=ticks,
        loss_goal=float(loss_goal),
        battery_mj=float(battery),
        energy_per_tick_mj={k: float(v) for k, v in energy.items()},
        platform_tags=tuple(platform_tags),
        topology=doc["topology"],
        odd_model=model,
        environment=env_trace.schedule,
        debounce=int(doc.get("debounce", 3)),
        approval_gate=bool(doc.get("approval_gate", False)),
        sandbox=dict(doc.get("sandbox") or
                     {"runs": 5, "grid": [5, 5], "ticks_per_run": 20, "pass_threshold": 1.0}),
        commands=tuple(commands),
        catalogue_path=catalogue_path,
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError([("scenario", f"cannot read {path}: {exc}")]) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError([("scenario", f"{path} is not valid JSON: {exc}")]) from exc
    return parse_scenario(doc, base_dir=path.parent)

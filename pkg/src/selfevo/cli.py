"""Command-line surface: run, verify, serve, and warehouse subcommands."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import ConflictError, SelfEvoError, ValidationError
from .odd import model_to_dict
from .presets import canonical_catalogue
from .runtime import Runtime, run_scenario
from .scenario import load_scenario
from .service import Ticker, create_service_app
from .warehouse import Catalogue, CatalogueEntry
from .verify import verify as verify_log


@click.group()
def main():
    """ODD-driven self-adaptive IoT simulation with autonomous evolution."""


def _load(scenario_path: str, seed: int | None):
    scenario = load_scenario(scenario_path)
    if seed is not None:
        scenario.seed = seed
    return scenario


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--log", "log_path", type=click.Path(), default="events.jsonl",
              show_default=True, help="Event log output (JSON lines).")
@click.option("--telemetry", "telemetry_path", type=click.Path(), default=None,
              help="Optional telemetry CSV export.")
@click.option("--approval-gate/--no-approval-gate", default=None,
              help="Force the enactment approval gate on or off.")
def run(scenario_path, seed, log_path, telemetry_path, approval_gate):
    """Execute a scenario to completion and write its artifacts."""
    try:
        scenario = _load(scenario_path, seed)
        log_file = Path(log_path)
        if log_file.exists():
            log_file.unlink()   # artifacts are per-run, not appended across runs
        runtime = run_scenario(scenario, log_path=log_file,
                               telemetry_path=telemetry_path,
                               approval_gate=approval_gate)
    except ValidationError as exc:
        click.echo("invalid scenario:", err=True)
        for name, problem in exc.fields:
            click.echo(f"  {name}: {problem}", err=True)
        sys.exit(2)
    except SelfEvoError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    snapshot = runtime.snapshot()
    click.echo(f"{scenario.name}: {snapshot['tick']} ticks, "
               f"{snapshot['last_seq']} events, final config {snapshot['config']}, "
               f"ODD version {snapshot['odd_version']}")


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path(exists=True))
@click.option("--expect", "expectation_path", required=True, type=click.Path(exists=True))
def verify(log_path, expectation_path):
    """Check a run's event log against an expected trace."""
    report = verify_log(log_path, expectation_path)
    for line in report.lines():
        click.echo(line)
    sys.exit(0 if report.passed else 1)


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--seed", type=int, default=None)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--realtime", "ms_per_tick", type=int, default=200, show_default=True,
              help="Milliseconds of wall time per simulated tick.")
@click.option("--log", "log_path", type=click.Path(), default=None)
@click.option("--approval-gate/--no-approval-gate", default=True, show_default=True,
              help="With a guidance client connected, enactments wait for approval.")
@click.option("--dashboard", "dashboard_dir", type=click.Path(), default="frontend/dist",
              show_default=True, help="Directory of dashboard static files, if built.")
@click.option("--paused/--running", "start_paused", default=False, show_default=True)
def serve(scenario_path, seed, port, host, ms_per_tick, log_path, approval_gate,
          dashboard_dir, start_paused):
    """Run a scenario behind the guidance service endpoints."""
    import uvicorn

    try:
        scenario = _load(scenario_path, seed)
        runtime = Runtime(scenario, log_path=log_path, approval_gate=approval_gate,
                          endless=True)
    except ValidationError as exc:
        click.echo(f"invalid scenario: {exc}", err=True)
        sys.exit(2)
    runtime.paused = start_paused
    ticker = Ticker(runtime, ms_per_tick=ms_per_tick)
    app = create_service_app(runtime, dashboard_dir=dashboard_dir)
    ticker.start()
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        ticker.stop()


@main.group()
def warehouse():
    """Inspect and extend a warehouse catalogue."""


@warehouse.command("list")
@click.option("--catalogue", "catalogue_path", type=click.Path(), default=None,
              help="Catalogue file; defaults to the built-in catalogue.")
def warehouse_list(catalogue_path):
    """List catalogue entries with their capability sheets."""
    catalogue = Catalogue.load(catalogue_path) if catalogue_path else canonical_catalogue()
    click.echo(f"revision {catalogue.revision}, {len(catalogue.entries())} entries")
    for entry in catalogue.entries():
        click.echo(f"  {entry.element_id}@{entry.version}")
        for name, capability in sorted(entry.data_sheet.capabilities.items()):
            click.echo(f"    {name}: {capability.to_dict()}")


@warehouse.command("publish")
@click.option("--catalogue", "catalogue_path", required=True, type=click.Path())
@click.option("--entry", "entry_path", required=True, type=click.Path(exists=True))
def warehouse_publish(catalogue_path, entry_path):
    """Publish an entry document into a catalogue file."""
    path = Path(catalogue_path)
    catalogue = Catalogue.load(path) if path.exists() else Catalogue()
    try:
        entry = CatalogueEntry.from_dict(json.loads(Path(entry_path).read_text()))
        revision = catalogue.publish(entry)
    except ConflictError as exc:
        click.echo(f"conflict: {exc}", err=True)
        sys.exit(1)
    except (SelfEvoError, KeyError, json.JSONDecodeError) as exc:
        click.echo(f"invalid entry: {exc}", err=True)
        sys.exit(2)
    catalogue.save(path)
    click.echo(f"published {entry.element_id}@{entry.version}, revision {revision}")


@warehouse.command("serve")
@click.option("--catalogue", "catalogue_path", type=click.Path(), default=None)
@click.option("--port", type=int, default=8100, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def warehouse_serve(catalogue_path, port, host):
    """Expose a catalogue over the warehouse wire interface."""
    import uvicorn

    from .warehouse_http import create_warehouse_app

    catalogue = Catalogue.load(catalogue_path) if catalogue_path else canonical_catalogue()
    uvicorn.run(create_warehouse_app(catalogue), host=host, port=port, log_level="warning")


@main.command("export-odd")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default="-")
def export_odd(scenario_path, out_path):
    """Write a scenario's initial ODD model document."""
    scenario = load_scenario(scenario_path)
    text = json.dumps(model_to_dict(scenario.odd_model), indent=2)
    if out_path == "-":
        click.echo(text)
    else:
        Path(out_path).write_text(text + "\n")


if __name__ == "__main__":
    main()

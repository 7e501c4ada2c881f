"""Acceptance suite: one test per release criterion.

Each test prints a PASS/FAIL line (visible with `pytest -s` or on
failure) and enforces its stated tolerance exactly; nothing here is
calibrated after the fact.
"""

import random
import time

from oracle import coverage_fraction
from selfevo.mape import plan
from selfevo.odd import (
    ConfigurationOdd,
    EvolutionTarget,
    OddModel,
    Region,
    WorkingPoint,
    contains,
    coverage,
    satisfying_configs,
    union,
)
from selfevo.presets import (
    adaptation_scenario,
    canonical_catalogue,
    canonical_model,
    evolution_scenario,
)
from selfevo.runtime import run_scenario
from selfevo.scenario import parse_scenario
from selfevo.warehouse import Catalogue

ODD_E = EvolutionTarget(regions=(Region(-20.0, 0.0, 20.0, 40.0),),
                        origin="stakeholder_goal")


def report(name: str, ok: bool, started: float, detail: str = ""):
    elapsed = time.perf_counter() - started
    line = f"{'PASS' if ok else 'FAIL'}  {name}  ({elapsed:.2f}s)"
    if detail:
        line += f"  {detail}"
    print(line)
    assert ok, line


def test_criterion_1_adaptation_trace_reproduction():
    started = time.perf_counter()
    runtime = run_scenario(parse_scenario(adaptation_scenario()))

    telemetry = {r.tick: r.payload for r in runtime.log.records(kinds=["telemetry"])}
    decisions = runtime.log.records(kinds=["decision"])
    walk = []
    for record in decisions:
        chosen = record.payload["chosen"]
        point = (telemetry[record.tick]["demand"], telemetry[record.tick]["interference"])
        if not walk or walk[-1][0] != chosen:
            walk.append((chosen, point, dict((c, tuple(l))
                                             for c, l in record.payload["options"])))

    expected = [
        ("power-min", (5.0, -5.0)),
        ("power-medium", (20.0, -5.0)),
        ("power-max", (15.0, -20.0)),
        ("power-medium", (5.0, -20.0)),
        ("power-min", (5.0, -10.0)),
    ]
    lifetimes = {"power-min": (5.0, 8.0), "power-medium": (3.0, 5.0),
                 "power-max": (1.0, 3.0)}
    ok = [(c, p) for c, p, _ in walk] == expected
    ok = ok and all(options[chosen] == lifetimes[chosen]
                    for chosen, _, options in walk)
    ok = ok and (time.perf_counter() - started) < 1.0
    report("adaptation trace reproduction", ok, started,
           " -> ".join(c for c, _, _ in walk))


def test_criterion_2_evolution_end_to_end():
    started = time.perf_counter()
    runtime = run_scenario(parse_scenario(evolution_scenario()))
    records = runtime.log.records()

    first_out = next(r.tick for r in records if r.kind == "decision"
                     and r.payload["reason"] == "out_of_odd")
    trigger = next(r for r in records if r.kind == "trigger")
    within_debounce = trigger.tick - first_out <= 2   # 3rd consecutive miss

    safe_configs = [r.payload["config"] for r in records
                    if r.kind == "telemetry" and first_out < r.tick <= trigger.tick]
    in_safe_state = all(c == "power-max" for c in safe_configs)

    search_events = [r.payload for r in records if r.kind == "evolution"
                     and r.payload.get("phase") == "search"]
    chose_radio = search_events and \
        search_events[0]["candidates"][0]["element_id"] == "dualband-radio"
    radio_sheet = next(e for e in canonical_catalogue().entries()
                       if e.element_id == "dualband-radio").data_sheet
    sheet_ok = radio_sheet.numeric_range("throughput").to_dict()["range"] == [0.0, 50.0] \
        and radio_sheet.numeric_range("interference").to_dict()["range"] == [-30.0, 0.0]

    evidence = next(r.payload for r in records if r.kind == "evolution"
                    and r.payload.get("phase") == "evidence")
    evidence_ok = evidence["pass_fraction"] == 1.0

    covered = coverage(runtime.knowledge.odd, ODD_E, (21, 21)).fraction == 1.0

    final_losses = [r.payload["loss"] for r in records
                    if r.kind == "telemetry"][-20:]
    steady_loss_ok = sum(final_losses) / len(final_losses) <= 0.05

    elapsed_ok = (time.perf_counter() - started) < 10.0
    ok = all([within_debounce, in_safe_state, chose_radio, sheet_ok,
              evidence_ok, covered, steady_loss_ok, elapsed_ok])
    report("evolution end-to-end", ok, started,
           f"trigger@{trigger.tick}, pass_fraction={evidence['pass_fraction']}")


def _random_model(rng: random.Random, prefix: str) -> OddModel:
    configs = []
    for index in range(rng.randint(1, 4)):
        regions = []
        for _ in range(rng.randint(1, 3)):
            c_lo = rng.randint(-400, -10) / 10
            c_hi = rng.randint(int(c_lo * 10), 0) / 10
            u_lo = rng.randint(0, 500) / 10
            u_hi = rng.randint(int(u_lo * 10), 600) / 10
            regions.append(Region(c_lo, c_hi, u_lo, u_hi))
        configs.append(ConfigurationOdd(f"{prefix}-{index}", tuple(regions),
                                        (rng.randint(1, 40) / 4, rng.randint(41, 80) / 4)))
    return OddModel(tuple(configs))


def test_criterion_3_union_equation_property_suite():
    started = time.perf_counter()
    rng = random.Random(424242)
    total_points = 0
    coverage_mismatch = 0.0
    for _ in range(100):
        a = _random_model(rng, "a")
        b = _random_model(rng, "b")
        merged = union(a, b.configurations)
        for _ in range(100):
            point = WorkingPoint(rng.randint(0, 650) / 10, rng.randint(-450, 0) / 10)
            total_points += 1
            assert contains(merged.all_regions(), point) == (
                contains(a.all_regions(), point) or contains(b.all_regions(), point))

        c_lo = rng.randint(-20, -1) * 2.0
        u_lo = rng.randint(0, 20) * 2.0
        target = EvolutionTarget(regions=(Region(
            c_lo, min(0.0, c_lo + rng.randint(1, 10) * 2.0),
            u_lo, u_lo + rng.randint(1, 15) * 2.0),),
            origin="stakeholder_goal")
        fraction = coverage(merged, target, (21, 21)).fraction
        oracle_fraction, _, total = coverage_fraction(
            [tuple(r.as_box()) for r in merged.all_regions()],
            tuple(target.regions[0].as_box()), (21, 21))
        mismatch = abs(fraction - oracle_fraction)
        coverage_mismatch = max(coverage_mismatch, mismatch)
        assert mismatch <= 1 / total

    ok = total_points == 10_000 and (time.perf_counter() - started) < 30.0
    report("union equation property suite", ok, started,
           f"{total_points} points, worst coverage gap {coverage_mismatch:.2e}")


def test_criterion_4_paper_point_oracle():
    started = time.perf_counter()
    model = canonical_model()
    checks = [
        # the five-step adaptation walk: satisfying sets and planner choice
        ((5, -5), {"power-min", "power-medium", "power-max"}, "power-min"),
        ((20, -5), {"power-medium", "power-max"}, "power-medium"),
        ((15, -20), {"power-max"}, "power-max"),
        ((5, -20), {"power-medium", "power-max"}, "power-medium"),
        ((5, -10), {"power-min", "power-medium", "power-max"}, "power-min"),
    ]
    ok = True
    for (u, c), expected_set, expected_choice in checks:
        configs = satisfying_configs(model, WorkingPoint(u, c))
        ok = ok and set(configs) == expected_set
        options = tuple((cid, model.configuration(cid).lifetime_years)
                        for cid in configs)
        ok = ok and plan(options, "power-min").chosen == expected_choice

    # the two marked reference points: one reachable only at maximum power,
    # one where minimum power is available
    ok = ok and satisfying_configs(model, WorkingPoint(5, -28)) == ["power-max"]
    ok = ok and "power-min" in satisfying_configs(model, WorkingPoint(5, -5))
    report("reference working-point oracle", ok, started)


def test_criterion_5_selection_ordering_invariance():
    started = time.perf_counter()
    rng = random.Random(31337)
    ok = True
    for _ in range(1000):
        n = rng.randint(1, 6)
        options = []
        for i in range(n):
            lo = rng.randrange(1, 64) / 4
            hi = lo + rng.randrange(0, 64) / 4
            options.append((f"cfg-{i}", (lo, hi)))
        incumbent = rng.choice(options)[0] if rng.random() < 0.5 else "elsewhere"
        baseline = plan(tuple(options), incumbent).chosen
        for scale in (0.001, 0.25, 2.0, 7.5, 1000.0):
            scaled = tuple((cid, (lo * scale, hi * scale))
                           for cid, (lo, hi) in options)
            ok = ok and plan(scaled, incumbent).chosen == baseline
    report("selection-ordering invariance", ok, started, "1000 option sets x 5 scales")


def test_criterion_6_byte_identical_determinism(tmp_path):
    started = time.perf_counter()
    ok = True
    for name, builder in (("adaptation", adaptation_scenario),
                          ("evolution", evolution_scenario)):
        blobs = []
        for attempt in range(2):
            path = tmp_path / f"{name}-{attempt}.jsonl"
            run_scenario(parse_scenario(builder()), log_path=path)
            blobs.append(path.read_bytes())
        ok = ok and blobs[0] == blobs[1] and len(blobs[0]) > 0
    report("byte-identical determinism", ok, started)


def test_criterion_7_escalation_safety_with_empty_catalogue():
    started = time.perf_counter()
    runtime = run_scenario(parse_scenario(evolution_scenario()),
                           catalogue=Catalogue())
    records = runtime.log.records()
    outcomes = [r.payload["status"] for r in records if r.kind == "evolution"
                and r.payload.get("phase") == "outcome"]
    ok = outcomes != [] and set(outcomes) == {"no_candidate"}
    ok = ok and not runtime.log.records(kinds=["enactment"])
    ok = ok and runtime.knowledge.odd.version == 1
    ok = ok and runtime.knowledge.safe_state
    ok = ok and runtime.knowledge.current_config == "power-max"
    final_decisions = runtime.log.records(kinds=["decision"])[-10:]
    ok = ok and all(r.payload["reason"] == "out_of_odd" for r in final_decisions)
    report("escalation safety with empty catalogue", ok, started,
           f"outcomes={sorted(set(outcomes))}")

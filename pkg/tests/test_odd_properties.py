"""Property tests of the region algebra over randomized models.

Models are generated with tenth-aligned bounds so the integer-lattice
oracle in oracle.py can act as an independent referee.
"""

from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import coverage_fraction
from selfevo.odd import (
    ConfigurationOdd,
    EvolutionTarget,
    OddModel,
    Region,
    WorkingPoint,
    contains,
    coverage,
    union,
)


@st.composite
def regions(draw):
    c_lo = draw(st.integers(-400, -10)) / 10
    c_hi = draw(st.integers(int(c_lo * 10), 0)) / 10
    u_lo = draw(st.integers(0, 500)) / 10
    u_hi = draw(st.integers(int(u_lo * 10), 600)) / 10
    return Region(c_lo, c_hi, u_lo, u_hi)


@st.composite
def configurations(draw, prefix="cfg"):
    n = draw(st.integers(1, 3))
    index = draw(st.integers(0, 10_000))
    return ConfigurationOdd(
        config_id=f"{prefix}-{index}",
        regions=tuple(draw(regions()) for _ in range(n)),
        lifetime_years=(draw(st.integers(1, 40)) / 4, draw(st.integers(41, 80)) / 4),
    )


@st.composite
def models(draw, prefix="cfg"):
    n = draw(st.integers(1, 4))
    configs = []
    seen = set()
    for _ in range(n):
        config = draw(configurations(prefix=prefix))
        if config.config_id in seen:
            continue
        seen.add(config.config_id)
        configs.append(config)
    return OddModel(tuple(configs))


points = st.builds(WorkingPoint,
                   utility=st.integers(0, 650).map(lambda v: v / 10),
                   context=st.integers(-450, 0).map(lambda v: v / 10))


@settings(max_examples=150)
@given(a=models(prefix="a"), b=models(prefix="b"), point=points)
def test_union_membership_is_disjunction(a, b, point):
    merged = union(a, b.configurations)
    assert contains(merged.all_regions(), point) == (
        contains(a.all_regions(), point) or contains(b.all_regions(), point))


@settings(max_examples=100)
@given(model=models())
def test_every_region_corner_is_a_member(model):
    for region in model.all_regions():
        for corner in region.corners():
            assert region.contains(corner)
            assert contains(model.all_regions(), corner)


@settings(max_examples=100)
@given(a=models(prefix="a"), b=models(prefix="b"))
def test_union_strictly_increments_version(a, b):
    merged = union(a, b.configurations)
    assert merged.version == a.version + 1
    again = union(merged, ())
    assert again.version == merged.version + 1


@st.composite
def aligned_targets(draw):
    # spans divisible by 20 so a 21-point axis lands on the tenth lattice
    c_lo = draw(st.integers(-20, -1)) * 2.0
    c_span = draw(st.integers(1, 10)) * 2.0
    u_lo = draw(st.integers(0, 20)) * 2.0
    u_span = draw(st.integers(1, 15)) * 2.0
    return EvolutionTarget(
        regions=(Region(c_lo, min(0.0, c_lo + c_span), u_lo, u_lo + u_span),),
        origin="stakeholder_goal")


@settings(max_examples=100, deadline=None)
@given(model=models(), target=aligned_targets())
def test_coverage_agrees_with_lattice_oracle(model, target):
    report = coverage(model, target, (21, 21))
    boxes = [tuple(r.as_box()) for r in model.all_regions()]
    expected, contained, total = coverage_fraction(
        boxes, tuple(target.regions[0].as_box()), (21, 21))
    assert abs(report.fraction - expected) <= 1 / total
    assert len(report.uncovered_samples) == total - contained


@settings(max_examples=75, deadline=None)
@given(model=models(prefix="a"), extra=models(prefix="b"), target=aligned_targets())
def test_coverage_never_decreases_under_union(model, extra, target):
    before = coverage(model, target, (11, 11)).fraction
    after = coverage(union(model, extra.configurations), target, (11, 11)).fraction
    assert after >= before


@settings(max_examples=100)
@given(model=models(), point=points)
def test_satisfying_configs_nonempty_iff_contained(model, point):
    from selfevo.odd import satisfying_configs
    assert bool(satisfying_configs(model, point)) == \
        contains(model.all_regions(), point)

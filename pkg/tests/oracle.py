"""Brute-force oracles the tests check the implementation against.

Everything here works in integer tenths-of-a-unit so no float comparison
can disagree with itself: a region with tenth-aligned bounds rasterizes
to an exact set of lattice cells, and membership/coverage are decided by
integer comparisons only. These paths are deliberately independent of
the package's float-interval implementation.
"""

from __future__ import annotations

SCALE = 10  # lattice cells per unit (0.1-unit resolution)


def to_tenths(value: float) -> int:
    scaled = round(value * SCALE)
    assert abs(scaled - value * SCALE) < 1e-9, f"{value} is not tenth-aligned"
    return scaled


def rasterize(boxes: list[tuple[float, float, float, float]]) -> set[tuple[int, int]]:
    """Bitmap of (u10, c10) lattice nodes covered by [c_lo,c_hi,u_lo,u_hi] boxes."""
    cells: set[tuple[int, int]] = set()
    for c_lo, c_hi, u_lo, u_hi in boxes:
        for c10 in range(to_tenths(c_lo), to_tenths(c_hi) + 1):
            for u10 in range(to_tenths(u_lo), to_tenths(u_hi) + 1):
                cells.add((u10, c10))
    return cells


def int_contains(boxes: list[tuple[int, int, int, int]], u10: int, c10: int) -> bool:
    """Membership by integer comparison on tenth-scaled boxes."""
    return any(c_lo <= c10 <= c_hi and u_lo <= u10 <= u_hi
               for c_lo, c_hi, u_lo, u_hi in boxes)


def int_boxes(boxes: list[tuple[float, float, float, float]]) -> list[tuple[int, int, int, int]]:
    return [tuple(to_tenths(v) for v in box) for box in boxes]


def coverage_fraction(model_boxes: list[tuple[float, float, float, float]],
                      target_box: tuple[float, float, float, float],
                      resolution: tuple[int, int]) -> tuple[float, int, int]:
    """Grid-coverage fraction computed entirely in integer tenths.

    The target box and the grid steps must be tenth-aligned; the caller
    constructs targets whose spans divide evenly by (n - 1).
    """
    scaled = int_boxes(model_boxes)
    c_lo, c_hi, u_lo, u_hi = (to_tenths(v) for v in target_box)
    n_u, n_c = resolution
    u_span, c_span = u_hi - u_lo, c_hi - c_lo
    assert u_span % (n_u - 1) == 0 and c_span % (n_c - 1) == 0, "grid not lattice-aligned"
    du, dc = u_span // (n_u - 1), c_span // (n_c - 1)
    contained = 0
    total = 0
    for i in range(n_u):
        for j in range(n_c):
            total += 1
            if int_contains(scaled, u_lo + i * du, c_lo + j * dc):
                contained += 1
    return contained / total, contained, total


CANONICAL_BOXES = [
    (-12.0, 0.0, 0.0, 10.0),
    (-12.0, 0.0, 0.0, 20.0),
    (-22.0, -12.0, 0.0, 10.0),
    (-10.0, 0.0, 0.0, 30.0),
    (-22.0, -10.0, 0.0, 20.0),
    (-30.0, -22.0, 0.0, 10.0),
]

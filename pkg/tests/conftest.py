import math

import numpy as np
import pytest
from hypothesis import strategies as st

from polychord.geometry import Polygon, validate_polygon

_RESULTS: list[tuple[int, str, bool, str]] = []


def random_convex(rng: np.random.Generator, n: int) -> Polygon:
    """Convex n-gon: sorted angles on a random ellipse, randomly placed."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2 * math.pi, n))
        gaps = np.diff(np.append(ang, ang[0] + 2 * math.pi))
        if gaps.min() > 0.05 and gaps.max() < math.pi - 0.05:
            break
    a, b = rng.uniform(0.5, 2.0, 2)
    rot = rng.uniform(0.0, math.pi)
    c, s = math.cos(rot), math.sin(rot)
    x, y = a * np.cos(ang), b * np.sin(ang)
    pts = np.column_stack([c * x - s * y, s * x + c * y]) + rng.uniform(-3, 3, 2)
    return validate_polygon(pts.tolist())


@st.composite
def convex_polygons(draw, min_n=3, max_n=8):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_convex(np.random.default_rng(seed), n)


@st.composite
def rigid_motions(draw):
    angle = draw(st.floats(0.0, 2 * math.pi))
    shift = (draw(st.floats(-10, 10)), draw(st.floats(-10, 10)))
    return angle, shift


@pytest.fixture
def report():
    """Record one acceptance line: report(number, title, passed, detail)."""

    def add(number: int, title: str, passed: bool, detail: str = "") -> bool:
        _RESULTS.append((number, title, bool(passed), detail))
        print(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}  {detail}")
        return bool(passed)

    return add


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}  {detail}")

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polychord.errors import (
    DegenerateInput,
    DegenerateSegment,
    HoleOutsideOuter,
    LineThroughVertexParallel,
    ParallelLines,
    SelfIntersecting,
    TooFewVertices,
)
from polychord.geometry import (
    Point,
    angle_between,
    convex_cover,
    intersect_lines,
    opposite,
    opposite_parallel,
    point_in_ring,
    project_through,
    segments_intersect,
    signed_area,
    solve_triangle,
    triangle_from_points,
    validate_polygon,
)

from conftest import convex_polygons


def test_intersect_lines_basic():
    assert intersect_lines((0, 0), (1, 0), (0.5, -1), (0.5, 1)) == pytest.approx((0.5, 0.0))


def test_intersect_lines_parallel_and_degenerate():
    with pytest.raises(ParallelLines):
        intersect_lines((0, 0), (1, 0), (0, 1), (2, 1))
    with pytest.raises(DegenerateSegment):
        intersect_lines((0, 0), (0, 0), (0, 1), (2, 1))


def test_angle_between():
    assert angle_between((0, 0), (1, 0), (0, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert angle_between((0, 0), (1, 0), (0, 0), (-1, 1)) == pytest.approx(3 * math.pi / 4)


@given(
    st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.05, math.pi - 0.05)
)
def test_solve_triangle_laws(a, b, gamma):
    t = solve_triangle(a, b, gamma)
    assert t.alpha + t.beta + t.gamma == pytest.approx(math.pi, abs=1e-9)
    # law of sines
    assert a / math.sin(t.alpha) == pytest.approx(t.c / math.sin(t.gamma), rel=1e-7)
    assert t.area == pytest.approx(0.5 * t.c * t.heights[2], rel=1e-12)


def test_solve_triangle_rejects_degenerate():
    with pytest.raises(DegenerateInput):
        solve_triangle(1.0, 1.0, 0.0)
    with pytest.raises(DegenerateInput):
        solve_triangle(-1.0, 1.0, 1.0)


def test_triangle_from_points_345():
    t = triangle_from_points((0, 0), (3, 0), (0, 4))
    assert sorted((t.a, t.b, t.c)) == pytest.approx([3, 4, 5])
    assert t.area == pytest.approx(6.0)


def test_project_through_and_opposite_agree():
    # target line y = 0 from T0=(0,0) along e=(1,0); line through P and V
    P, V = Point(0.0, 2.0), Point(1.0, 1.0)
    assert project_through(P, V, (0, 0), (1, 0)) == pytest.approx(2.0)
    # same point through the ray-coordinate form: source ray along y axis from O
    y = opposite(2.0, V, (0, 0), (0, 1), (0, 0), (1, 0))
    assert y == pytest.approx(2.0)
    with pytest.raises(LineThroughVertexParallel):
        project_through((0, 1), (1, 1), (0, 0), (1, 0))


def test_opposite_parallel():
    # lines y=0 (source, from B=(0,0)) and y=2 (target, through D=(0,2)); V midway
    y = opposite_parallel(0.5, (1.0, 1.0), (0.0, 0.0), (1.0, 0.0), (0.0, 2.0))
    assert y == pytest.approx(1.5)


def test_convex_cover_square_with_interior_points():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (0.2, 0.7)]
    hull = convex_cover(pts)
    assert len(hull) == 4
    assert abs(signed_area(hull)) == pytest.approx(1.0)


def test_point_in_ring_and_segments_intersect():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert point_in_ring((0.5, 0.5), sq)
    assert not point_in_ring((1.5, 0.5), sq)
    assert segments_intersect((0, 0), (1, 1), (0, 1), (1, 0))
    assert not segments_intersect((0, 0), (1, 0), (0, 1), (1, 1))


def test_validate_orients_rings():
    p = validate_polygon({"outer": [[0, 0], [0, 3], [3, 3], [3, 0]], "holes": [[[1, 1], [2, 1], [2, 2], [1, 2]]]})
    assert signed_area(p.outer) > 0
    assert signed_area(p.holes[0]) < 0
    assert p.area == pytest.approx(8.0)
    assert p.perimeter == pytest.approx(16.0)
    assert not p.is_convex()


def test_validate_accepts_closed_ring_and_bare_list():
    p = validate_polygon([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]])
    assert len(p.outer) == 4
    assert p.is_convex()


@pytest.mark.parametrize(
    "raw, err",
    [
        ([[0, 0], [1, 0]], TooFewVertices),
        ([[0, 0], [1, 1], [1, 0], [0, 1]], SelfIntersecting),
        ([[0, 0], [1, 0], [2, 0]], SelfIntersecting),
        ({"outer": [[0, 0], [1, 0], [1, 1], [0, 1]], "holes": [[[2, 2], [3, 2], [3, 3]]]}, HoleOutsideOuter),
        ({"outer": [[0, 0], [2, 0], [2, 2], [0, 2]], "holes": [[[1, 1], [3, 1], [1, 3]]]}, SelfIntersecting),
        ([[0, 0], [float("nan"), 0], [1, 1]], DegenerateInput),
        ({"holes": []}, DegenerateInput),
    ],
)
def test_validate_rejects(raw, err):
    with pytest.raises(err):
        validate_polygon(raw)


@given(convex_polygons())
def test_convex_polygons_are_convex(poly):
    assert poly.is_convex()
    assert poly.area > 0
    pts = np.asarray(poly.outer)
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1)).max()
    assert poly.diameter == pytest.approx(d)


@settings(max_examples=30)
@given(convex_polygons(), st.floats(0, 2 * math.pi), st.floats(0.2, 5.0))
def test_transform_scales_area_and_perimeter(poly, angle, k):
    q = poly.transformed(angle, (1.0, -2.0), k)
    assert q.area == pytest.approx(k * k * poly.area, rel=1e-10)
    assert q.perimeter == pytest.approx(k * poly.perimeter, rel=1e-10)
    assert q.diameter == pytest.approx(k * poly.diameter, rel=1e-10)

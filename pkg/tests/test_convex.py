import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polychord.convex import DensityCurve, GridSpec, convex_mcd, convex_plan, nudge, sample_curve
from polychord.errors import NotConvex
from polychord.fixtures import load_fixture
from polychord.quadrature import moments
from polychord.triangle import TriangleDensity, triangle_cld

from conftest import convex_polygons
from oracles import convex_chord_cdf


def _moments(poly):
    plan = convex_plan(poly)
    return moments(plan.evaluate, 0.0, poly.diameter, list(plan.breakpoints) + list(plan.singular))


@settings(max_examples=40, deadline=None)
@given(convex_polygons(3, 10))
def test_crofton_on_random_convex(poly):
    m0, m1 = _moments(poly)
    assert m0 == pytest.approx(poly.perimeter, rel=1e-8)
    assert m1 == pytest.approx(math.pi * poly.area, rel=1e-7)


@pytest.mark.parametrize("name", ["square", "rhombus", "equilateral", "triangle_345"])
def test_bins_match_line_measure(name):
    poly = load_fixture(name)
    plan = convex_plan(poly)
    D = poly.diameter
    edges = np.linspace(0.02 * D, D, 9)
    ref = np.diff(convex_chord_cdf(poly.outer, edges, 8000))
    bps = list(plan.breakpoints) + list(plan.singular)
    got = [moments(plan.evaluate, a, b, bps)[0] for a, b in zip(edges[:-1], edges[1:])]
    np.testing.assert_allclose(got, ref, atol=1e-6 * D)


def test_unit_square_density_below_side_length():
    # each right-angle corner contributes 1/2 while both legs are longer than ell
    sq = load_fixture("square")
    np.testing.assert_allclose(convex_mcd(sq, np.linspace(0.01, 0.99, 25)), 2.0, rtol=1e-12)
    assert convex_plan(sq).singular == pytest.approx((1.0,))
    assert np.all(convex_mcd(sq, np.array([1.5, 2.0])) == 0.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.1, 5.0), st.floats(0.1, math.pi - 0.1))
def test_triangle_paths_agree(a, b, g):
    tri = TriangleDensity.from_sas(a, b, g)
    pts = [(0.0, 0.0), (a, 0.0), (b * math.cos(g), b * math.sin(g))]
    D = max(tri.sides.a, tri.sides.b, tri.sides.c)
    ell = np.linspace(0.003, 0.997, 101) * D
    for x in tri.breakpoints:
        ell = ell[np.abs(ell - x) > 1e-7 * D]
    np.testing.assert_allclose(convex_mcd(pts, ell), triangle_cld(tri, ell), atol=1e-9 * max(1.0, 1 / D))


def test_dodecagons_share_a_curve():
    grid = GridSpec(points=512)
    a = sample_curve(load_fixture("dodecagon_a"), grid)
    b = sample_curve(load_fixture("dodecagon_b"), grid)
    assert np.array_equal(a.grid, b.grid)
    assert np.max(np.abs(a.values - b.values)) < 1e-9


def test_rejects_concave():
    with pytest.raises(NotConvex):
        convex_plan(load_fixture("star"))


def test_nudge_moves_below_avoided_values():
    g = nudge(np.array([0.5, 1.0, 1.5]), [1.0], 2.0)
    assert g[1] < 1.0 and g[1] == pytest.approx(1.0, abs=1e-8)
    assert g[0] == 0.5 and g[2] == 1.5


def test_grid_spec_parsing():
    assert GridSpec.parse("auto").abscissae(2.0)[-1] == 2.0
    assert GridSpec.parse("auto:10").abscissae(1.0).size == 10
    np.testing.assert_allclose(GridSpec.parse("0.1:1:10").abscissae(5.0), np.linspace(0.1, 1, 10))
    for bad in ("1:0.5:10", "0:1:10", "0.1:1:1", "abc"):
        with pytest.raises(ValueError):
            GridSpec.parse(bad)


def test_sample_curve_returns_nonnegative_curve():
    c = sample_curve(load_fixture("rhombus"), "auto:64", "bounds")
    assert isinstance(c, DensityCurve)
    assert np.all(c.values >= 0)
    assert np.array_equal(c.lower, c.values) and np.array_equal(c.upper, c.values)
    with pytest.raises(ValueError):
        sample_curve(load_fixture("rhombus"), None, "nope")

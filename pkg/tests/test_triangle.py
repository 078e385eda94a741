import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from polychord.errors import DegenerateInput
from polychord.geometry import solve_triangle
from polychord.quadrature import integrate, moments
from polychord.triangle import (
    TriangleDensity,
    dominated_measures,
    heaviside,
    perimeter_identity_residual,
    rho_vertex_ac,
    triangle_cld,
)

from oracles import convex_chord_cdf

triangles = st.builds(
    lambda a, b, g: (a, b, g),
    st.floats(0.2, 5.0),
    st.floats(0.2, 5.0),
    st.floats(0.1, math.pi - 0.1),
)


def _tri(a, b, g):
    return TriangleDensity.from_sas(a, b, g)


def test_heaviside_is_zero_at_zero():
    assert heaviside(0.0) == 0.0
    assert heaviside(1e-300) == 1.0
    assert np.all(heaviside(np.array([-1.0, 0.0, 2.0])) == [0.0, 0.0, 1.0])


def test_equilateral_total_is_perimeter():
    tri = TriangleDensity.from_points((0, 0), (1, 0), (0.5, math.sqrt(3) / 2))
    total = integrate(lambda l: triangle_cld(tri, l), 0.0, 1.0, tri.breakpoints)
    assert total == pytest.approx(3.0, abs=1e-6)


def test_density_vanishes_beyond_longest_side():
    tri = TriangleDensity.from_points((0, 0), (3, 0), (0, 4))
    assert np.all(triangle_cld(tri, np.array([5.0, 5.5, 10.0])) == 0.0)
    assert triangle_cld(tri, 4.999) > 0


def test_obtuse_relabelled_with_largest_angle_last():
    tri = TriangleDensity.from_sas(1.0, 1.0, 2.5)
    assert tri.kind == "obtuse"
    assert tri.sides.gamma == pytest.approx(2.5)
    assert TriangleDensity.from_sas(1.0, 1.0, 1.0).kind == "acute"


def test_from_points_rejects_collinear():
    with pytest.raises(Exception):
        TriangleDensity.from_points((0, 0), (1, 0), (2, 0))
    with pytest.raises(DegenerateInput):
        TriangleDensity.from_sas(1.0, 0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(triangles)
def test_crofton_identities(t):
    tri = _tri(*t)
    s = tri.sides
    m0, m1 = moments(lambda l: triangle_cld(tri, l), 0.0, max(s.a, s.b, s.c), tri.breakpoints)
    assert m0 == pytest.approx(s.a + s.b + s.c, rel=1e-8)
    assert m1 == pytest.approx(math.pi * s.area, rel=1e-8)


@settings(max_examples=200)
@given(triangles)
def test_dominated_measures_add_up_to_perimeter(t):
    assert perimeter_identity_residual(solve_triangle(*t)) < 1e-9 * (t[0] + t[1])


@settings(max_examples=30, deadline=None)
@given(triangles)
def test_vertex_density_integrates_to_dominated_measure(t):
    s = solve_triangle(*t)
    assume(max(s.alpha, s.beta, s.gamma) < math.pi / 2 - 1e-3)
    # chords dominated by C when A and B are acute
    f = lambda l: rho_vertex_ac(l, s.alpha, s.beta, s.gamma, s.a, s.b, s.c)  # noqa: E731
    total = integrate(f, 0.0, max(s.a, s.b, s.c), sorted({*s.heights, s.a, s.b, s.c}))
    assert total == pytest.approx(dominated_measures(s)[2], rel=1e-8)


@pytest.mark.parametrize(
    "pts",
    [
        [(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)],
        [(0, 0), (3, 0), (0, 4)],
        [(0, 0), (4, 0), (3.5, 0.6)],
        [(0, 0), (1, 0), (0.1, 2.5)],
    ],
)
def test_bin_masses_match_line_measure(pts):
    tri = TriangleDensity.from_points(*pts)
    D = max(tri.sides.a, tri.sides.b, tri.sides.c)
    edges = np.linspace(0.02 * D, D, 11)
    ref = np.diff(convex_chord_cdf(pts, edges, 8000))
    got = [integrate(lambda l: triangle_cld(tri, l), a, b, tri.breakpoints) for a, b in zip(edges[:-1], edges[1:])]
    np.testing.assert_allclose(got, ref, atol=2e-6 * D)


@settings(max_examples=40, deadline=None)
@given(triangles, st.floats(0.1, 10.0))
def test_scaling_law(t, k):
    a, b, g = t
    tri, big = _tri(a, b, g), _tri(k * a, k * b, g)
    ell = np.linspace(0.01, 1.0, 37) * max(tri.sides.a, tri.sides.b, tri.sides.c) * 0.999
    np.testing.assert_allclose(triangle_cld(big, k * ell), triangle_cld(tri, ell), rtol=1e-9, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(triangles)
def test_labelling_does_not_matter(t):
    s = solve_triangle(*t)
    # same triangle entered through its other two angles
    t2 = TriangleDensity.from_sas(s.b, s.c, s.alpha)
    t3 = TriangleDensity.from_sas(s.c, s.a, s.beta)
    ell = np.linspace(0.01, max(s.a, s.b, s.c), 41)
    base = triangle_cld(_tri(*t), ell)
    np.testing.assert_allclose(triangle_cld(t2, ell), base, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(triangle_cld(t3, ell), base, rtol=1e-9, atol=1e-12)


def test_density_is_nonnegative_on_fine_grid():
    for g in (0.3, 1.2, math.pi / 2, 2.0, 2.9):
        tri = _tri(1.0, 1.7, g)
        v = triangle_cld(tri, np.linspace(1e-6, 3.0, 2001))
        assert v.min() >= -1e-12

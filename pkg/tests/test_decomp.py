import json
import math

import numpy as np
import pytest
from hypothesis import given, settings

from polychord.concave import rho_conc_semianalytic
from polychord.convex import GridSpec, convex_mcd
from polychord.decomp import decompose_pair, density_moments, evaluate_plan, mcd, polygon_plan
from polychord.fixtures import CONCAVE, load_fixture
from polychord.geometry import validate_polygon

from conftest import convex_polygons


def _off_breaks(ell, plan, D):
    for b in list(plan.breakpoints) + list(plan.singular):
        ell = ell[np.abs(ell - b) > 1e-6 * D]
    return ell


@pytest.mark.parametrize("name", CONCAVE)
def test_crofton_on_concave_fixtures(name):
    poly = load_fixture(name)
    m0, m1 = density_moments(poly)
    assert m0 == pytest.approx(poly.perimeter, rel=1e-8)
    assert m1 == pytest.approx(math.pi * poly.area, rel=1e-8)


def test_star_edges_carry_equal_shares():
    star = load_fixture("star")
    n = len(star.edges)
    ell = np.linspace(0.05, 1.85, 23)
    share = np.zeros((n, ell.size))
    for i in range(n):
        for j in range(i + 1, n):
            p = decompose_pair(star, i, j)
            if not p.terms:
                continue
            v = sum(t.coefficient * (t.geometry.evaluate(ell) if t.kind == "Qu" else np.asarray(rho_conc_semianalytic(t.geometry, ell))) for t in p.terms)
            share[i] += v
            share[j] += v
    np.testing.assert_allclose(share, np.broadcast_to(share[0], share.shape), atol=1e-10)
    total = np.asarray(mcd(star, GridSpec.explicit(ell)).values)
    np.testing.assert_allclose(total, 5 * share[0], rtol=1e-10, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(convex_polygons(3, 7))
def test_general_path_matches_convex_path(poly):
    D = poly.diameter
    plan = polygon_plan(poly)
    ell = _off_breaks(np.linspace(0.004, 0.996, 97) * D, plan, D)
    got = evaluate_plan(plan, ell)[0]
    np.testing.assert_allclose(got, convex_mcd(poly, ell), atol=1e-9)


def test_pentagon_pairs_use_notch_terms():
    plan = polygon_plan(load_fixture("pentagon_symmetric"))
    kinds = {t.kind for t in plan.terms}
    assert kinds == {"Qu", "DPent"}
    # facing sides of the square are parallel at distance 1
    assert plan.singular == pytest.approx((1.0,))


def test_plan_serialises():
    plan = polygon_plan(load_fixture("pentagon_asymmetric"))
    d = json.loads(json.dumps(plan.to_dict()))
    assert d["pairs"]
    assert all({"source", "target", "sub_segments"} <= set(p) for p in d["pairs"])
    for p in d["pairs"]:
        for s in p["sub_segments"]:
            assert 0.0 <= s["t0"] < s["t1"] <= 1.0
            assert s["cases"]


def test_invisible_pair_has_no_terms():
    # two edges of the square hole facing away from each other
    poly = load_fixture("square_hole")
    hole = [k for k, e in enumerate(poly.edges) if k >= 4]
    empties = [(i, j) for i in hole for j in hole if i < j and not decompose_pair(poly, i, j).terms]
    assert empties


def test_aligned_vertices_are_flagged():
    poly = validate_polygon([[0, 0], [2, 0], [2, 2], [1, 1], [0, 2]])
    # (0,0), (1,1), (2,2) are collinear
    assert any("aligned" in f for f in polygon_plan(poly).flags)


def test_same_side_rejected():
    with pytest.raises(ValueError):
        decompose_pair(load_fixture("star"), 3, 3)


@pytest.mark.parametrize("engine", ["bounds", "riemann", "semianalytic"])
def test_engines_on_asymmetric_pentagon(engine):
    poly = load_fixture("pentagon_asymmetric")
    ref = mcd(poly, "auto:40", "analytic")
    got = mcd(poly, "auto:40", engine, bounds_n=200)
    if engine == "bounds":
        assert np.all(got.lower <= ref.values + 1e-9) and np.all(ref.values <= got.upper + 1e-9)
    else:
        np.testing.assert_allclose(got.values, ref.values, atol=1e-8)

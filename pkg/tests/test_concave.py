import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polychord.concave import (
    DPentConfig,
    kernel_branch,
    rho2_antiderivative,
    rho2_prime,
    rho2_prime_parallel,
    rho_conc_bounds,
    rho_conc_riemann,
    rho_conc_semianalytic,
)
from polychord.decomp import polygon_plan
from polychord.errors import DegenerateInput, DomainError
from polychord.fixtures import load_fixture
from polychord.geometry import intersect_lines
from polychord.quadrature import integrate

from conftest import random_convex
from oracles import point_kernel, window_chord_cdf

SQUARE_CFG = DPentConfig((0, 0), (0, 1), (0.5, 0.5), (1, 1), (1, 0))
SPOT = [1.01, 1.1, 1.2, 1.3, 1.41]


def _square_closed_form(ell):
    s = np.sqrt(ell**2 - 1)
    return (1 - s) / (ell**2 * s)


def _quad_cfg(seed):
    v = random_convex(np.random.default_rng(seed), 4).outer
    V = intersect_lines(v[0], v[2], v[1], v[3])
    return DPentConfig(v[0], v[1], V, v[2], v[3])


def _plan_cfgs(name):
    return [t.geometry for t in polygon_plan(load_fixture(name)).terms if t.kind == "DPent"]


def _cdf(cfg, ell):
    return window_chord_cdf(cfg.P_A, cfg.P_B, cfg.V, cfg.Q_near, cfg.Q_far, ell)


def _breaks(cfg):
    b, s = cfg.breakpoints()
    return list(b) + list(s)


@pytest.mark.parametrize("engine", [rho_conc_semianalytic, rho_conc_riemann])
def test_square_notch_closed_form(engine):
    ell = np.array(SPOT)
    got = np.asarray(engine(SQUARE_CFG, ell))
    np.testing.assert_allclose(got, _square_closed_form(ell), atol=1e-10)
    assert got[0] == pytest.approx(5.9342, abs=5e-5)
    assert got[2] == pytest.approx(0.352470, abs=5e-7)


def test_square_notch_is_half_the_parallel_pair():
    # by symmetry the notch keeps half of the chords between the facing sides
    ell = np.linspace(1.001, 1.414, 40)
    s = np.sqrt(ell**2 - 1)
    full = 2 * (1 - s) / (ell**2 * s)
    np.testing.assert_allclose(rho_conc_semianalytic(SQUARE_CFG, ell), 0.5 * full, rtol=1e-12)


def test_config_validation():
    with pytest.raises(DegenerateInput):
        DPentConfig((0, 0), (0, 1), (0.4, 0.5), (1, 1), (1, 0))
    with pytest.raises(DegenerateInput):
        DPentConfig((0, 0), (0, 0), (0.5, 0.5), (1, 1), (1, 0))
    assert SQUARE_CFG.parallel and SQUARE_CFG.d == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(6))
def test_general_config_bins_match_line_measure(seed):
    cfg = _quad_cfg(seed)
    edges = np.linspace(0.02, 1.0, 7) * cfg.diameter
    ref = np.diff([_cdf(cfg, e) for e in edges])
    got = [integrate(lambda l: rho_conc_semianalytic(cfg, l), a, b, _breaks(cfg), order=24) for a, b in zip(edges[:-1], edges[1:])]
    np.testing.assert_allclose(got, ref, atol=1e-8 * cfg.diameter)


@pytest.mark.parametrize("name", ["pentagon_asymmetric", "star", "quadrilateral"])
def test_fixture_terms_match_line_measure(name):
    for cfg in _plan_cfgs(name)[:4]:
        edges = np.linspace(0.05, 1.0, 5) * cfg.diameter
        ref = np.diff([_cdf(cfg, e) for e in edges])
        got = [integrate(lambda l: rho_conc_semianalytic(cfg, l), a, b, _breaks(cfg), order=24) for a, b in zip(edges[:-1], edges[1:])]
        np.testing.assert_allclose(got, ref, atol=1e-8 * cfg.diameter)


@pytest.mark.parametrize("seed", range(4))
def test_engines_agree(seed):
    cfg = _quad_cfg(seed)
    ell = np.linspace(0.01, 0.999, 60) * cfg.diameter
    semi = np.asarray(rho_conc_semianalytic(cfg, ell))
    riem = np.asarray(rho_conc_riemann(cfg, ell))
    np.testing.assert_allclose(riem, semi, atol=1e-8 * max(1.0, semi.max()))
    b = rho_conc_bounds(cfg, ell, 200)
    assert np.all(b.lower <= semi + 1e-12) and np.all(semi <= b.upper + 1e-12)


def test_bounds_tighten_with_n():
    cfg = _quad_cfg(11)
    ell = np.linspace(0.05, 0.95, 40) * cfg.diameter
    w = [rho_conc_bounds(cfg, ell, n).width.max() for n in (10, 100, 1000)]
    assert w[2] < w[1] < w[0]
    assert w[2] / w[1] < 0.2


def test_point_kernel_matches_direct_differentiation():
    g = math.pi / 5
    for x, win, ell in [(0.5, (0.0, 5.0), 0.7), (0.5, (0.3, 0.6), 0.7), (1.2, (0.0, 3.0), 0.9), (0.8, (0.0, 4.0), 2.0)]:
        assert float(rho2_prime(x, *win, g, ell)) == pytest.approx(point_kernel(x, win, g, ell), rel=1e-6, abs=1e-9)


def test_point_kernel_vanishes_beyond_reach():
    # x sin(gamma) > ell: the target line is out of reach
    assert float(rho2_prime(2.0, 0.0, 10.0, math.pi / 2, 1.5)) == 0.0


def test_parallel_kernel_counts_images_in_window():
    d, ell = 1.0, 1.25  # images at x -/+ 0.75
    k = d * d / (ell**2 * math.sqrt(ell**2 - d**2))
    assert float(rho2_prime_parallel(1.0, 0.0, 2.0, d, ell)) == pytest.approx(2 * k)
    assert float(rho2_prime_parallel(1.0, 1.0, 2.0, d, ell)) == pytest.approx(k)
    assert float(rho2_prime_parallel(1.0, 0.0, 2.0, d, 0.9)) == 0.0


valid_points = st.tuples(st.floats(0.1, 3.0), st.floats(0.2, math.pi - 0.2), st.floats(0.05, 0.95), st.sampled_from([1, -1]))


@settings(max_examples=100, deadline=None)
@given(valid_points)
def test_antiderivative_derivative_is_the_kernel(p):
    x, g, frac, sign = p
    ell = x * math.sin(g) / frac
    h = 1e-5 * x
    fd = (rho2_antiderivative(x + h, g, ell, sign) - rho2_antiderivative(x - h, g, ell, sign)) / (2 * h)
    assert float(fd) == pytest.approx(float(kernel_branch(x, g, ell, sign)), rel=1e-6, abs=1e-12)


def test_antiderivative_domain():
    with pytest.raises(DomainError):
        rho2_antiderivative(2.0, math.pi / 2, 1.0, "+")
    with pytest.raises(DegenerateInput):
        rho2_antiderivative(1.0, 0.0, 1.0, "+")

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmctori.surface import (
    ClosureNotFound,
    Immersion,
    SurfaceClass,
    SurfaceError,
    SurfaceParams,
    axis_angle_per_period,
    clifford_torus,
    closure_for,
    closure_search,
    count_local_maxima,
    find_closing_brackets,
    flat_closure,
    flat_params,
    gamma_from_st,
    geometry,
    metric_and_curvature,
    ode_residual,
    period_x0,
    profile_curve,
    profile_v,
    refine_closing,
    solve_closing,
    t_range,
)
from cmctori.table import REFERENCE_TABLE

from conftest import published, refined


@st.composite
def admissible(draw):
    """(s, t) with gamma in (0, pi/4], s != t."""
    s = draw(st.floats(min_value=0.36, max_value=0.7))
    intervals = t_range(s)
    a, b = intervals[draw(st.integers(0, len(intervals) - 1))]
    u = draw(st.floats(min_value=0.02, max_value=0.98))
    t = a + u * (b - a)
    if t == 0 or t == s:
        t = 0.5 * (a + b)
    return s, t


def test_clifford_gamma():
    a = 1 / (2 * math.sqrt(2))
    assert gamma_from_st(a, a) == pytest.approx(math.pi / 4, abs=1e-15)
    assert clifford_torus().H == 0.0


@pytest.mark.parametrize("s, t", [(0.4, 0.399), (0.2, 0.1), (0.5, 0.4)])
def test_inadmissible_pairs(s, t):
    with pytest.raises(SurfaceError):
        gamma_from_st(s, t)


@pytest.mark.parametrize("s, t", [(0.0, 0.1), (0.4, 0.0), (0.4, -0.5), (0.4, 0.41)])
def test_invalid_domain(s, t):
    with pytest.raises(SurfaceError):
        SurfaceParams.from_st(s, t)


def test_params_validate_constraint():
    with pytest.raises(SurfaceError):
        SurfaceParams(0.4078, 0.1583, 0.5)


@settings(max_examples=60, deadline=None)
@given(admissible())
def test_constraint_and_ode(st_pair):
    p = SurfaceParams.from_st(*st_pair)
    assert p.constraint_residual <= 1e-12
    x = np.linspace(0, 2 * period_x0(p), 101)
    assert np.abs(ode_residual(p, x)).max() <= 1e-8


@settings(max_examples=60, deadline=None)
@given(admissible())
def test_bulge_neck_radii_sum_to_two_gamma(st_pair):
    p = SurfaceParams.from_st(*st_pair)
    g = geometry(p)
    assert g.r_plus + g.r_minus == pytest.approx(2 * p.gamma, abs=1e-10)


@pytest.mark.parametrize("gamma", [0.2, 0.5, math.pi / 4])
def test_flat_radii_equal_gamma(gamma):
    g = geometry(flat_params(gamma))
    assert g.surface_class is SurfaceClass.FLAT
    assert g.r_plus == pytest.approx(gamma, abs=1e-12)
    assert g.r_minus == pytest.approx(gamma, abs=1e-12)


def test_profile_period():
    p = SurfaceParams.from_st(0.4392, 0.0811)
    x0 = period_x0(p)
    x = np.linspace(0, x0, 17)
    np.testing.assert_allclose(profile_v(p, x + x0), profile_v(p, x), rtol=1e-12)
    # v oscillates between 2t (bulge) and 2s (neck)
    assert profile_v(p, 0.0) == pytest.approx(2 * p.t, rel=1e-14)
    assert profile_v(p, x0 / 2) == pytest.approx(2 * p.s, rel=1e-12)


def test_gauss_curvature_from_metric_matches_immersion():
    p, _ = published("A")
    imm = Immersion(p)
    for x in (0.0, 0.3, 1.1):
        _, K = imm.curvatures(x, 0.4)
        _, K_exact = metric_and_curvature(p, x)
        assert K == pytest.approx(float(K_exact), abs=1e-5)


@pytest.mark.parametrize("name", ["A", "B", "E", "M"])
def test_classification_of_rows(name):
    row = REFERENCE_TABLE[name]
    assert geometry(published(name)[0]).surface_class.value == row.surface_class


def test_row_J_params_classify_as_unduloid():
    # the printed J parameters have r+ slightly above pi/2
    g = geometry(published("J")[0])
    assert g.r_plus > math.pi / 2
    assert g.surface_class is SurfaceClass.UNDULOIDAL


@pytest.mark.parametrize("name", list(REFERENCE_TABLE))
def test_closure_search_recovers_row(name):
    row = REFERENCE_TABLE[name]
    cl = closure_search(SurfaceParams.from_st(row.s, row.t), tol=0.1)
    assert (cl.k, cl.w) == (row.k, row.w)


@pytest.mark.parametrize("name", ["B", "E", "O"])
def test_closure_search_on_refined(name):
    row = REFERENCE_TABLE[name]
    params, _ = refined(name)
    cl = closure_search(params, tol=1e-8)
    assert (cl.k, cl.w) == (row.k, row.w)
    assert cl.residual <= 1e-8


def test_closure_not_found():
    with pytest.raises(ClosureNotFound, match="closure not found"):
        closure_search(SurfaceParams.from_st(0.4078, 0.1583), tol=1e-6)


def test_axis_angle_matches_immersion():
    # the per-period rotation of the profile about the axis, measured on the immersion
    for name in ("A", "M"):
        p, _ = published(name)
        imm = Immersion(p)
        x0 = period_x0(p)
        xs = np.linspace(0, x0, 400)
        pts = imm.point(xs, np.zeros_like(xs))
        angle = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
        assert angle[-1] - angle[0] == pytest.approx(axis_angle_per_period(p), abs=1e-8)


def test_solve_closing_round_trip():
    p = solve_closing(0.4829, 9, 4, (0.035, 0.045))
    assert p.t == pytest.approx(0.0408, abs=5e-4)
    cl = closure_search(p, tol=1e-8)
    assert (cl.k, cl.w) == (9, 4)


def test_closing_brackets_multiple_roots():
    ts = sorted(solve_closing(0.5501, 5, 1, br).t for br in find_closing_brackets(0.5501, 5, 1))
    assert len(ts) == 2
    assert ts[1] == pytest.approx(-0.095, abs=2e-3)


def test_refine_keeps_published_digits():
    row = REFERENCE_TABLE["I"]
    p = refine_closing(SurfaceParams.from_st(row.s, row.t), 3, 1, (5e-5, 5e-4))
    assert abs(closure_for(p, 3, 1).residual) <= 1e-8
    assert abs(p.s - row.s) < 1e-3


@pytest.mark.parametrize("name", ["A", "I"])
def test_immersion_checks(name):
    p, cl = refined(name)
    imm = Immersion(p)
    rng = np.random.default_rng(1)
    for x, y in zip(rng.uniform(0, cl.x1, 10), rng.uniform(0, 2 * math.pi, 10)):
        sample = imm.sample(x, y)
        assert sample.on_sphere_residual <= 1e-8
        assert sample.conformality_residual <= 1e-5
        H, _ = imm.curvatures(x, y)
        assert H == pytest.approx(abs(p.H), abs=1e-3)
        assert np.linalg.norm(imm.point(x + cl.x1, y) - imm.point(x, y)) <= 1e-4


def test_clifford_immersion_closes():
    p = clifford_torus()
    cl = flat_closure(p)
    imm = Immersion(p)
    for x, y in [(0.1, 0.2), (1.3, 2.0)]:
        assert imm.sample(x, y).on_sphere_residual <= 1e-12
        assert np.linalg.norm(imm.point(x + cl.x1, y) - imm.point(x, y)) <= 1e-10
        assert np.linalg.norm(imm.point(x, y + 2 * math.pi) - imm.point(x, y)) <= 1e-10


@pytest.mark.parametrize("name", ["A", "D", "M"])
def test_profile_curve_bulges(name):
    p, cl = refined(name)
    curve = profile_curve(p, cl, 3000)
    assert len(curve.bulges) == cl.k
    assert count_local_maxima(curve.axis_distance[:-1]) == cl.k
    g = geometry(p)
    # distance to the axis circle ranges over [|r-|, r+]
    assert curve.axis_distance.max() == pytest.approx(g.r_plus, abs=1e-5)
    assert curve.axis_distance.min() == pytest.approx(abs(g.r_minus), abs=1e-5)
    assert np.all(np.hypot(*curve.points.T) <= 1 + 1e-12)


def test_flat_profile_is_circle():
    p = flat_params(0.6)
    curve = profile_curve(p, flat_closure(p), 200)
    r = np.hypot(*curve.points.T)
    assert np.ptp(r) < 1e-10

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci
from scipy.special import gammaln

from revolve.bodies import (
    HALF_PI,
    Ball,
    CappedCylinder,
    CosineSeries,
    Cylinder,
    DoubleCone,
    Mod4Body,
    PBody,
    SegmentBody,
    TwoCylinderUnion,
    dilate,
)
from revolve.quadrature import QuadratureConfig, QuadratureError
from revolve.radon import (
    DegenerateProfile,
    IntersectionProfile,
    NormalizationConstants,
    ik_axis,
    ik_equator_margin,
    ik_radial,
    intersection_body,
    iterate_intersection,
    psi_ik,
    psi_ik_drop,
)

from conftest import CONVEX


def wallis(m):
    """int_0^{pi/2} cos(u)^m du."""
    return 0.5 * math.sqrt(math.pi) * math.exp(gammaln((m + 1) / 2) - gammaln(m / 2 + 1))


def oracle_rho_ik(K, n, theta):
    """Direct evaluation of the sine-weighted phi-integral with scipy's QUADPACK."""
    s = math.sin(theta)

    def f(phi):
        w = max(1 - math.cos(phi) ** 2 / s**2, 0.0)
        return float(K.radial(phi)) ** (n - 1) * w ** ((n - 4) / 2) * math.sin(phi)

    lo = HALF_PI - theta
    pts = [p for p in K.kinks if lo < p < HALF_PI]
    val, _ = sci.quad(f, lo, HALF_PI, points=pts or None, epsabs=1e-13, epsrel=1e-13, limit=400)
    return val / s


@pytest.mark.parametrize("n", range(4, 13))
def test_cylinder_equator_value(n):
    assert ik_radial(Cylinder(), n, HALF_PI) == pytest.approx((n - 1) / (n - 2), abs=1e-10)


@pytest.mark.parametrize("n", range(3, 13))
def test_ball_maps_to_constant_wallis_profile(n):
    th = np.linspace(1e-3, HALF_PI, 97)
    v = ik_radial(Ball(), n, th)
    assert np.ptp(v) / v.mean() < 1e-8
    assert v[0] == pytest.approx(wallis(n - 3), rel=1e-12)
    assert ik_axis(Ball(), n) == pytest.approx(wallis(n - 3), rel=1e-12)


def test_double_cone_in_dimension_three():
    assert ik_radial(DoubleCone(), 3, HALF_PI) == pytest.approx(1.0, abs=1e-10)
    assert psi_ik(DoubleCone(), 3, 0.0) == pytest.approx(1.0, abs=1e-10)


def test_cylinder_psi_at_zero():
    assert psi_ik(Cylinder(), 5, 0.0) == pytest.approx(4 / 3, abs=1e-12)


@pytest.mark.parametrize(
    "K", [Cylinder(), DoubleCone(), PBody(3.0), SegmentBody(2.0, 1.0), Mod4Body(), TwoCylinderUnion(0.5)],
    ids=lambda k: k.kind,
)
@pytest.mark.parametrize("n", [4, 5, 7, 10])
def test_against_direct_quadrature(K, n):
    for theta in (0.2, 0.7, 1.1, 1.5):
        assert ik_radial(K, n, theta) == pytest.approx(oracle_rho_ik(K, n, theta), rel=1e-9, abs=1e-11)


def test_axis_values():
    assert ik_axis(Cylinder(), 4) == pytest.approx(1.0, rel=1e-14)
    d5 = NormalizationConstants(5).d_n
    assert ik_axis(Ball(), 5) == pytest.approx(d5 * math.sqrt(math.pi / 10), rel=1e-14)
    scaled = dilate(Ball(), 1.0, 2.0)
    assert ik_axis(scaled, 4) == pytest.approx(8 * ik_axis(Ball(), 4), rel=1e-14)


@pytest.mark.parametrize("K", [Cylinder(), PBody(3.0), DoubleCone(), TwoCylinderUnion(0.5)], ids=lambda k: k.kind)
@pytest.mark.parametrize("n", [4, 6, 9])
def test_axis_is_the_small_angle_limit(K, n):
    assert ik_radial(K, n, 1e-7) == pytest.approx(ik_axis(K, n), abs=1e-6)


def test_normalization_constants():
    # d_4 sqrt(pi/8) = 1 and d_n -> 1 monotonically
    assert NormalizationConstants(4).d_n == pytest.approx(2 * math.sqrt(2) / math.sqrt(math.pi))
    d = np.array([NormalizationConstants(n).d_n for n in range(4, 201)])
    assert np.all(np.diff(d) < 0) and abs(d[-1] - 1) < 0.01
    assert NormalizationConstants(6).c_n == pytest.approx(4 / 5 * 2 * math.pi**2 / 2)
    with pytest.raises(ValueError):
        NormalizationConstants(2)


@pytest.mark.parametrize("n", [3, 4, 5, 8, 11])
def test_true_constant_gives_section_volume(n):
    # the central section of the unit ball is the unit (n-1)-ball
    kappa = math.pi ** ((n - 1) / 2) / math.gamma((n + 1) / 2)
    cfg = QuadratureConfig(use_true_cn=True)
    assert ik_axis(Ball(), n, cfg) == pytest.approx(kappa, rel=1e-12)
    assert ik_radial(Ball(), n, 0.9, cfg) == pytest.approx(kappa, rel=1e-10)


@pytest.mark.parametrize("K", CONVEX + [TwoCylinderUnion(0.5), Mod4Body()], ids=lambda k: k.kind + str(getattr(k, "p", "")))
def test_dual_route_consistency(K):
    tol = 2 * QuadratureConfig().abs_tol
    xs = np.array([0.0, 0.05, 0.3, 0.5, 1.0, 2.0, 7.0])
    for n in range(4, 11):
        a = psi_ik(K, n, xs)
        th = np.arctan2(1.0, xs)
        b = ik_radial(K, n, th) * np.sin(th)
        assert np.max(np.abs(a - b)) < tol


@pytest.mark.parametrize("K", [Ball(), Cylinder(), PBody(3.0), Mod4Body(), TwoCylinderUnion(0.3)], ids=lambda k: k.kind)
@pytest.mark.parametrize("n", [4, 5, 8])
def test_drop_matches_difference_where_it_is_resolvable(K, n):
    xs = np.array([0.1, 0.4, 1.0, 3.0])
    naive = psi_ik(K, n, 0.0) - psi_ik(K, n, xs)
    np.testing.assert_allclose(psi_ik_drop(K, n, xs), naive, atol=1e-12)


def test_drop_resolves_tiny_values():
    # for the Mod4 body in dimension 4, psi_IK(x) = 1 - x^4 near the equator
    M = Mod4Body()
    x = np.array([1e-3, 1e-2, 0.3])
    assert psi_ik(M, 4, 0.0) == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_allclose(psi_ik_drop(M, 4, x), x**4, rtol=1e-7)


def test_equator_margin_closed_forms():
    # n = 4: margin = rho(0)^3; ball n >= 5: (n-4) int sin^(n-5) cos^2
    assert ik_equator_margin(Cylinder(), 4) == pytest.approx(1.0, rel=1e-12)
    for n in (5, 6, 9):
        expected = (n - 4) * (wallis(n - 5) - wallis(n - 3))
        assert ik_equator_margin(Ball(), n) == pytest.approx(expected, rel=1e-10)


def test_intersection_body_samples_and_json():
    res = intersection_body(Cylinder(), 4)
    assert res.profile.rho[0] == pytest.approx(1.0, rel=1e-14)
    assert res.profile.rho[-1] == pytest.approx(1.5, abs=1e-12)
    assert res.profile.theta.size == 1024
    assert res.max_quadrature_error_estimate < 1e-10
    payload = json.loads(json.dumps(res.to_json()))
    assert set(payload) == {"n", "cn_mode", "theta", "rho", "err_est"}
    assert payload["cn_mode"] == "one" and payload["n"] == 4
    assert res.normalized().rho[-1] == 1.0


def test_ball_fixed_point_on_the_sampled_grid():
    res = intersection_body(Ball(), 6)
    assert np.ptp(res.profile.rho) / res.profile.rho.mean() < 1e-8


def test_capped_cylinder_psi_is_constant_near_equator():
    res = intersection_body(CappedCylinder(0.3), 4)
    x = np.linspace(0.0, math.tan(0.3), 300)
    th = np.arctan2(1.0, x)
    p = res.profile.radial(th) * np.sin(th)
    assert np.ptp(p) < 1e-8
    exact = IntersectionProfile(CappedCylinder(0.3), 4).psi(x)
    assert np.ptp(exact) < 1e-10


def test_iteration_ball_and_cylinder():
    steps = iterate_intersection(Ball(), 5, 3)
    assert len(steps) == 3
    for s in steps:
        r = s.normalized().rho
        assert np.max(np.abs(r - 1)) < 1e-8
    one = iterate_intersection(Cylinder(), 4, 1)[0]
    direct = intersection_body(Cylinder(), 4)
    ratio = one.profile.rho / direct.profile.rho
    assert np.ptp(ratio) < 1e-14


def test_iteration_bounds():
    with pytest.raises(ValueError):
        iterate_intersection(Ball(), 5, 0)
    with pytest.raises(ValueError):
        iterate_intersection(Ball(), 5, 17)


def test_double_cone_second_step_is_near_an_ellipsoid():
    from revolve.analysis import bm_ball

    res = iterate_intersection(DoubleCone(), 50, 2)
    assert bm_ball(res[-1]).distance < 1.2


def test_input_errors():
    with pytest.raises(ValueError):
        ik_radial(Ball(), 2, 1.0)
    with pytest.raises(ValueError):
        ik_radial(Ball(), 4.5, 1.0)
    with pytest.raises(DegenerateProfile):
        ik_radial(SegmentBody(1.0, 0.0), 4, 1.0)


def test_quadrature_budget_surfaces():
    cfg = QuadratureConfig(panels=1, abs_tol=0.0)
    with pytest.raises(QuadratureError):
        ik_radial(CosineSeries((0.9,), floor=0.5), 5, np.linspace(0.1, 1.5, 5), cfg)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([DoubleCone(), Cylinder(), PBody(3.0)]), st.sampled_from([4, 5, 6]),
       st.floats(0.3, 3.0))
def test_dilation_equivariance(K, n, s):
    th = np.linspace(0.05, HALF_PI, 23)
    lhs = ik_radial(dilate(K, s, 1.0), n, th)
    rhs = dilate(IntersectionProfile(K, n), 1.0, s).radial(th)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([DoubleCone(), Cylinder(), PBody(4.0)]), st.integers(4, 9), st.floats(0.5, 2.0))
def test_homogeneity(K, n, lam):
    th = np.linspace(0.05, HALF_PI, 17)
    lhs = ik_radial(dilate(K, lam, lam), n, th)
    np.testing.assert_allclose(lhs, lam ** (n - 1) * ik_radial(K, n, th), rtol=1e-9)


def test_busemann_convexity_of_sampled_output(convex_body):
    from revolve.experiments import _meridian_turns

    for n in (4, 7, 10):
        res = intersection_body(convex_body, n)
        assert _meridian_turns(res.profile.theta, res.profile.rho) >= -1e-9

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revolve.analysis import (
    DEFAULT_EPS_GRID,
    AnalysisError,
    bm_ball,
    equator_convexity,
    modulus_equator,
    power_type_fit,
    scan_to_csv_rows,
    uniformity_scan,
)
from revolve.bodies import (
    Ball,
    CappedCylinder,
    CosineSeries,
    Cylinder,
    DoubleCone,
    PBody,
    TwoCylinderUnion,
    dilate,
)
from revolve.radon import IntersectionProfile, intersection_body



def test_modulus_of_the_ball():
    # circle: eps = cos(theta), delta = 1 - sin(theta)
    assert modulus_equator(Ball(), 0.6) == pytest.approx(0.2, abs=1e-14)
    assert modulus_equator(Ball(), 1.0) == 1.0
    for e in (1e-3, 0.1, 0.9):
        assert modulus_equator(Ball(), e) == pytest.approx(1 - math.sqrt(1 - e * e), rel=1e-10)


@pytest.mark.parametrize("p", [3.0, 4.0, 6.0])
def test_modulus_of_lp_balls_leading_term(p):
    e = 1e-3
    assert modulus_equator(PBody(p), e) / e**p == pytest.approx(1 / p, rel=1e-3)


def test_modulus_of_the_cone_is_linear():
    # double cone: theta with cot(theta) = eps / (1 - eps), delta = eps
    for e in (1e-3, 0.2, 0.5):
        assert modulus_equator(DoubleCone(), e) == pytest.approx(e, rel=1e-10)


def test_modulus_errors():
    with pytest.raises(AnalysisError):
        modulus_equator(Ball(), 0.0)
    with pytest.raises(AnalysisError):
        modulus_equator(Ball(), 1.5)
    with pytest.raises(AnalysisError):
        modulus_equator(CappedCylinder(0.3), 0.1)


def test_power_type_of_model_bodies():
    fb = power_type_fit(Ball())
    assert 1.99 <= fb.p <= 2.01 and 0.49 <= fb.c <= 0.51
    f3 = power_type_fit(PBody(3.0))
    assert 2.97 <= f3.p <= 3.03 and f3.c == pytest.approx(1 / 3, rel=0.01)
    assert list(fb.eps_grid) == sorted(fb.eps_grid, reverse=True)
    assert len(DEFAULT_EPS_GRID) == 8 and max(DEFAULT_EPS_GRID) == pytest.approx(0.1)
    assert min(DEFAULT_EPS_GRID) == pytest.approx(1e-3)


def test_power_type_flat_sentinel():
    fit = power_type_fit(Cylinder())
    assert math.isinf(fit.p) and math.isnan(fit.c)


def test_power_type_grid_validation():
    with pytest.raises(AnalysisError):
        power_type_fit(Ball(), [0.1, 0.01])
    with pytest.raises(AnalysisError):
        power_type_fit(Ball(), np.linspace(0.1, 2, 8))


def test_power_type_of_example_two():
    fit = power_type_fit(intersection_body(__import__("revolve").Mod4Body(), 4))
    assert 3.9 <= fit.p <= 4.1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([Ball(), PBody(3.0), PBody(1.5), DoubleCone()]),
       st.floats(0.2, 5.0), st.floats(0.2, 5.0), st.floats(1e-3, 0.9))
def test_modulus_is_invariant_under_axial_dilations(K, sa, sp, e):
    assert abs(modulus_equator(dilate(K, sa, sp), e) - modulus_equator(K, e)) < 1e-9


def test_convexity_sandwich(convex_body):
    K = convex_body
    for e in (1e-3, 1e-2, 0.1, 0.5, 0.9):
        d = modulus_equator(K, e)
        # (1 - eps) rho(pi/2) <= psi <= rho(pi/2) is 0 <= delta <= eps
        assert -1e-10 <= d <= e + 1e-10


def test_equator_convexity_verdicts():
    rep = equator_convexity(Ball())
    assert rep.verdict == "strictly-convex" and rep.margin == pytest.approx(1.0, abs=1e-6)
    flat = equator_convexity(IntersectionProfile(CappedCylinder(0.3), 4))
    assert flat.verdict == "locally-convex-flat"
    strict = equator_convexity(IntersectionProfile(TwoCylinderUnion(0.5), 5))
    assert strict.verdict == "strictly-convex"


@pytest.mark.parametrize("c", [0.1, 0.2, 0.5])
def test_equator_margin_of_a_cosine_profile(c):
    # rho = 1 + c cos(2 theta): rho(pi/2) = 1 - c, rho''(pi/2) = 4c
    rep = equator_convexity(CosineSeries((c,), floor=0.0))
    assert rep.margin == pytest.approx(1 - 5 * c, abs=1e-6)
    expected = "strictly-convex" if c < 0.2 else ("locally-convex-flat" if c == 0.2 else "non-convex")
    assert rep.verdict == expected


@pytest.mark.parametrize("K", [Cylinder(), DoubleCone(), TwoCylinderUnion(0.5)], ids=lambda k: k.kind)
@pytest.mark.parametrize("n", [4, 5, 8])
def test_numeric_margin_matches_closed_form(K, n):
    from revolve.radon import ik_equator_margin

    rep = equator_convexity(IntersectionProfile(K, n))
    # for n = 4 the cone's corner at the axis leaves a cubic term in psi_IK,
    # so the second difference is only first-order accurate there
    tol = 2e-3 if (n == 4 and isinstance(K, DoubleCone)) else 1e-6
    assert rep.margin == pytest.approx(ik_equator_margin(K, n), abs=tol)


def test_bm_ball_oracles():
    r = bm_ball(Ball())
    assert r.distance == pytest.approx(1.0, abs=1e-12) and r.s_opt == pytest.approx(1.0, abs=1e-6)
    e = bm_ball(dilate(Ball(), 3.0, 1.0))
    assert e.distance == pytest.approx(1.0, abs=1e-9) and e.s_opt == pytest.approx(1 / 3, rel=1e-6)
    # the square is sqrt(2) away from the disc and no axial stretch helps
    assert bm_ball(Cylinder()).distance == pytest.approx(math.sqrt(2), rel=1e-9)
    assert bm_ball(DoubleCone()).distance == pytest.approx(math.sqrt(2), rel=1e-9)
    assert len(r.ratio_curve) == 64
    assert set(r.to_json()) == {"distance", "s_opt"}


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([Cylinder(), PBody(3.0), DoubleCone(), TwoCylinderUnion(0.5)]), st.floats(0.1, 10.0))
def test_bm_ball_uniform_dilation_invariance(K, lam):
    assert abs(bm_ball(dilate(K, lam, lam)).distance - bm_ball(K).distance) < 1e-9


def test_bm_ball_needs_positive_radius():
    with pytest.raises(AnalysisError):
        bm_ball(CappedCylinder(0.3))


def test_uniformity_scan_of_the_ball():
    rows = uniformity_scan([Ball()], range(4, 11))
    assert all(abs(r.p - 2) < 0.01 for r in rows)
    # I(ball) is a ball, whose eps^2 coefficient is 1/2
    assert all(r.c_K == pytest.approx(0.5, rel=0.01) for r in rows)
    table = scan_to_csv_rows(rows)
    assert table[0] == ("body", "n", "p", "c_K", "residual") and table[1][0] == "ball"


def test_uniformity_scan_range():
    with pytest.raises(AnalysisError):
        uniformity_scan([Ball()], [3])
    with pytest.raises(AnalysisError):
        uniformity_scan([Ball()], [21])


def test_analysis_accepts_operator_results():
    res = intersection_body(PBody(4.0), 6)
    assert modulus_equator(res, 0.01) == modulus_equator(IntersectionProfile(PBody(4.0), 6), 0.01)

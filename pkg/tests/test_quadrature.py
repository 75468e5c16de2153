import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revolve.quadrature import QuadratureConfig, QuadratureError, integrate, integrate_many


def test_polynomial_is_exact_on_one_panel():
    # 20-point Gauss-Legendre integrates degree 39 exactly
    val, err = integrate(lambda u: u**39, 0.0, 1.0)
    assert val == pytest.approx(1 / 40, rel=1e-14)
    assert err < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=12), st.floats(-3, 0), st.floats(0.1, 3))
def test_random_polynomials_match_antiderivative(coeffs, a, width):
    b = a + width
    P = np.polynomial.Polynomial(coeffs)
    exact = P.integ()(b) - P.integ()(a)
    val, _ = integrate(P, a, b)
    assert val == pytest.approx(exact, abs=1e-11)


def test_kink_handled_by_adaptivity_and_by_breaks():
    exact = 0.3**2 / 2 + 0.7**2 / 2
    plain, _ = integrate(lambda u: np.abs(u - 0.3), 0.0, 1.0)
    seeded, _ = integrate(lambda u: np.abs(u - 0.3), 0.0, 1.0, breaks=[0.3])
    assert plain == pytest.approx(exact, abs=1e-10)
    assert seeded == pytest.approx(exact, abs=1e-15)


def test_many_integrals_share_one_call_pattern():
    edges = [[0.0, k] for k in (1.0, 2.0, 3.0)]
    vals, errs = integrate_many(lambda u, idx: np.cos(u) * (idx + 1), edges)
    exact = [1 * math.sin(1.0), 2 * math.sin(2.0), 3 * math.sin(3.0)]
    np.testing.assert_allclose(vals, exact, atol=1e-13)
    assert np.all(errs < 1e-10)


def test_budget_exhaustion_is_reported():
    # a jump that is never on a panel edge cannot be resolved in 3 panels
    with pytest.raises(QuadratureError) as info:
        integrate(lambda u: (u > 1 / math.pi).astype(float), 0.0, 1.0, abs_tol=0.0, max_panels=3)
    assert info.value.estimate > 0


@pytest.mark.parametrize(
    "kw",
    [dict(nodes=15), dict(nodes=14), dict(panels=0), dict(abs_tol=-1.0), dict(tail_cutoff_R=1.0),
     dict(deriv_step=0.0), dict(grid_size=63)],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        QuadratureConfig(**kw)


def test_config_defaults():
    c = QuadratureConfig()
    assert (c.nodes, c.abs_tol, c.tail_cutoff_R, c.deriv_step, c.grid_size) == (20, 1e-10, 40.0, 1e-3, 1024)
    assert not c.use_true_cn

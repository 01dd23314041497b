import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erfcx

from mlineq.mittag_leffler import (
    X_MAX,
    SeriesDivergence,
    ml,
    ml_deriv,
    ml_negative_integral,
    ml_power,
    phi,
    psi,
    representation,
)
from mlineq.quadrature import QuadratureSpec, Substitution

# E_alpha(x) at the exact double inputs, 40-digit mpmath summation of the series
SERIES_ORACLE = [
    (0.5, 1, 5.0089800807622834663),
    (0.5, -3, 0.17900115118138995042),
    (0.3, 2, 79485.907625183568623),
    (0.8, -1.5, 0.26363903543962692829),
    (1.5, 4, 8.3397195240697952449),
    (2.5, -10, -1.2442332043062486853),
    (3.7, 20, 2.3312844438571608073),
    (0.7, 10, 639295673243.01708451),
]

# alternating sums with terms near e^(x^(1/alpha)): accuracy is lost to
# cancellation, and the error estimate must say so
CANCELLING_ORACLE = [
    (1.2, -30, -0.0061897755800389532247),
    (0.5, -6, erfcx(6.0)),
]


@pytest.mark.parametrize("alpha, x, expected", SERIES_ORACLE)
def test_series_oracle(alpha, x, expected):
    r = ml(alpha, x)
    assert abs(r.value - expected) <= r.abs_error_estimate
    assert r.value == pytest.approx(expected, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("alpha, x, expected", CANCELLING_ORACLE)
def test_error_estimate_covers_cancellation(alpha, x, expected):
    r = ml(alpha, x)
    assert abs(r.value - expected) <= r.abs_error_estimate
    assert r.abs_error_estimate > 1e-12 * abs(expected)


@pytest.mark.parametrize("x", [-4.0, -1.0, -0.1, 0.3, 1.0, 2.5, 5.0])
def test_half_order_is_scaled_erfc(x):
    # E_{1/2}(x) = exp(x^2) erfc(-x)
    r = ml(0.5, x)
    tol = max(1e-12 * abs(r.value), 2 * r.abs_error_estimate)
    assert r.value == pytest.approx(erfcx(-x), abs=tol)


def test_exp_and_cosh_anchors():
    assert ml(1, 1).value == pytest.approx(math.e, rel=1e-15)
    assert ml(2, 4).value == pytest.approx(math.cosh(2), rel=1e-15)
    assert ml_power(0.5, 4).value == pytest.approx(math.exp(4) * math.erfc(-2), rel=1e-13)


@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 2.0, 7.5])
def test_power_closed_forms(x):
    assert ml_power(1, x).value == pytest.approx(math.exp(x), rel=1e-10)
    assert ml_power(2, x).value == pytest.approx(math.cosh(x), rel=1e-10)
    assert ml_power(4, x).value == pytest.approx(0.5 * (math.cos(x) + math.cosh(x)), rel=1e-10)


def test_negative_even_order_oscillates():
    # E_2(-x^2) = cos x
    assert ml(2, -49.0).value == pytest.approx(math.cos(7.0), abs=1e-13)


@given(st.floats(0.05, 8.0))
def test_zero_argument_is_exactly_one(alpha):
    assert ml(alpha, 0.0).value == 1.0
    assert ml_power(alpha, 0.0).value == 1.0


def test_derivative_values():
    assert ml_deriv(1, 0.7).value == pytest.approx(math.exp(0.7), rel=1e-15)
    assert ml_deriv(2, 1).value == pytest.approx(math.sinh(1) / 2, rel=1e-14)
    assert ml_deriv(0.6, 0).value == pytest.approx(1 / math.gamma(1.6), rel=1e-15)


@given(st.floats(0.3, 3.0), st.floats(-2.0, 2.0))
@settings(max_examples=50, deadline=None)
def test_derivative_matches_central_difference(alpha, x):
    h = 1e-5
    fd = (ml(alpha, x + h).value - ml(alpha, x - h).value) / (2 * h)
    assert ml_deriv(alpha, x).value == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_domain_guards():
    with pytest.raises(ValueError):
        ml(0.0, 1.0)
    with pytest.raises(ValueError):
        ml(0.5, X_MAX + 1)
    with pytest.raises(ValueError):
        ml_power(0.5, -1.0)
    with pytest.raises(SeriesDivergence):
        ml(0.5, 40.0, max_terms=5)


@pytest.mark.parametrize("alpha", [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 3.0])
def test_phi_representation(alpha, x):
    p = phi(alpha, x)
    assert p.value >= 0
    lhs = math.exp(x) / alpha - p.value
    assert abs(lhs - ml_power(alpha, x).value) <= 1e-8


def test_phi_values():
    # E_{1/2}(x^{1/2}) = erfcx(-sqrt x), so phi_{1/2}(x) = 2e^x - erfcx(-sqrt x) = erfcx(sqrt x)
    for x in (0.25, 1.0, 4.0):
        assert phi(0.5, x).value == pytest.approx(erfcx(math.sqrt(x)), rel=1e-10)
    assert phi(0.4, 2.0).value > phi(0.4, 3.0).value > 0


@pytest.mark.parametrize("alpha", [1.1, 1.2, 1.5, 1.8, 1.95])
@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 3.0])
def test_psi_log_identity(alpha, x):
    p = psi(alpha, x)
    resid = math.log(ml_power(alpha, x).value) - x + math.log(alpha) - math.log(p.value)
    assert abs(resid) <= 1e-8


def test_psi_decreasing_and_positive():
    vals = [psi(1.5, x).value for x in (0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert psi(1.1, 0.5).value > 0
    # between alpha (x -> 0) and 1 (x -> inf); not inside (0, 1]
    assert all(1.0 < v < 1.5 for v in vals)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
@pytest.mark.parametrize("x", [0.3, 1.0, 2.5])
def test_halving_identity(alpha, x):
    beta = alpha / 2
    xb = x**beta
    half = 0.5 * (ml(beta, xb).value + ml(beta, -xb).value)
    assert ml_power(alpha, x).value == pytest.approx(half, rel=1e-9)


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.75, 0.9])
@pytest.mark.parametrize("x", [0.2, 1.0, 2.0])
def test_negative_argument_integral(beta, x):
    via_integral = ml_negative_integral(beta, x).value
    assert via_integral == pytest.approx(ml(beta, -(x**beta)).value, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("alpha, x", [(0.4, 1.0), (0.9, 2.0), (1.3, 0.5), (1.7, 3.0)])
def test_substitution_routes_agree(alpha, x):
    f = phi if alpha < 1 else psi
    raw = f(alpha, x, QuadratureSpec(substitution=Substitution.NONE)).value
    assert raw == pytest.approx(f(alpha, x).value, rel=1e-9)


def test_representation_components():
    r = representation(0.6, 1.5)
    assert r.exp_term == pytest.approx(math.exp(1.5) / 0.6)
    assert r.integral_term >= 0
    assert r.value == pytest.approx(ml_power(0.6, 1.5).value, rel=1e-10)
    r2 = representation(1.5, 1.0)
    assert r2.value == pytest.approx(ml_power(1.5, 1.0).value, rel=1e-10)


@pytest.mark.parametrize("bad", [(1.0, 1.0), (2.0, 1.0), (0.5, 0.0)])
def test_representation_domain(bad):
    with pytest.raises(ValueError):
        representation(*bad)
    with pytest.raises(ValueError):
        phi(1.5, 1.0)
    with pytest.raises(ValueError):
        psi(0.5, 1.0)

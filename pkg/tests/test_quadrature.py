import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from mlineq.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    EvalResult,
    QuadratureError,
    QuadratureSpec,
    default_quad_tol,
    gauss_kronrod,
)


def test_rule_tables_are_consistent():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.allclose(NODES, -NODES[::-1], atol=0)
    # Gauss-7 is exact through degree 13, Kronrod-15 through degree 22
    for deg in range(0, 23):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert NODES**deg @ KRONROD_WEIGHTS == pytest.approx(exact, abs=1e-14)
        if deg <= 13:
            assert NODES**deg @ GAUSS_WEIGHTS == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize(
    "f, a, b, exact",
    [
        (np.exp, 0.0, 1.0, math.e - 1.0),
        (np.sin, 0.0, math.pi, 2.0),
        (lambda x: 1.0 / (1.0 + x * x), -1.0, 1.0, math.pi / 2),
        (lambda x: x**-0.5, 0.0, 1.0, 2.0),
        (lambda x: np.log(x), 0.0, 1.0, -1.0),
        (lambda x: np.exp(-x / (1 - x)) / (1 - x) ** 2, 0.0, 1.0, 1.0),
    ],
)
def test_known_integrals(f, a, b, exact):
    res = gauss_kronrod(f, a, b, QuadratureSpec(abs_tol=1e-12))
    assert res.value == pytest.approx(exact, abs=1e-11)
    assert abs(res.value - exact) <= max(res.abs_error_estimate, 1e-14)


# bisection alone gains only 2^-(1+p) per level at the singular endpoint, so
# stronger singularities are left to the substitutions of the callers
@given(
    st.floats(-0.5, 3.0),
    st.floats(0.1, 5.0),
)
@settings(max_examples=40, deadline=None)
def test_against_scipy(p, x):
    # t^p e^(-x t) on [0, 1] with an endpoint singularity when p < 0
    def f(t):
        return t**p * np.exp(-x * t)

    ours = gauss_kronrod(f, 0.0, 1.0, QuadratureSpec(abs_tol=1e-11, rel_tol=1e-12)).value
    ref, _ = integrate.quad(lambda t: t**p * math.exp(-x * t), 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert ours == pytest.approx(ref, rel=1e-9, abs=1e-10)


def test_breakpoints_help_with_kinks():
    f = lambda x: np.abs(x - 0.3)
    exact = 0.5 * (0.3**2 + 0.7**2)
    with_bp = gauss_kronrod(f, 0.0, 1.0, breakpoints=[0.3])
    assert with_bp.value == pytest.approx(exact, abs=1e-14)
    assert with_bp.work == 30


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_integrand_raises():
    with pytest.raises(QuadratureError):
        gauss_kronrod(lambda x: np.where(x > 0.5, np.inf, 1.0), 0.0, 1.0)


def test_budget_exhaustion_raises():
    spec = QuadratureSpec(abs_tol=1e-14, max_refinements=2, rel_tol=0.0)
    with pytest.raises(QuadratureError):
        gauss_kronrod(lambda x: np.sin(1.0 / x), 0.0, 1.0, spec)


def test_interval_order_checked():
    with pytest.raises(ValueError):
        gauss_kronrod(np.exp, 1.0, 0.0)


def test_env_override(monkeypatch):
    monkeypatch.setenv("MLINEQ_QUAD_TOL", "1e-6")
    assert default_quad_tol() == 1e-6
    assert QuadratureSpec().abs_tol == 1e-6
    monkeypatch.setenv("MLINEQ_QUAD_TOL", "-1")
    with pytest.raises(ValueError):
        default_quad_tol()
    monkeypatch.delenv("MLINEQ_QUAD_TOL")
    assert default_quad_tol() == 1e-10


@pytest.mark.parametrize("kwargs", [{"abs_tol": 0.0}, {"max_refinements": 0}, {"rel_tol": -1.0}])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


def test_eval_result_invariants():
    assert float(EvalResult(1.5, 0.0, 1)) == 1.5
    with pytest.raises(ArithmeticError):
        EvalResult(math.nan, 0.0, 1)
    with pytest.raises(ValueError):
        EvalResult(1.0, -1.0, 1)
    with pytest.raises(ValueError):
        EvalResult(1.0, 0.0, 0)

"""Mittag-Leffler function E_alpha by power series, plus the integral
representations of E_alpha(x^alpha) for 0 < alpha < 2.

Series evaluation is only meant for moderate arguments (|x| <= X_MAX); there
is no asymptotic or Pade regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gamma_core import cos_pi, log_gamma, sin_pi
from .quadrature import EvalResult, QuadratureSpec, Substitution, gauss_kronrod

__all__ = [
    "MAX_TERMS",
    "SeriesDivergence",
    "ReprComponents",
    "X_MAX",
    "ml",
    "ml_deriv",
    "ml_negative_integral",
    "ml_power",
    "phi",
    "psi",
    "representation",
]

X_MAX = 50.0
MAX_TERMS = 20000
SERIES_EPS = 1e-17
_U = 2.0**-53


class SeriesDivergence(ArithmeticError):
    """Term cap reached before the series termination rule fired, or the
    terms left double range."""


def _term(alpha: float, z: float, k: int, power: int) -> tuple[float, float]:
    """z**power / Gamma(alpha*k + 1) and a bound on its relative rounding error.

    Direct evaluation is used while both factors are representable; in log
    space the error grows with the size of the logarithms being exponentiated.
    """
    g_arg = alpha * k + 1.0
    # rounding of g_arg itself, amplified by the digamma function
    arg_err = g_arg * math.log(g_arg + 1.0)
    if power == 0:
        if g_arg < 170.0:
            return 1.0 / math.gamma(g_arg), (8.0 + arg_err) * _U
        lg = log_gamma(g_arg)
        return math.exp(-lg), (8.0 + 4.0 * lg + arg_err) * _U
    if z == 0.0:
        return 0.0, 0.0
    log_pow = power * math.log(abs(z))
    if g_arg < 170.0 and abs(log_pow) < 700.0:
        return z**power / math.gamma(g_arg), (8.0 + arg_err) * _U
    lg = log_gamma(g_arg)
    log_mag = log_pow - lg
    if log_mag < -745.0:
        return 0.0, 0.0
    if log_mag > 709.0:
        raise SeriesDivergence(f"series term for alpha={alpha}, x={z} exceeds double range")
    sign = -1.0 if (z < 0 and power % 2) else 1.0
    return sign * math.exp(log_mag), (8.0 + abs(log_pow) + 4.0 * lg + arg_err) * _U


def _series(alpha: float, z: float, deriv: bool, max_terms: int) -> EvalResult:
    """Sum z^k/Gamma(alpha k+1) (or its termwise derivative) with Neumaier
    compensation, stopping after three consecutive negligible terms past the
    magnitude peak."""
    total = 0.0
    comp = 0.0
    abs_sum = 0.0
    term_err = 0.0
    small_run = 0
    prev_mag = math.inf
    past_peak = False
    last = 0.0
    ratio = 0.0
    k0 = 1 if deriv else 0
    for n, k in enumerate(range(k0, k0 + max_terms), start=1):
        t, rel = _term(alpha, z, k, k - 1 if deriv else k)
        if deriv:
            t *= k
        # Neumaier step
        s = total + t
        if abs(total) >= abs(t):
            comp += (total - s) + t
        else:
            comp += (t - s) + total
        total = s
        mag = abs(t)
        abs_sum += mag
        term_err += rel * mag
        if mag < prev_mag:
            past_peak = True
        if past_peak and prev_mag > 0:
            ratio = mag / prev_mag
        prev_mag = mag
        last = mag
        partial = abs(total + comp)
        if past_peak and (mag < SERIES_EPS * partial or mag == 0.0):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 3 or (z == 0.0 and k >= k0):
            value = total + comp
            tail = last * ratio / (1.0 - ratio) if ratio < 1.0 else last
            # per-term evaluation error, summation error, final rounding
            rounding = term_err + 2.0 * _U * abs_sum + _U * abs(value)
            return EvalResult(value, tail + rounding, n)
    raise SeriesDivergence(
        f"Mittag-Leffler series for alpha={alpha}, x={z} did not converge "
        f"within {max_terms} terms"
    )


def _check_args(alpha: float, x: float, x_max: float) -> None:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not math.isfinite(x) or abs(x) > x_max:
        raise ValueError(f"|x| must be <= {x_max}, got {x}")


def ml(alpha: float, x: float, *, x_max: float = X_MAX, max_terms: int = MAX_TERMS) -> EvalResult:
    """E_alpha(x) by its defining power series."""
    _check_args(alpha, x, x_max)
    if x == 0.0:
        return EvalResult(1.0, 0.0, 1)
    return _series(alpha, x, False, max_terms)


def ml_deriv(alpha: float, x: float, *, x_max: float = X_MAX, max_terms: int = MAX_TERMS) -> EvalResult:
    """E_alpha'(x) by the termwise differentiated series."""
    _check_args(alpha, x, x_max)
    return _series(alpha, x, True, max_terms)


def ml_power(alpha: float, x: float, *, x_max: float = X_MAX, max_terms: int = MAX_TERMS) -> EvalResult:
    """E_alpha(x^alpha) for x >= 0.

    The range guard applies to ``x`` itself: the value grows like e^x/alpha,
    whereas x^alpha may legitimately be far larger than ``x_max``.
    """
    if not x >= 0:
        raise ValueError(f"ml_power needs x >= 0, got {x}")
    _check_args(alpha, x, x_max)
    if x == 0.0:
        return EvalResult(1.0, 0.0, 1)
    return _series(alpha, x**alpha, False, max_terms)


# -- integral representations ---------------------------------------------

def _kernel_integral(alpha: float, x: float, c: float, spec: QuadratureSpec) -> EvalResult:
    """int_0^inf t^(alpha-1) e^(-x t) / (t^(2 alpha) - 2 c t^alpha + 1) dt."""
    sin2 = 1.0 - c * c
    if not sin2 > 1e-14:
        raise ValueError(f"denominator degenerates for alpha={alpha} (sin(alpha pi) = 0)")
    inv = 1.0 / alpha

    def den(u):
        d = (u - c) * (u - c) + sin2
        assert np.all(d >= sin2 * (1.0 - 1e-12)), "denominator below sin^2 bound"
        return d

    if spec.substitution is Substitution.POWER_ALPHA:
        # u = t^alpha on [0, 1]; t = 1/u then u -> u^alpha on [1, inf)
        def g(u):
            # quadrature nodes are interior, so u > 0 here
            with np.errstate(over="ignore"):
                tail = np.exp(-x * u**-inv)
            return inv * (np.exp(-x * u**inv) + tail) / den(u)

        return gauss_kronrod(g, 0.0, 1.0, spec)

    # raw t on [0, 1] (integrable t^(alpha-1) singularity), t = 1/u on the tail
    def head(t):
        ta = np.power(t, alpha)
        return np.power(t, alpha - 1.0) * np.exp(-x * t) / den(ta)

    def tail(u):
        ua = np.power(u, alpha)
        with np.errstate(divide="ignore", over="ignore"):
            e = np.exp(-x / u)
        return np.power(u, alpha - 1.0) * e / den(ua)

    h = gauss_kronrod(head, 0.0, 1.0, spec)
    t = gauss_kronrod(tail, 0.0, 1.0, spec)
    return EvalResult(h.value + t.value, h.abs_error_estimate + t.abs_error_estimate, h.work + t.work)


def phi(alpha: float, x: float, spec: QuadratureSpec | None = None) -> EvalResult:
    """The completely monotone remainder with E_alpha(x^alpha) = e^x/alpha - phi,
    for 0 < alpha < 1 and x > 0."""
    if not 0 < alpha < 1:
        raise ValueError(f"phi needs 0 < alpha < 1, got {alpha}")
    if not x > 0:
        raise ValueError(f"phi needs x > 0, got {x}")
    spec = spec or QuadratureSpec()
    j = _kernel_integral(alpha, x, cos_pi(alpha), spec)
    scale = sin_pi(alpha) / math.pi
    return EvalResult(scale * j.value, scale * j.abs_error_estimate, j.work)


def psi(alpha: float, x: float, spec: QuadratureSpec | None = None) -> EvalResult:
    """alpha e^(-x) E_alpha(x^alpha) through its integral form, 1 < alpha < 2."""
    if not 1 < alpha < 2:
        raise ValueError(f"psi needs 1 < alpha < 2, got {alpha}")
    if not x > 0:
        raise ValueError(f"psi needs x > 0, got {x}")
    spec = spec or QuadratureSpec()
    j = _kernel_integral(alpha, x, cos_pi(alpha), spec)
    scale = alpha * sin_pi(alpha) / math.pi * math.exp(-x)
    return EvalResult(1.0 - scale * j.value, abs(scale) * j.abs_error_estimate, j.work)


def ml_negative_integral(beta: float, x: float, spec: QuadratureSpec | None = None) -> EvalResult:
    """E_beta(-x^beta) for 0 < beta < 1 from its Stieltjes-type integral."""
    if not 0 < beta < 1:
        raise ValueError(f"needs 0 < beta < 1, got {beta}")
    if not x > 0:
        raise ValueError(f"needs x > 0, got {x}")
    spec = spec or QuadratureSpec()
    j = _kernel_integral(beta, x, -cos_pi(beta), spec)
    scale = sin_pi(beta) / math.pi
    return EvalResult(scale * j.value, scale * j.abs_error_estimate, j.work)


@dataclass(frozen=True)
class ReprComponents:
    """E_alpha(x^alpha) = exp_term - integral_term, alpha in (0,1) or (1,2)."""

    alpha: float
    x: float
    exp_term: float
    integral_term: float
    abs_error_estimate: float

    @property
    def value(self) -> float:
        return self.exp_term - self.integral_term


def representation(alpha: float, x: float, spec: QuadratureSpec | None = None) -> ReprComponents:
    if not (0 < alpha < 1 or 1 < alpha < 2):
        raise ValueError(f"representation needs alpha in (0,1) or (1,2), got {alpha}")
    if not x > 0:
        raise ValueError(f"representation needs x > 0, got {x}")
    spec = spec or QuadratureSpec()
    j = _kernel_integral(alpha, x, cos_pi(alpha), spec)
    scale = sin_pi(alpha) / math.pi
    return ReprComponents(alpha, x, math.exp(x) / alpha, scale * j.value, abs(scale) * j.abs_error_estimate)

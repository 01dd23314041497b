"""Extended binomial theorem for fractional exponents.

For alpha > 0, lambda in (0, 1] and integer k >= 0,

    alpha * sum_j C(alpha k, alpha j) lambda^(alpha j)
        = sum_{w in K_alpha} (1 + lambda w)^(alpha k)
          - (alpha lambda^alpha sin(alpha pi) / pi) * int_0^1 F(t, lambda, k) dt,

where K_alpha is the set of principal alpha-th roots of unity.  This module
evaluates each piece through its own code path and reports the residual,
together with the two semi-infinite integrals (and the small-lambda expansion
of their truncated version) used when floor(alpha) is even.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gamma_core import cos_pi, log_gen_binom, sin_pi
from .quadrature import EvalResult, QuadratureSpec, Substitution, gauss_kronrod

__all__ = [
    "HypothesisError",
    "IdentityReport",
    "RootSet",
    "asympt_check",
    "binom_sum",
    "check_even_floor",
    "f_integral",
    "f_integrand",
    "identity_check",
    "int1_closed",
    "int2_closed",
    "int_quad",
    "root_sum",
    "root_sum_complex",
    "roots",
    "truncated_integral",
]

IMAG_RTOL = 1e-12


class HypothesisError(ValueError):
    """alpha violates 2 < alpha, alpha not an integer, floor(alpha) even."""


def _is_integer(alpha: float) -> bool:
    return float(alpha).is_integer()


def _check_lambda(lam: float) -> None:
    if not 0 < lam <= 1:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")


def _check_k(k: int) -> None:
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k}")


@dataclass(frozen=True)
class RootSet:
    """Principal alpha-th roots of unity, stored by integer index j with
    angle 2 j pi / alpha and -alpha/2 < j <= alpha/2."""

    alpha: float
    indices: tuple[int, ...]

    def angle(self, j: int) -> float:
        return 2.0 * math.pi * j / self.alpha

    @property
    def angles(self) -> list[float]:
        return [self.angle(j) for j in self.indices]

    def omega(self, j: int) -> complex:
        if j == 0:
            return 1.0 + 0.0j
        if 2 * j == self.alpha:
            return -1.0 + 0.0j
        return cmath.exp(1j * self.angle(j))

    def __len__(self) -> int:
        return len(self.indices)


def roots(alpha: float) -> RootSet:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lo = math.floor(-alpha / 2.0) + 1
    hi = math.floor(alpha / 2.0)
    return RootSet(alpha, tuple(range(lo, hi + 1)))


def root_sum_complex(alpha: float, lam: float, k: int) -> complex:
    """sum over K_alpha of (1 + lam w)^(alpha k), principal branch."""
    _check_lambda(lam)
    _check_k(k)
    rs = roots(alpha)
    p = alpha * k
    total = 0j
    for j in rs.indices:
        w = rs.omega(j)
        base = 1.0 + lam * w
        if w.imag == 0.0:
            # real nonnegative base: w = 1, or w = -1 for even integer alpha
            total += base.real**p
        else:
            total += cmath.exp(p * cmath.log(base))
    return total


def root_sum(alpha: float, lam: float, k: int) -> float:
    z = root_sum_complex(alpha, lam, k)
    rs = roots(alpha)
    scale = sum(abs(1.0 + lam * rs.omega(j)) ** (alpha * k) for j in rs.indices)
    if abs(z.imag) > IMAG_RTOL * max(abs(z.real), scale):
        raise ArithmeticError(f"root sum has imaginary part {z.imag:.3e} (real {z.real:.3e})")
    return z.real


def binom_sum(alpha: float, k: int, lam: float) -> float:
    """sum_{j=0}^k C(alpha k, alpha j) lam^(alpha j), with 0**0 = 1."""
    _check_k(k)
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 0:
        return 1.0
    log_lam = math.log(lam)
    terms = [
        math.exp(log_gen_binom(alpha * k, alpha * j, alpha * (k - j)) + alpha * j * log_lam)
        for j in range(k + 1)
    ]
    return math.fsum(terms)


def f_integrand(alpha: float, t, lam: float, k: int):
    """F(t, lambda, k) with both squared moduli expanded as a^2 - 2ab cos(alpha pi) + b^2.

    Accepts a float or a numpy array of t values in (0, 1).
    """
    _check_lambda(lam)
    _check_k(k)
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr <= 0) | (t_arr >= 1)):
        raise ValueError("t must lie in the open interval (0, 1)")
    c = cos_pi(alpha)
    ta = t_arr**alpha
    la = lam**alpha
    d1 = ta * ta - 2.0 * ta * la * c + la * la
    lt = la * ta
    d2 = 1.0 - 2.0 * lt * c + lt * lt
    out = t_arr ** (alpha - 1.0) * (1.0 - t_arr) ** (alpha * k) * (1.0 / d1 + la**k / d2)
    return float(out) if np.ndim(out) == 0 else out


def f_integral(alpha: float, lam: float, k: int, spec: QuadratureSpec | None = None) -> EvalResult:
    """int_0^1 F(t, lambda, k) dt.

    With the default ``power_alpha`` substitution the integral is taken in
    u = t^alpha, which removes the t^(alpha-1) endpoint singularity; the
    near-pole bump of the first term sits around u = lambda^alpha cos(alpha pi)
    and gets explicit breakpoints.
    """
    _check_lambda(lam)
    _check_k(k)
    if _is_integer(alpha) and int(alpha) % 2 == 0:
        raise ValueError(f"F is not integrable for even integer alpha={alpha}")
    spec = spec or QuadratureSpec()
    c = cos_pi(alpha)
    s = abs(sin_pi(alpha))
    la = lam**alpha
    lak = la**k
    ak = alpha * k
    inv = 1.0 / alpha

    if spec.substitution is Substitution.NONE:
        def g(t):
            ta = t**alpha
            d1 = (ta - la * c) ** 2 + (la * s) ** 2
            lt = la * ta
            d2 = (1.0 - lt * c) ** 2 + (lt * s) ** 2
            return t ** (alpha - 1.0) * (1.0 - t) ** ak * (1.0 / d1 + lak / d2)

        centre = lam * max(c, 0.0) ** inv
        bps = [lam, centre]
    else:
        def g(u):
            d1 = (u - la * c) ** 2 + (la * s) ** 2
            lu = la * u
            d2 = (1.0 - lu * c) ** 2 + (lu * s) ** 2
            return inv * (1.0 - u**inv) ** ak * (1.0 / d1 + lak / d2)

        bps = [la, la * c, la * (c - s), la * (c + s)]

    res = gauss_kronrod(g, 0.0, 1.0, spec, breakpoints=bps)
    if not res.value > 0:
        raise ArithmeticError(f"F integral not positive: {res.value}")
    return res


@dataclass(frozen=True)
class IdentityReport:
    alpha: float
    lam: float
    k: int
    lhs: float
    root_sum: float
    root_sum_imag: float
    integral: float
    integral_error: float
    residual: float

    @property
    def scale(self) -> float:
        return abs(self.lhs) + abs(self.root_sum)

    @property
    def rel_residual(self) -> float:
        return abs(self.residual) / self.scale

    @property
    def integral_term(self) -> float:
        return self.alpha * self.lam**self.alpha * sin_pi(self.alpha) / math.pi * self.integral

    def passes(self, rel_tol: float = 1e-7) -> bool:
        return self.rel_residual <= rel_tol


def identity_check(alpha: float, lam: float, k: int, spec: QuadratureSpec | None = None) -> IdentityReport:
    """Residual of the extended binomial identity at one (alpha, lambda, k)."""
    _check_lambda(lam)
    _check_k(k)
    lhs = alpha * binom_sum(alpha, k, lam)
    rs = root_sum_complex(alpha, lam, k)
    scale = abs(lhs) + abs(rs.real)
    if abs(rs.imag) > IMAG_RTOL * scale:
        raise ArithmeticError(f"root sum has imaginary part {rs.imag:.3e}")
    sin_a = sin_pi(alpha)
    if sin_a == 0.0:
        integral, integral_err = 0.0, 0.0
    else:
        res = f_integral(alpha, lam, k, spec)
        integral, integral_err = res.value, res.abs_error_estimate
    coeff = alpha * lam**alpha * sin_a / math.pi
    residual = lhs - rs.real + coeff * integral
    return IdentityReport(alpha, lam, k, lhs, rs.real, rs.imag, integral, integral_err, residual)


# -- semi-infinite integrals for floor(alpha) even --------------------------

def check_even_floor(alpha: float) -> int:
    """Return m = floor(alpha)/2 if alpha > 2 is a non-integer with even floor."""
    if not alpha > 2 or _is_integer(alpha) or math.floor(alpha) % 2:
        raise HypothesisError(f"need 2 < alpha, alpha not an integer, floor(alpha) even; got {alpha}")
    return math.floor(alpha) // 2


def int1_closed(alpha: float) -> float:
    """Closed form of int_0^inf s^alpha / (s^(2a) - 2 s^a cos(a pi) + 1) ds."""
    check_even_floor(alpha)
    fl = math.floor(alpha)
    return (
        math.pi * math.sin((fl + 1) / alpha * math.pi)
        / (alpha * sin_pi(alpha) * math.sin((alpha + 1) / alpha * math.pi))
    )


def int2_closed(alpha: float) -> float:
    """Closed form of int_0^inf s^(alpha-1) / (s^(2a) - 2 s^a cos(a pi) + 1) ds."""
    check_even_floor(alpha)
    return math.pi * (math.ceil(alpha) - alpha) / (alpha * sin_pi(alpha))


def int_quad(alpha: float, which: int, spec: QuadratureSpec | None = None) -> EvalResult:
    """Quadrature for the two integrals after w = s^alpha, split at w = 1 with
    w -> 1/w on the tail."""
    check_even_floor(alpha)
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which}")
    spec = spec or QuadratureSpec()
    c = cos_pi(alpha)
    inv = 1.0 / alpha

    def den(w):
        return w * w - 2.0 * c * w + 1.0

    if which == 2:
        head = gauss_kronrod(lambda w: 1.0 / den(w), 0.0, 1.0, spec)
        return EvalResult(2.0 * inv * head.value, 2.0 * inv * head.abs_error_estimate, head.work)

    head = gauss_kronrod(lambda w: w**inv / den(w), 0.0, 1.0, spec)
    # tail: int_0^1 v^(-1/alpha)/den(v) dv; v = y^q with q = alpha/(alpha-1) removes the singularity
    q = alpha / (alpha - 1.0)
    tail = gauss_kronrod(lambda y: q / den(y**q), 0.0, 1.0, spec)
    return EvalResult(
        inv * (head.value + tail.value),
        inv * (head.abs_error_estimate + tail.abs_error_estimate),
        head.work + tail.work,
    )


def truncated_integral(alpha: float, lam: float, k: int, spec: QuadratureSpec | None = None) -> EvalResult:
    """int_0^(1/lam) s^(alpha-1) (1 - lam s)^(alpha k) / (s^(2a) - 2 s^a cos(a pi) + 1) ds."""
    if not 0 < lam < 1:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    _check_k(k)
    spec = spec or QuadratureSpec()
    c = cos_pi(alpha)
    if 1.0 - c * c <= 1e-14:
        raise ValueError(f"denominator degenerates for alpha={alpha}")
    inv = 1.0 / alpha
    ak = alpha * k

    def den(w):
        return (w - c) ** 2 + (1.0 - c * c)

    head = gauss_kronrod(lambda w: (1.0 - lam * w**inv) ** ak / den(w), 0.0, 1.0, spec)
    lo = lam**alpha

    def tail(v):
        base = np.maximum(1.0 - lam * v**-inv, 0.0)
        return base**ak / den(v)

    bps = [lo * 2.0**i for i in range(1, 64) if lo * 2.0**i < 1.0]
    tl = gauss_kronrod(tail, lo, 1.0, spec, breakpoints=bps)
    return EvalResult(
        inv * (head.value + tl.value),
        inv * (head.abs_error_estimate + tl.abs_error_estimate),
        head.work + tl.work,
    )


def asympt_check(
    alpha: float,
    k: int,
    lambdas: Sequence[float] | Iterable[float],
    spec: QuadratureSpec | None = None,
) -> list[tuple[float, float]]:
    """Scaled remainder of the small-lambda expansion of ``truncated_integral``.

    defect(lam) = [T(lam) - int2 + alpha k lam int1] / lam, which tends to 0.
    """
    check_even_floor(alpha)
    lambdas = list(lambdas)
    if any(not 0 < lam <= 0.1 for lam in lambdas):
        raise ValueError("lambda values must lie in (0, 0.1]")
    if any(b >= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("lambda sequence must be strictly decreasing")
    spec = spec or QuadratureSpec(abs_tol=1e-13)
    i1 = int1_closed(alpha)
    i2 = int2_closed(alpha)
    out = []
    for lam in lambdas:
        t = truncated_integral(alpha, lam, k, spec).value
        out.append((lam, (t - i2 + alpha * k * lam * i1) / lam))
    return out

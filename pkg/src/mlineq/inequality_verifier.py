"""Grid verification of the Mittag-Leffler and fractional binomial inequalities.

Every check returns :class:`InequalityRecord` objects whose ``margin`` is
signed so that a positive value means the claimed inequality holds strictly.
The verdict is a pure function of ``margin`` and the record's ``atol``.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import binomial_identity as bi
from .gamma_core import cos_pi, sin_pi
from .mittag_leffler import X_MAX, ml, ml_deriv, ml_power, phi, psi
from .quadrature import QuadratureSpec

__all__ = [
    "BINOMIAL_KINDS",
    "CM_TARGETS",
    "GridSpec",
    "InequalityRecord",
    "ML_KINDS",
    "SECTION56_KINDS",
    "Verdict",
    "check_binomial",
    "check_cm_probe",
    "check_log_shape",
    "check_logderiv_monotone",
    "check_ml",
    "check_section56",
    "classify",
    "scan",
    "summarize",
]

DEFAULT_ATOL = 1e-10


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"
    ERROR = "error"


def classify(margin: float, atol: float) -> Verdict:
    if not math.isfinite(margin):
        return Verdict.ERROR
    if margin > atol:
        return Verdict.HOLDS
    if margin < -atol:
        return Verdict.FAILS
    return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class InequalityRecord:
    """One evaluated instance of a claimed inequality.

    ``informational`` marks probes of open questions: they carry a verdict
    but make no claim, so they never count as failures.
    """

    check_id: str
    params: dict
    lhs: float
    rhs: float
    margin: float
    atol: float = DEFAULT_ATOL
    err_estimate: float = 0.0
    informational: bool = False
    message: str = ""

    @property
    def verdict(self) -> Verdict:
        return classify(self.margin, self.atol)

    @classmethod
    def error(cls, check_id: str, params: dict, message: str) -> "InequalityRecord":
        nan = float("nan")
        return cls(check_id, dict(params), nan, nan, nan, message=message)


def summarize(records: Iterable[InequalityRecord]) -> Counter:
    return Counter(r.verdict.value for r in records)


# -- binomial inequalities ---------------------------------------------------

BINOMIAL_KINDS = ("nc", "cnc1", "cnc2", "partial_converse", "conjecture")

# kind -> (alpha range predicate, description, factor on the binomial sum, sum should be >= rhs)
_BINOMIAL = {
    "nc": (lambda a: 0 < a < 1, "0 < alpha < 1", lambda a: a, False),
    "cnc1": (lambda a: 0 < a < 1, "0 < alpha < 1", lambda a: 1.0, True),
    "cnc2": (lambda a: a > 1, "alpha > 1", lambda a: 1.0, False),
    "partial_converse": (lambda a: 1 < a <= 2, "1 < alpha <= 2", lambda a: a, True),
    "conjecture": (lambda a: a > 2, "alpha > 2", lambda a: 2.0 ** (a - 1.0), True),
}


def check_binomial(
    kind: str, alpha: float, k: int, x: float, y: float, atol: float = DEFAULT_ATOL
) -> InequalityRecord:
    """Compare factor * sum_j C(alpha k, alpha j) x^(alpha j) y^(alpha(k-j)) with
    (x+y)^(alpha k).

    Both sides are evaluated in the reduced form lambda = min/max, y = 1; the
    margin is normalized by (1 + lambda)^(alpha k) so it does not depend on
    the overall scale of (x, y).  ``lhs``/``rhs`` are reported in the
    original units.
    """
    if kind not in _BINOMIAL:
        raise ValueError(f"unknown binomial kind {kind!r}")
    in_range, desc, factor, sum_is_larger = _BINOMIAL[kind]
    if not in_range(alpha):
        raise ValueError(f"{kind} needs {desc}, got alpha={alpha}")
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k}")
    if x < 0 or y < 0 or (x == 0 and y == 0):
        raise ValueError(f"need x, y >= 0 not both zero, got ({x}, {y})")
    hi, lo = max(x, y), min(x, y)
    lam = lo / hi
    ak = alpha * k
    s = factor(alpha) * bi.binom_sum(alpha, k, lam)
    p = (1.0 + lam) ** ak
    margin = (s - p) / p if sum_is_larger else (p - s) / p
    unit = hi**ak
    params = {"alpha": alpha, "k": k, "x": x, "y": y, "lambda": lam}
    return InequalityRecord(kind, params, s * unit, p * unit, margin, atol, 8 * 2.0**-53 * (k + 1))


# -- Mittag-Leffler inequalities ----------------------------------------------

ML_KINDS = ("upper_ml1", "lower_alpha", "super_ml2")


def check_ml(
    kind: str, alpha: float, x: float, y: float, atol: float = DEFAULT_ATOL, x_max: float = X_MAX
) -> InequalityRecord:
    """E_alpha((x+y)^alpha) against E_alpha(x^alpha) E_alpha(y^alpha).

    alpha = 1 is accepted by every kind; both sides then agree up to rounding.
    """
    if kind in ("upper_ml1", "lower_alpha"):
        if not 0 < alpha <= 1:
            raise ValueError(f"{kind} needs 0 < alpha <= 1, got {alpha}")
    elif kind == "super_ml2":
        if not alpha >= 1:
            raise ValueError(f"{kind} needs alpha >= 1, got {alpha}")
    else:
        raise ValueError(f"unknown ML kind {kind!r}")
    if not (x > 0 and y > 0):
        raise ValueError(f"need x, y > 0, got ({x}, {y})")
    if x + y > x_max:
        raise OverflowError(f"x + y = {x + y} exceeds x_max = {x_max}")
    whole = ml_power(alpha, x + y, x_max=x_max)
    ex = ml_power(alpha, x, x_max=x_max)
    ey = ml_power(alpha, y, x_max=x_max)
    prod = ex.value * ey.value
    err = (
        whole.abs_error_estimate
        + ex.abs_error_estimate * ey.value
        + ey.abs_error_estimate * ex.value
    ) / prod
    params = {"alpha": alpha, "x": x, "y": y}
    if kind == "upper_ml1":
        lhs, rhs = whole.value, prod
        margin = (rhs - lhs) / prod
    elif kind == "lower_alpha":
        lhs, rhs = whole.value, alpha * prod
        margin = (lhs - rhs) / prod
    else:
        lhs, rhs = whole.value, prod
        margin = (lhs - rhs) / prod
    return InequalityRecord(kind, params, lhs, rhs, margin, max(atol, err), err)


# -- shape checks -------------------------------------------------------------

def _rounding_atol(n: int, h: float, fmax: float, err: float) -> float:
    # budget for cancellation in an n-th difference scaled by h^-n
    return max(1e-12 * fmax, 2.0**n * err) / h**n


def check_log_shape(
    alpha: float, x_grid: Sequence[float], h: float = 1e-3, atol: float = DEFAULT_ATOL
) -> list[InequalityRecord]:
    """Second central differences of log E_alpha(x^alpha).

    alpha in (0, 1): margin = -D2 (concavity); alpha in [1, 2]: margin = D2
    (convexity).  For alpha > 2 there is no claim; the records are
    informational, and for alpha = 4 the closed-form second derivative is
    evaluated as well, with a summary record that holds when both signs occur.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    if any(x - h <= 0 for x in x_grid):
        raise ValueError("every grid point must exceed the step h")
    records = []
    concave = alpha < 1
    for x in x_grid:
        vals = [ml_power(alpha, x + d * h) for d in (-1, 0, 1)]
        logs = [math.log(v.value) for v in vals]
        d2 = (logs[0] - 2.0 * logs[1] + logs[2]) / h**2
        err = max(v.abs_error_estimate / v.value for v in vals)
        tol = max(atol, _rounding_atol(2, h, max(abs(v) for v in logs), err))
        margin = -d2 if concave else d2
        if alpha > 2:
            check_id = "logshape_probe"
        else:
            check_id = "logshape_concave" if concave else "logshape_convex"
        records.append(InequalityRecord(
            check_id,
            {"alpha": alpha, "x": x, "h": h}, d2, 0.0, margin, tol, err / h**2,
            informational=alpha > 2,
        ))
    if alpha == 4:
        closed = [
            2.0 * math.sin(x) * math.sinh(x) / (math.cos(x) + math.cosh(x)) ** 2 for x in x_grid
        ]
        for x, c in zip(x_grid, closed):
            records.append(InequalityRecord(
                "logshape_closed_form", {"alpha": alpha, "x": x}, c, 0.0, c, atol, informational=True,
            ))
        pos, neg = max(closed), min(closed)
        records.append(InequalityRecord(
            "logshape_sign_change", {"alpha": alpha}, pos, neg, min(pos, -neg), atol,
        ))
    return records


def check_logderiv_monotone(
    alpha: float, x_grid: Sequence[float], atol: float = DEFAULT_ATOL
) -> InequalityRecord:
    """E_alpha'/E_alpha along an increasing grid: nondecreasing for alpha <= 1,
    nonincreasing for alpha > 1.  The margin is the worst consecutive step."""
    xs = list(x_grid)
    if len(xs) < 2 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("grid must be strictly increasing with at least two points")
    if alpha > 1 and xs[0] < 0:
        raise ValueError("for alpha > 1 the claim is on the positive half-line")
    ratios, errs = [], []
    for x in xs:
        d, m = ml_deriv(alpha, x), ml(alpha, x)
        r = d.value / m.value
        ratios.append(r)
        errs.append(abs(r) * (d.abs_error_estimate / abs(d.value) + m.abs_error_estimate / abs(m.value)))
    steps = [b - a for a, b in zip(ratios, ratios[1:])]
    if alpha > 1:
        steps = [-s for s in steps]
    i = min(range(len(steps)), key=steps.__getitem__)
    err = 2.0 * max(errs)
    check_id = "logderiv_nondecreasing" if alpha <= 1 else "logderiv_nonincreasing"
    params = {"alpha": alpha, "x": xs[i], "x_next": xs[i + 1]}
    return InequalityRecord(check_id, params, ratios[i], ratios[i + 1], steps[i], max(atol, err), err)


CM_TARGETS = ("recip_ml", "phi", "psi")


def check_cm_probe(
    target: str,
    alpha: float,
    n_max: int,
    x_grid: Sequence[float],
    h: float = 0.08,
    atol: float = DEFAULT_ATOL,
    spec: QuadratureSpec | None = None,
) -> list[InequalityRecord]:
    """Sign test (-1)^n backward_diff_h^n f(x) / h^n >= 0 for n = 0..n_max.

    A completely monotone f passes at every order, since the n-th backward
    difference equals h^n f^(n) at an intermediate point.  For recip_ml with
    alpha < 2 the property is an open question and the records are
    informational.
    """
    if target not in CM_TARGETS:
        raise ValueError(f"unknown CM target {target!r}")
    if not 0 <= n_max <= 8:
        raise ValueError(f"n_max must be in 0..8, got {n_max}")
    if not h > 0 or any(x - n_max * h <= 0 for x in x_grid):
        raise ValueError("need h > 0 and x - n_max*h > 0 on the whole grid")
    spec = spec or QuadratureSpec(abs_tol=1e-15, rel_tol=1e-14)
    informational = False
    if target == "recip_ml":
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        informational = alpha < 2

        def f(x):
            e = ml(alpha, x)
            return 1.0 / e.value, e.abs_error_estimate / e.value**2
    elif target == "phi":
        def f(x):
            r = phi(alpha, x, spec)
            return r.value, r.abs_error_estimate
    else:
        def f(x):
            r = psi(alpha, x, spec)
            return r.value, r.abs_error_estimate

    cache: dict[int, tuple[float, float]] = {}
    records = []
    for x in x_grid:
        pts = [x - i * h for i in range(n_max + 1)]
        for i, p in enumerate(pts):
            key = round(p / h * 2**20)
            if key not in cache:
                cache[key] = f(p)
        vals = [cache[round(p / h * 2**20)] for p in pts]
        fmax = max(abs(v) for v, _ in vals)
        emax = max(e for _, e in vals)
        for n in range(n_max + 1):
            diff = math.fsum((-1) ** i * math.comb(n, i) * vals[i][0] for i in range(n + 1))
            scaled = (-1) ** n * diff / h**n
            tol = max(atol, _rounding_atol(n, h, fmax, emax))
            records.append(InequalityRecord(
                f"cm_{target}", {"alpha": alpha, "x": x, "k": n, "h": h},
                scaled, 0.0, scaled, tol, emax * 2**n / h**n, informational=informational,
            ))
    return records


# -- proof-stage inequalities for floor(alpha) even --------------------------

SECTION56_KINDS = (
    "cosine_sum", "big_lambda", "goal3a", "cad_grid", "with_sine",
    "final_goal", "sharp_coeff", "goal3", "goal3_monotone",
)


def _cos_sum_terms(alpha: float, lam: float, m: int) -> list[float]:
    return [1.0 + 2.0 * lam * math.cos(2.0 * j * math.pi / alpha) + lam * lam for j in range(-m, m + 1)]


def sine_quotient(alpha: float) -> float:
    """sin((floor(a)+1) pi / a) / sin((a+1) pi / a)."""
    fl = math.floor(alpha)
    return math.sin((fl + 1) * math.pi / alpha) / math.sin((alpha + 1) * math.pi / alpha)


def goal3_lhs(alpha: float, lam: float, k: int, spec: QuadratureSpec | None = None) -> float:
    """Left-hand side of the small-lambda sufficient condition (should be < 0)."""
    m = bi.check_even_floor(alpha)
    s = math.fsum(
        (1.0 + 2.0 * lam * math.cos(2.0 * j * math.pi / alpha) + lam * lam) ** (alpha * k / 2.0)
        for j in range(1, m + 1)
    )
    t = bi.truncated_integral(alpha, lam, k, spec or QuadratureSpec(abs_tol=1e-13))
    return 2.0 * s + (1.0 - alpha) * (1.0 + lam) ** (alpha * k) - alpha * sin_pi(alpha) / math.pi * t.value


def _cosine_sum(alpha, lambdas, atol):
    m = bi.check_even_floor(alpha)
    out = []
    ratio = math.cos((m + 1) * math.pi / alpha) * math.sin(m * math.pi / alpha) / math.sin(math.pi / alpha)
    for lam in lambdas:
        lhs = math.fsum(_cos_sum_terms(alpha, lam, m))
        rhs = math.ceil(alpha) * (1.0 + lam * lam) + 2.0 * lam * (1.0 + 2.0 * ratio)
        tol = 1e-12 * max(1.0, abs(lhs))
        # equality check: positive margin means |lhs - rhs| is within tolerance
        out.append(InequalityRecord(
            "cosine_sum", {"alpha": alpha, "lambda": lam}, lhs, rhs, tol - abs(lhs - rhs), 0.0,
        ))
    return out


def _big_lambda(alpha, ks, lambdas, atol):
    bi.check_even_floor(alpha)
    out = []
    for k in ks:
        for lam in lambdas:
            if not 0.5 <= lam <= 1:
                raise ValueError(f"big_lambda needs lambda in [1/2, 1], got {lam}")
            rs = bi.root_sum(alpha, lam, k)
            p = (1.0 + lam) ** (alpha * k)
            out.append(InequalityRecord(
                "big_lambda", {"alpha": alpha, "k": k, "lambda": lam}, rs, alpha * p,
                (alpha * p - rs) / p, atol,
            ))
    return out


def _goal3a(alpha, lambdas, atol):
    m = bi.check_even_floor(alpha)
    out = []
    for lam in lambdas:
        if not 0.5 <= lam <= 1:
            raise ValueError(f"goal3a needs lambda in [1/2, 1], got {lam}")
        lhs = math.fsum(_cos_sum_terms(alpha, lam, m))
        rhs = alpha * (1.0 + lam) ** 2
        out.append(InequalityRecord("goal3a", {"alpha": alpha, "lambda": lam}, lhs, rhs, rhs - lhs, atol))
    return out


def _cad_grid(m_values, pitch, atol):
    """Polynomial surrogate inequality on the lattice A = 2M + i*pitch (open
    interval), lambda = 1/2 + j*pitch."""
    n_a = round(1.0 / pitch)
    n_l = round(0.5 / pitch)
    lam = 0.5 + np.arange(n_l + 1) * pitch
    out = []
    for big_m in m_values:
        a = 2 * big_m + np.arange(1, n_a) * pitch
        aa, ll = np.meshgrid(a, lam, indexing="ij")
        u = math.pi / aa
        cos_bound = -1.0 + 0.5 * ((big_m + 1) * u - math.pi) ** 2
        lhs = (aa + 1) * (1 + ll**2) + 2 * ll * (1 + 2 * cos_bound * (big_m * u) / (u - u**3 / 6))
        rhs = aa * (1 + ll) ** 2
        for ai, li, l_, r_ in zip(aa.ravel(), ll.ravel(), lhs.ravel(), rhs.ravel()):
            out.append(InequalityRecord(
                "cad_grid", {"alpha": float(ai), "k": big_m, "lambda": float(li)},
                float(l_), float(r_), float(r_ - l_), atol,
            ))
    return out


def _with_sine(alphas, atol):
    out = []
    for a in alphas:
        bi.check_even_floor(a)
        q = sine_quotient(a)
        out.append(InequalityRecord("with_sine", {"alpha": a}, q, 1.0, 1.0 - q, atol))
    return out


def _final_goal(alphas, atol):
    out = []
    for a in alphas:
        bi.check_even_floor(a)
        expr = 2 * math.floor(a / 3) + 1 - a + sine_quotient(a)
        out.append(InequalityRecord("final_goal", {"alpha": a}, expr, 0.0, -expr, atol))
    return out


def _sharp_coeff(alphas, atol):
    out = []
    for a in alphas:
        m = bi.check_even_floor(a)
        coeff = 2.0 * math.fsum(math.cos(2.0 * j * math.pi / a) for j in range(1, m + 1)) + 1.0 - a + sine_quotient(a)
        out.append(InequalityRecord("sharp_coeff", {"alpha": a}, coeff, 0.0, -coeff, atol))
    return out


def _goal3(alpha, ks, lambdas, atol, spec):
    out = []
    for k in ks:
        for lam in lambdas:
            if not 0 < lam < 0.5:
                raise ValueError(f"goal3 needs lambda in (0, 1/2), got {lam}")
            g = goal3_lhs(alpha, lam, k, spec)
            out.append(InequalityRecord("goal3", {"alpha": alpha, "k": k, "lambda": lam}, g, 0.0, -g, atol))
    return out


def _goal3_monotone(alpha, ks, lambdas, atol, spec):
    lams = sorted(lambdas)
    if any(not 0 < lam < 0.5 for lam in lams) or len(lams) < 2:
        raise ValueError("goal3_monotone needs at least two lambda values in (0, 1/2)")
    out = []
    for k in ks:
        g = [goal3_lhs(alpha, lam, k, spec) for lam in lams]
        for (l0, g0), (l1, g1) in zip(zip(lams, g), zip(lams[1:], g[1:])):
            out.append(InequalityRecord(
                "goal3_monotone", {"alpha": alpha, "k": k, "lambda": l0, "x": l1}, g0, g1, g0 - g1, atol,
            ))
    return out


def check_section56(kind: str, params: dict, atol: float = DEFAULT_ATOL) -> list[InequalityRecord]:
    """Dispatch one proof-stage check.

    ``params`` keys by kind: ``alpha`` (float) or ``alphas`` (list), ``ks``,
    ``lambdas``, and for ``cad_grid`` ``m_values`` and ``pitch``.
    """
    spec = params.get("spec")
    if kind == "cosine_sum":
        return _cosine_sum(params["alpha"], params["lambdas"], atol)
    if kind == "big_lambda":
        return _big_lambda(params["alpha"], params["ks"], params["lambdas"], atol)
    if kind == "goal3a":
        return _goal3a(params["alpha"], params["lambdas"], atol)
    if kind == "cad_grid":
        return _cad_grid(params.get("m_values", range(1, 6)), params.get("pitch", 0.01), atol)
    if kind == "with_sine":
        return _with_sine(params["alphas"], atol)
    if kind == "final_goal":
        return _final_goal(params["alphas"], atol)
    if kind == "sharp_coeff":
        return _sharp_coeff(params["alphas"], atol)
    if kind == "goal3":
        return _goal3(params["alpha"], params["ks"], params["lambdas"], atol, spec)
    if kind == "goal3_monotone":
        return _goal3_monotone(params["alpha"], params["ks"], params["lambdas"], atol, spec)
    raise ValueError(f"unknown proof-stage kind {kind!r}")


# -- grid scans ----------------------------------------------------------------

_SCAN_BINOMIAL = {
    "nc": "nc", "cnc1": "cnc1", "cnc2": "cnc2",
    "partial": "partial_converse", "partial_converse": "partial_converse",
    "conjecture": "conjecture",
}
_SCAN_ML = {"ml1": "upper_ml1", "ml2": "super_ml2", "ml-lower": "lower_alpha"}


@dataclass(frozen=True)
class GridSpec:
    alpha_values: tuple[float, ...]
    k_values: tuple[int, ...] = ()
    lambda_values: tuple[float, ...] = ()
    x_values: tuple[float, ...] = ()
    y_values: tuple[float, ...] = ()
    atol: float = DEFAULT_ATOL

    def __post_init__(self):
        for name in ("alpha_values", "k_values", "lambda_values", "x_values", "y_values"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.alpha_values:
            raise ValueError("alpha_values must be nonempty")
        if any(not 0 < lam <= 1 for lam in self.lambda_values):
            raise ValueError("lambda values must lie in (0, 1]")
        if any(v < 0 for v in self.x_values + self.y_values):
            raise ValueError("x and y values must be nonnegative")
        if not self.atol > 0:
            raise ValueError("atol must be positive")


def _scan_block(check: str, alpha: float, grid: GridSpec) -> list[InequalityRecord]:
    out = []
    if check in _SCAN_BINOMIAL:
        kind = _SCAN_BINOMIAL[check]
        for k in grid.k_values:
            for lam in grid.lambda_values:
                params = {"alpha": alpha, "k": k, "lambda": lam}
                try:
                    out.append(check_binomial(kind, alpha, k, lam, 1.0, grid.atol))
                except (ValueError, ArithmeticError) as exc:
                    out.append(InequalityRecord.error(kind, params, str(exc)))
    else:
        kind = _SCAN_ML[check]
        for x in grid.x_values:
            for y in grid.y_values:
                params = {"alpha": alpha, "x": x, "y": y}
                try:
                    out.append(check_ml(kind, alpha, x, y, grid.atol))
                except (ValueError, ArithmeticError) as exc:
                    out.append(InequalityRecord.error(kind, params, str(exc)))
    return out


def _scan_job(args):
    return _scan_block(*args)


def scan(grid: GridSpec, checks: Sequence[str], jobs: int = 1) -> Iterator[InequalityRecord]:
    """Evaluate ``checks`` over the grid in lexicographic (check, alpha, k or x,
    lambda or y) order.  Per-point domain errors become ``error`` records."""
    for c in checks:
        if c not in _SCAN_BINOMIAL and c not in _SCAN_ML:
            raise ValueError(f"unknown scan check {c!r}")
        if c in _SCAN_BINOMIAL and not (grid.k_values and grid.lambda_values):
            raise ValueError(f"{c} scan needs k and lambda values")
        if c in _SCAN_ML and not (grid.x_values and grid.y_values):
            raise ValueError(f"{c} scan needs x and y values")
    blocks = [(c, a, grid) for c in checks for a in grid.alpha_values]
    if jobs > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for block in pool.map(_scan_job, blocks):
                yield from block
    else:
        for b in blocks:
            yield from _scan_block(*b)

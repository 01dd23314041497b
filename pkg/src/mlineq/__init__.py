"""Numerical verification of neo-classical binomial inequalities and
Mittag-Leffler function inequalities."""

from .binomial_identity import binom_sum, identity_check, root_sum, roots
from .inequality_verifier import InequalityRecord, Verdict, check_binomial, check_ml, scan
from .mittag_leffler import ml, ml_deriv, ml_power, phi, psi
from .quadrature import EvalResult, QuadratureSpec

__all__ = [
    "EvalResult",
    "InequalityRecord",
    "QuadratureSpec",
    "Verdict",
    "binom_sum",
    "check_binomial",
    "check_ml",
    "identity_check",
    "ml",
    "ml_deriv",
    "ml_power",
    "phi",
    "psi",
    "root_sum",
    "roots",
    "scan",
]

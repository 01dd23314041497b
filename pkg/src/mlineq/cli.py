"""Command-line front end.

    mlineq [global flags] {eval,verify,scan,mc} WHAT [options]

Every invocation writes a table of report rows (CSV or JSON lines) and exits
with a code that depends only on the verdicts:

    0  at least one ``holds`` and nothing worse
    1  any ``fails``
    2  usage or domain error, or any ``error`` row
    3  only ``inconclusive`` rows

Rows flagged informational (open-question probes) do not affect the code.
Numeric options accept comma lists and inclusive ranges ``start:stop[:step]``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

from . import binomial_identity as bi
from . import inequality_verifier as iv
from . import mittag_leffler as mlf
from . import stable_mc as mc
from .quadrature import QuadratureSpec

__all__ = ["COLUMNS", "ReportRow", "exit_code", "main", "parse_values", "run"]

COLUMNS = ("check_id", "alpha", "k", "lambda", "x", "y", "h", "lhs", "rhs", "margin", "verdict", "err_estimate")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ReportRow:
    check_id: str
    alpha: float | None = None
    k: int | None = None
    lam: float | None = None
    x: float | None = None
    y: float | None = None
    h: float | None = None
    lhs: float = math.nan
    rhs: float = math.nan
    margin: float = math.nan
    verdict: str = "error"
    err_estimate: float = 0.0
    informational: bool = False

    def __post_init__(self):
        if self.verdict not in {v.value for v in iv.Verdict}:
            raise ValueError(f"bad verdict {self.verdict!r}")
        finite = all(math.isfinite(v) for v in (self.lhs, self.rhs, self.margin, self.err_estimate))
        if not finite and self.verdict != "error":
            raise ValueError("non-finite report fields require verdict=error")

    @classmethod
    def from_record(cls, r: iv.InequalityRecord) -> "ReportRow":
        p = r.params
        k = p.get("k")
        return cls(
            r.check_id, p.get("alpha"), None if k is None else int(k), p.get("lambda"),
            p.get("x"), p.get("y", p.get("x_next")), p.get("h"),
            r.lhs, r.rhs, r.margin, r.verdict.value, r.err_estimate, r.informational,
        )

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d.pop("informational")
        return {c: d[c] for c in COLUMNS}


def exit_code(verdicts: Iterable[str]) -> int:
    seen = set(verdicts)
    if "fails" in seen:
        return 1
    if "error" in seen:
        return 2
    if "holds" in seen or not seen:
        return 0
    return 3


# -- value parsing -------------------------------------------------------------

def _num(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"malformed number {text!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"non-finite number {text!r}")
    return v


def _tidy(v: float) -> float:
    # 0.1*3 -> 0.3; keeps printed grids free of representation noise
    return float(f"{v:.12g}")


def parse_values(text: str) -> list[float]:
    """``"0.1,0.5"`` -> [0.1, 0.5]; ``"1:2:0.5"`` -> [1, 1.5, 2]; ``"1:3"`` -> [1, 2, 3].

    The stop of a range is included when it lies within half a step of the
    last grid point.
    """
    out: list[float] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise UsageError(f"empty item in {text!r}")
        parts = item.split(":")
        if len(parts) == 1:
            out.append(_num(parts[0]))
            continue
        if len(parts) > 3:
            raise UsageError(f"malformed range {item!r}")
        start, stop = _num(parts[0]), _num(parts[1])
        step = _num(parts[2]) if len(parts) == 3 else 1.0
        if not step > 0 or stop < start:
            raise UsageError(f"range {item!r} needs step > 0 and stop >= start")
        n = math.floor((stop - start) / step + 0.5)
        out.extend(_tidy(start + i * step) for i in range(n + 1))
    return out


def parse_ints(text: str) -> list[int]:
    vals = parse_values(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _values(text):
    try:
        return parse_values(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ints(text):
    try:
        return parse_ints(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- subcommands -----------------------------------------------------------------

def _spec(args) -> QuadratureSpec | None:
    return QuadratureSpec(abs_tol=args.quad_tol) if args.quad_tol is not None else None


def _eval_row(what: str, res, **coords) -> ReportRow:
    v = float(res)
    err = getattr(res, "abs_error_estimate", 0.0)
    return ReportRow(what, lhs=v, rhs=v, margin=0.0, verdict="holds", err_estimate=err, **coords)


def cmd_eval(args) -> list[ReportRow]:
    spec = _spec(args)
    rows = []
    w = args.what
    for a in args.alpha:
        if w in ("ml", "ml-power", "ml-deriv", "phi", "psi"):
            fn = {
                "ml": mlf.ml,
                "ml-power": mlf.ml_power,
                "ml-deriv": mlf.ml_deriv,
                "phi": lambda a, x: mlf.phi(a, x, spec),
                "psi": lambda a, x: mlf.psi(a, x, spec),
            }[w]
            rows += [_eval_row(w, fn(a, x), alpha=a, x=x) for x in _need(args, "x")]
        elif w in ("binom-sum", "root-sum"):
            for k in _need(args, "k"):
                for lam in _need(args, "lam"):
                    v = bi.binom_sum(a, k, lam) if w == "binom-sum" else bi.root_sum(a, lam, k)
                    rows.append(_eval_row(w, v, alpha=a, k=k, lam=lam))
        else:
            closed = bi.int1_closed if w == "int1" else bi.int2_closed
            rows.append(_eval_row(w, closed(a), alpha=a))
    return rows


def cmd_verify(args) -> list[ReportRow]:
    spec = _spec(args)
    rows = []
    w = args.what
    for a in args.alpha:
        if w == "identity":
            for k in _need(args, "k"):
                for lam in _need(args, "lam"):
                    r = bi.identity_check(a, lam, k, spec)
                    coeff = abs(r.integral_term / r.integral) if r.integral else 0.0
                    rows.append(ReportRow(
                        "identity", a, k, lam, lhs=r.lhs, rhs=r.root_sum - r.integral_term,
                        margin=args.rtol - r.rel_residual,
                        verdict=iv.classify(args.rtol - r.rel_residual, 0.0).value,
                        err_estimate=coeff * r.integral_error,
                    ))
        elif w == "integrals":
            for which, closed in ((1, bi.int1_closed), (2, bi.int2_closed)):
                q = bi.int_quad(a, which, spec)
                c = closed(a)
                margin = args.rtol * abs(c) - abs(q.value - c)
                rows.append(ReportRow(
                    f"int{which}", a, lhs=q.value, rhs=c, margin=margin,
                    verdict=iv.classify(margin, 0.0).value, err_estimate=q.abs_error_estimate,
                ))
        else:
            lams = args.lam or [0.1, 0.01, 0.001]
            for k in args.k or [1]:
                defects = bi.asympt_check(a, k, lams, spec)
                for (l0, d0), (l1, d1) in zip(defects, defects[1:]):
                    margin = abs(d0) - abs(d1)
                    rows.append(ReportRow(
                        "asympt_decreasing", a, k, l1, x=l0, lhs=abs(d1), rhs=abs(d0), margin=margin,
                        verdict=iv.classify(margin, args.atol).value,
                    ))
    return rows


_DEFAULT_LAMBDAS = "0.05:1:0.05"
_DEFAULT_KS = "1:10"


def cmd_scan(args) -> list[ReportRow]:
    w = args.what
    atol = args.atol
    recs: list[iv.InequalityRecord] = []
    if w in ("nc", "cnc1", "cnc2", "partial", "conjecture"):
        grid = iv.GridSpec(
            tuple(args.alpha), tuple(args.k or parse_ints(_DEFAULT_KS)),
            tuple(args.lam or parse_values(_DEFAULT_LAMBDAS)), atol=atol,
        )
        recs = list(iv.scan(grid, [w], jobs=args.jobs))
    elif w in ("ml1", "ml2", "ml-lower"):
        xs = args.x or parse_values("0.5:5:0.5")
        ys = args.y or xs
        grid = iv.GridSpec(tuple(args.alpha), x_values=tuple(xs), y_values=tuple(ys), atol=atol)
        recs = list(iv.scan(grid, [w], jobs=args.jobs))
    elif w == "logshape":
        xs = args.x or parse_values("0.25:4:0.25")
        for a in args.alpha:
            recs += iv.check_log_shape(a, xs, h=args.h or 1e-3, atol=atol)
    elif w == "logderiv":
        xs = args.x or parse_values("0.25:4:0.25")
        for a in args.alpha:
            recs.append(iv.check_logderiv_monotone(a, xs, atol=atol))
    elif w == "cm":
        xs = args.x or parse_values("0.5:5:0.25")
        spec = _spec(args)
        extra = {"spec": spec} if spec else {}
        for a in args.alpha:
            recs += iv.check_cm_probe(
                args.target.replace("-", "_"), a, args.n_max, xs, h=args.h or 0.08, atol=atol, **extra
            )
    else:
        recs = _proof_stage(args)
    return [ReportRow.from_record(r) for r in recs]


def _proof_stage(args) -> list[iv.InequalityRecord]:
    kind = args.kind.replace("-", "_")
    lams = args.lam or parse_values("0.1:1:0.1")
    ks = args.k or parse_ints("1:5")
    base = {"ks": ks, "lambdas": lams, "spec": _spec(args)}
    if kind in ("with_sine", "final_goal", "sharp_coeff"):
        return iv.check_section56(kind, {**base, "alphas": args.alpha}, args.atol)
    if kind == "cad_grid":
        params = {"m_values": args.m or range(1, 6), "pitch": args.pitch}
        return iv.check_section56(kind, params, args.atol)
    recs = []
    for a in args.alpha:
        recs += iv.check_section56(kind, {**base, "alpha": a}, args.atol)
    return recs


def cmd_mc(args) -> list[ReportRow]:
    rows = []
    w = args.what
    n, seed, jobs = args.n, args.seed, args.jobs

    def z_row(check, s: mc.MCSummary, **coords):
        margin = 4.0 - abs(s.z_score)
        return ReportRow(check, lhs=s.mean, rhs=s.target, margin=margin,
                         verdict=iv.classify(margin, 0.0).value, err_estimate=s.stderr, **coords)

    for a in args.alpha:
        if w == "represent":
            for x in _need(args, "x"):
                rows.append(z_row("mc_represent", mc.mc_ml_estimate(a, x, n, seed, jobs), alpha=a, x=x))
        elif w == "laplace":
            for lam in args.lam or [0.5, 1.0, 2.0]:
                rows.append(z_row("mc_laplace", mc.mc_laplace(a, lam, n, seed, jobs), alpha=a, lam=lam))
        else:
            for x in _need(args, "x"):
                for y in args.y or [x]:
                    r = mc.mc_superadditivity(a, x, y, n, seed, args.t, jobs)
                    margin = min(3.0 * se - v for v, se in zip(r.violation, r.stderr))
                    rows.append(ReportRow(
                        "mc_dominance", a, x=x, y=y, lhs=r.max_violation, rhs=r.binomial_stderr_bound,
                        margin=margin, verdict=iv.classify(margin, 0.0).value,
                    ))
                    se = math.hypot(r.product_stderr, r.direct_stderr)
                    rows.append(ReportRow(
                        "mc_dominance_means", a, x=x, y=y, lhs=r.product_mean, rhs=r.direct_mean,
                        margin=r.consequence_margin, verdict=iv.classify(r.consequence_margin, 0.0).value,
                        err_estimate=se,
                    ))
    return rows


def _needs_alpha(args) -> bool:
    return not (args.command == "scan" and args.what == "section56" and args.kind.replace("-", "_") == "cad_grid")


def _need(args, name):
    v = getattr(args, name)
    if not v:
        flag = "--lambda" if name == "lam" else f"--{name}"
        raise UsageError(f"{args.command} {args.what} needs {flag}")
    return v


# -- parser ------------------------------------------------------------------------

_GLOBAL_DEFAULTS = {"format": "csv", "out": None, "atol": iv.DEFAULT_ATOL, "quad_tol": None, "seed": 12345, "jobs": 1}


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    S = argparse.SUPPRESS
    g.add_argument("--format", choices=("csv", "jsonl"), default=S, help="report format (default csv)")
    g.add_argument("--out", default=S, help="write the report here instead of stdout")
    g.add_argument("--atol", type=float, default=S, help="verdict tolerance (default 1e-10)")
    g.add_argument("--quad-tol", type=float, default=S, help="absolute quadrature tolerance")
    g.add_argument("--seed", type=int, default=S, help="Monte Carlo seed (default 12345)")
    g.add_argument("--jobs", type=int, default=S, help="parallel workers (default 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="mlineq", description=__doc__.split("\n\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(name, choices, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("what", choices=choices)
        p.add_argument("--alpha", type=_values, help="required except for scan section56 --kind cad_grid")
        p.add_argument("--k", type=_ints)
        p.add_argument("--lambda", dest="lam", type=_values)
        p.add_argument("--x", type=_values)
        p.add_argument("--y", type=_values)
        return p

    leaf("eval", ("ml", "ml-power", "ml-deriv", "phi", "psi", "binom-sum", "root-sum", "int1", "int2"),
         "evaluate a function")
    v = leaf("verify", ("identity", "integrals", "asympt"), "check an identity or closed form")
    v.add_argument("--rtol", type=float, default=None, help="relative tolerance (identity 1e-7, integrals 1e-8)")
    s = leaf("scan", ("nc", "cnc1", "cnc2", "partial", "conjecture", "ml1", "ml2", "ml-lower",
                      "logshape", "logderiv", "cm", "section56"), "scan an inequality over a grid")
    s.add_argument("--h", type=float, help="difference step (logshape 1e-3, cm 0.08)")
    s.add_argument("--target", choices=("recip-ml", "phi", "psi"), default="recip-ml", help="cm target")
    s.add_argument("--n-max", type=int, default=6, help="highest cm difference order")
    s.add_argument("--kind", default="cosine_sum", choices=(
        "cosine_sum", "big_lambda", "goal3a", "cad_grid", "with_sine", "final_goal",
        "sharp_coeff", "goal3", "goal3_monotone"), help="proof-stage check for the section56 scan")
    s.add_argument("--m", type=_ints, help="cad_grid M values")
    s.add_argument("--pitch", type=float, default=0.01, help="cad_grid lattice pitch")
    m = leaf("mc", ("represent", "dominance", "laplace"), "Monte Carlo checks")
    m.add_argument("--n", type=int, default=200_000, help="sample size")
    m.add_argument("--t", type=_values, help="dominance t grid")
    return parser


_COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "scan": cmd_scan, "mc": cmd_mc}


def format_rows(rows: Sequence[ReportRow], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "jsonl":
        for r in rows:
            d = {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in r.as_dict().items()}
            buf.write(json.dumps(d) + "\n")
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in r.as_dict().values()])
    return buf.getvalue()


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    for key, val in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    if args.command == "verify" and args.rtol is None:
        args.rtol = 1e-7 if args.what == "identity" else 1e-8
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if args.quad_tol is not None and not args.quad_tol > 0:
            raise UsageError("--quad-tol must be positive")
        if not args.atol >= 0:
            raise UsageError("--atol must be nonnegative")
        if _needs_alpha(args):
            _need(args, "alpha")
        rows = _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError) as exc:
        print(f"mlineq: error: {exc}", file=sys.stderr)
        return 2
    text = format_rows(rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(r.verdict for r in rows if not r.informational)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

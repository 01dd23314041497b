"""Binomial inequality scans: the proved inequalities and the open conjecture.

Writes all verdict rows to CSV and prints a verdict count per check.
"""

import argparse
from collections import Counter
from dataclasses import dataclass, field

from mlineq.cli import ReportRow, format_rows
from mlineq.inequality_verifier import GridSpec, scan


def _fine_lambdas():
    return tuple(round(0.05 * i, 10) for i in range(1, 21))


@dataclass
class ScanConfig:
    small_alphas: tuple[float, ...] = tuple(round(0.1 * i, 10) for i in range(1, 10))
    large_alphas: tuple[float, ...] = tuple(
        a for a in (round(1.1 + 0.1 * i, 10) for i in range(59)) if abs(a - round(a)) > 1e-9
    )
    conjecture_alphas: tuple[float, ...] = (2.2, 3.0, 4.5, 6.6)
    ks: tuple[int, ...] = tuple(range(1, 11))
    lambdas: tuple[float, ...] = field(default_factory=_fine_lambdas)
    jobs: int = 1
    out: str = "theorem_scans.csv"


def run(cfg: ScanConfig) -> list[ReportRow]:
    records = list(scan(GridSpec(cfg.small_alphas, cfg.ks, cfg.lambdas), ["nc", "cnc1"], cfg.jobs))
    records += scan(GridSpec(cfg.large_alphas, cfg.ks, cfg.lambdas), ["cnc2"], cfg.jobs)
    records += scan(GridSpec(cfg.conjecture_alphas, cfg.ks[:8], cfg.lambdas), ["conjecture"], cfg.jobs)
    return [ReportRow.from_record(r) for r in records]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=ScanConfig.out)
    p.add_argument("--jobs", type=int, default=1)
    a = p.parse_args()
    cfg = ScanConfig(jobs=a.jobs, out=a.out)
    rows = run(cfg)
    with open(cfg.out, "w") as fh:
        fh.write(format_rows(rows, "csv"))
    counts = Counter((r.check_id, r.verdict) for r in rows)
    for (check, verdict), n in sorted(counts.items()):
        print(f"{check:12s} {verdict:13s} {n}")
    print(f"-> {cfg.out}")


if __name__ == "__main__":
    main()

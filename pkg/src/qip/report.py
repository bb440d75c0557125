"""Run reports and the benchmark metrics (RPD, success counts, extreme values)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import QipInstance


@dataclass
class RunReport:
    instance_name: str
    algorithm: str
    seed: int
    ofv: int
    tb: float
    rounds: int
    feasible: bool
    moves: int = 0
    history: list[tuple[float, int]] = field(default_factory=list, repr=False)

    FIELDS = ("instance", "algorithm", "seed", "OFV", "TB", "rounds", "moves", "feasible")

    def row(self, timing: bool = True) -> list:
        tb = f"{self.tb:.6f}" if timing else ""
        return [self.instance_name, self.algorithm, self.seed, self.ofv, tb, self.rounds, self.moves,
                str(self.feasible).lower()]


def rpd(bfs: int, ofv: int) -> float:
    """Relative percentage deviation ``100 * (bfs - ofv) / bfs``."""
    if bfs <= 0:
        raise ValueError("best found solution must be positive")
    return float(Fraction(100 * (bfs - ofv), bfs))


def extreme_value_stats(instance: QipInstance, x) -> tuple[float, float, float]:
    """Percentages of variables at zero, at their upper bound, and strictly inside.

    Variables with ``u_i == 0`` count as at the upper bound.
    """
    x = np.asarray(x, dtype=np.int64)
    n = instance.n
    upper = x == instance.u
    zero = (x == 0) & ~upper
    interior = ~(upper | zero)
    scale = 100.0 / n
    return (float(zero.sum()) * scale, float(upper.sum()) * scale, float(interior.sum()) * scale)


@dataclass
class BenchSummary:
    """Per-run records of a batch plus batch-level best values."""

    reports: list[RunReport]
    bfs: dict[str, int] = field(init=False)
    best_per_alg: dict[tuple[str, str], int] = field(init=False)

    COLUMNS = ("instance", "algorithm", "run", "seed", "OFV", "RPD", "TB", "success")

    def __post_init__(self):
        self.bfs = {}
        self.best_per_alg = {}
        for r in self.reports:
            self.bfs[r.instance_name] = max(self.bfs.get(r.instance_name, r.ofv), r.ofv)
            key = (r.instance_name, r.algorithm)
            self.best_per_alg[key] = max(self.best_per_alg.get(key, r.ofv), r.ofv)

    def rpd_of(self, report: RunReport) -> float:
        return rpd(self.bfs[report.instance_name], report.ofv)

    def success(self, report: RunReport) -> bool:
        return report.ofv == self.best_per_alg[(report.instance_name, report.algorithm)]

    def success_counts(self) -> dict[tuple[str, str], int]:
        counts: dict[tuple[str, str], int] = {}
        for r in self.reports:
            key = (r.instance_name, r.algorithm)
            counts[key] = counts.get(key, 0) + int(self.success(r))
        return counts

    def averages(self) -> dict[tuple[str, str], tuple[float, float]]:
        """Mean RPD and mean TB per (instance, algorithm)."""
        acc: dict[tuple[str, str], list] = {}
        for r in self.reports:
            acc.setdefault((r.instance_name, r.algorithm), []).append((self.rpd_of(r), r.tb))
        return {k: (float(np.mean([a for a, _ in v])), float(np.mean([b for _, b in v]))) for k, v in acc.items()}

    def to_csv(self, timing: bool = True) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.COLUMNS)
        runs: dict[tuple[str, str], int] = {}
        rows = []
        for r in self.reports:
            key = (r.instance_name, r.algorithm)
            run = runs.get(key, 0)
            runs[key] = run + 1
            rows.append((r.instance_name, r.algorithm, run, r))
        rows.sort(key=lambda t: (t[0], t[1], t[2]))
        for name, alg, run, r in rows:
            tb = f"{r.tb:.6f}" if timing else ""
            writer.writerow([name, alg, run, r.seed, r.ofv, f"{self.rpd_of(r):.6f}", tb,
                             str(self.success(r)).lower()])
        return out.getvalue()

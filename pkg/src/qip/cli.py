"""Command-line front end: ``qip {generate,solve,check,bench,oracle,stats}``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from .fileformat import FormatError, read_instance, read_solution, write_instance, write_solution
from .generate import GeneratorConfig, generate
from .local_search import is_one_opt_local_optimum, run_one_opt
from .model import InstanceError, SearchState, is_feasible
from .oracle import BudgetExceeded, EnumerationBudget, brute_force_global, check_local_optimality_by_enumeration
from .report import BenchSummary, RunReport, extreme_value_stats
from .tabu import TsosConfig, tsos

log = logging.getLogger("qip")

ALGORITHMS = ("1opt", "tsos")


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def run_algorithm(instance, alg: str, seed: int, rounds=None, time_limit=None, tenure=None):
    """Run one solver and return ``(x, RunReport)``."""
    if alg == "1opt":
        state, report = run_one_opt(instance, seed)
        return state.x, report
    if rounds is None and time_limit is None:
        raise CliError("tsos needs --rounds or --time-limit")
    incumbent, report = tsos(instance, TsosConfig(tenure=tenure, time_limit=time_limit, round_limit=rounds, seed=seed))
    return incumbent.x_star, report


def _report_csv(reports: list[RunReport], timing: bool) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RunReport.FIELDS)
    for r in reports:
        writer.writerow(r.row(timing))
    return out.getvalue()


def _emit(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_generate(args) -> int:
    config = GeneratorConfig(
        family=args.family,
        n=args.n,
        constrained=not args.unconstrained,
        c=args.c,
        tightness=args.tightness,
        seed=args.seed,
        rhs_basis={"max": "max_consumption", "sum": "coefficient_sum"}[args.rhs_basis],
    )
    instance = generate(config)
    out = Path(args.out)
    if out.is_dir() or str(args.out).endswith("/"):
        out.mkdir(parents=True, exist_ok=True)
        out = out / f"{config.name}.qip"
    write_instance(instance, out)
    print(out)
    return 0


def cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    x, report = run_algorithm(instance, args.alg, args.seed, args.rounds, args.time_limit, args.tenure)
    out = args.out or f"{instance.name}.{args.alg}.sol"
    write_solution(instance, x, out)
    _emit(_report_csv([report], timing=not args.no_timing), args.report)
    return 0


def cmd_check(args) -> int:
    instance = read_instance(args.instance)
    _, x, f = read_solution(args.solution, instance)
    feasible = is_feasible(instance, x)
    local = False
    if feasible:
        local = is_one_opt_local_optimum(SearchState.from_point(instance, x))
        if args.enumerate:
            local = local and check_local_optimality_by_enumeration(instance, x)
    print(f"objective={f} feasible={str(feasible).lower()} local_opt={str(local).lower()}")
    return 0 if feasible and local else 1


def cmd_bench(args) -> int:
    reports = []
    for path in args.instance:
        instance = read_instance(path)
        for alg in args.alg or ALGORITHMS:
            for run in range(args.runs):
                seed = args.seed + run
                log.info("%s %s run %d seed %d", instance.name, alg, run, seed)
                _, report = run_algorithm(instance, alg, seed, args.rounds, args.time_limit, args.tenure)
                reports.append(report)
    summary = BenchSummary(reports)
    _emit(summary.to_csv(timing=not args.no_timing), args.out)
    return 0


def cmd_oracle(args) -> int:
    instance = read_instance(args.instance)
    x, f = brute_force_global(instance, EnumerationBudget(args.budget))
    print(f"objective={f}")
    print(" ".join(str(int(v)) for v in x))
    if args.out:
        write_solution(instance, x, args.out)
    return 0


def cmd_stats(args) -> int:
    instance = read_instance(args.instance)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("solution", "pct_zero", "pct_upper", "pct_interior", "pct_extreme"))
    for path in args.solution:
        _, x, _ = read_solution(path, instance)
        zero, upper, interior = extreme_value_stats(instance, x)
        writer.writerow((path, f"{zero:.2f}", f"{upper:.2f}", f"{interior:.2f}", f"{zero + upper:.2f}"))
    sys.stdout.write(out.getvalue())
    return 0


def _add_budget(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--time-limit", type=float, metavar="SECS", help="wall-clock limit for tsos")
    group.add_argument("--rounds", type=int, metavar="N", help="destruction rounds for tsos (reproducible)")
    p.add_argument("--tenure", type=int, help="tabu tenure (default 10 + n // 1000)")
    p.add_argument("--no-timing", action="store_true", help="leave the TB column empty for byte-stable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qip", description="Local search for quadratic integer programs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--family", type=int, choices=range(1, 6), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--unconstrained", action="store_true")
    p.add_argument("--c", type=float, choices=(0.2, 0.5), default=0.2)
    p.add_argument("--tightness", choices=("e", "d", "h"), default="e")
    p.add_argument("--rhs-basis", choices=("max", "sum"), default="max")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="./", help="file path, or directory for an auto-named file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run a solver on an instance")
    p.add_argument("--alg", choices=ALGORITHMS, required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="solution file (default <name>.<alg>.sol)")
    p.add_argument("--report", help="CSV report path (default stdout)")
    _add_budget(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify a solution file")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--enumerate", action="store_true", help="also confirm local optimality by enumeration")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="repeated seeded runs with RPD summary")
    p.add_argument("--instance", nargs="+", required=True)
    p.add_argument("--alg", choices=ALGORITHMS, action="append")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="run r uses seed + r")
    p.add_argument("--out", help="CSV path (default stdout)")
    _add_budget(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exact optimum by enumeration")
    p.add_argument("--instance", required=True)
    p.add_argument("--budget", type=int, default=EnumerationBudget.max_points)
    p.add_argument("--out", help="write the optimum as a solution file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("stats", help="extreme-value breakdown of solutions")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", nargs="+", required=True)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "runs", 1) < 1:
        print("qip: error: --runs must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"qip: {exc}; use property tests instead", file=sys.stderr)
        return 3
    except CliError as exc:
        print(f"qip: {exc}", file=sys.stderr)
        return exc.code
    except (FormatError, InstanceError, FileNotFoundError, ValueError) as exc:
        print(f"qip: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

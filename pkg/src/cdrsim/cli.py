"""Command line entry point.

Subcommands::

    cdrsim two-user-sweep      mean per-user rates versus the prioritizing factor
    cdrsim multi-user-compare  mean session throughput of every scheduler
    cdrsim validate            closed forms, kernels and schedulers against oracles

Exit codes: 0 success, 1 usage error, 2 validation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import kernels, validate
from .scheduler import SchedulerKind
from .session import DEFAULT_LAMBDA_GRID, SessionConfig, lambda_sweep, run_monte_carlo

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2

SWEEP_COLUMNS = ["lambda", "scheme", "rate_relayed_mean", "rate_direct_mean", "sum_mean", "std_err"]
COMPARE_COLUMNS = ["scheduler", "k", "pu", "lambda", "snr_db", "mean_throughput", "std_err", "sessions"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad lambda grid {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty lambda grid")
    bad = [v for v in values if not -1.0 < v < 1.0]
    if bad:
        raise argparse.ArgumentTypeError(f"lambda values outside (-1, 1): {bad}")
    return values


def _add_common(p: argparse.ArgumentParser, sessions: int) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sessions", type=int, default=sessions,
                   help="Monte Carlo sample count (sessions, or draws for the sweep)")
    p.add_argument("--noise-db", type=float, default=10.0, dest="snr_db",
                   help="average link SNR 1/n in dB (default 10)")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--backend", choices=kernels.available_backends(), default=kernels.get_backend())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cdrsim", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sweep = sub.add_parser("two-user-sweep", help="per-user rates versus lambda (k = 1)")
    _add_common(sweep, 10_000)
    sweep.add_argument("--grid", type=_grid, default=list(DEFAULT_LAMBDA_GRID),
                       help="comma separated lambda values in (-1, 1)")

    compare = sub.add_parser("multi-user-compare", help="session throughput per scheduler")
    _add_common(compare, 10_000)
    compare.add_argument("--k", type=int, default=10, help="users per side")
    compare.add_argument("--pu", type=float, default=0.5, help="uplink probability")
    compare.add_argument("--lambda", type=float, default=0.0, dest="lam")
    compare.add_argument("--scheduler", action="append", choices=[s.value for s in SchedulerKind],
                         help="restrict to these disciplines (repeatable); default all")
    compare.add_argument("--workers", type=int, default=1)

    check = sub.add_parser("validate", help="run the oracle self-checks")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--draws", type=int, default=10_000)
    return parser


def _check_writable(path: str) -> None:
    if path == "-":
        return
    target = os.path.dirname(os.path.abspath(path))
    if os.path.isdir(path) or not os.path.isdir(target) or not os.access(target, os.W_OK):
        raise UsageError(f"cannot write output file {path!r}")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise UsageError(f"cannot write output file {path!r}")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
    else:
        for row in rows:
            buf.write(json.dumps({c: row[c] for c in columns}) + "\n")
    return buf.getvalue()


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write output file {path!r}: {exc}") from exc


def run_two_user_sweep(args) -> int:
    _check_writable(args.out)
    base = SessionConfig.from_snr_db(args.snr_db, k=1, sessions=args.sessions, seed=args.seed)
    rows = lambda_sweep(base, args.grid)
    _emit(render(rows, SWEEP_COLUMNS, args.format), args.out)
    return EXIT_OK


def run_multi_user_compare(args) -> int:
    _check_writable(args.out)
    kinds = [SchedulerKind(s) for s in args.scheduler] if args.scheduler else list(SchedulerKind)
    configs = [
        SessionConfig.from_snr_db(args.snr_db, k=args.k, p_u=args.pu, lam=args.lam,
                                  scheduler=kind, sessions=args.sessions, seed=args.seed)
        for kind in kinds
    ]
    rows = []
    for cfg in configs:
        stats = run_monte_carlo(cfg, workers=args.workers)
        rows.append({
            "scheduler": cfg.scheduler.value,
            "k": cfg.k,
            "pu": cfg.p_u,
            "lambda": cfg.lam,
            "snr_db": args.snr_db,
            "mean_throughput": stats.mean_throughput,
            "std_err": stats.std_error,
            "sessions": stats.sessions,
        })
    _emit(render(rows, COMPARE_COLUMNS, args.format), args.out)
    return EXIT_OK


def run_validate(args) -> int:
    start = time.perf_counter()
    results = validate.run_checks(draws=args.draws, seed=args.seed)
    for r in results:
        print(r.line())
    ok = validate.summarize(results)
    failed = [r.name for r in results if not r.passed]
    elapsed = time.perf_counter() - start
    if ok:
        print(f"all {len(results)} checks passed in {elapsed:.1f} s")
        return EXIT_OK
    print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
    return EXIT_VALIDATION


_COMMANDS = {
    "two-user-sweep": run_two_user_sweep,
    "multi-user-compare": run_multi_user_compare,
    "validate": run_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "sessions", 1) < 1 or getattr(args, "draws", 1) < 1:
        parser.error("sample counts must be positive")
    if hasattr(args, "backend"):
        kernels.set_backend(args.backend)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"cdrsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Compare the compiled and numpy rate kernels.

Times ``scheme_rates`` over batches of two-user draws, the k x k pair table
the schedulers use every frame, and a short exhaustive-search Monte Carlo
run, once per available backend. Results go to stdout as CSV.

    python3 benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import csv
import sys
import timeit

from cdrsim import kernels
from cdrsim.channel import draw_network, draw_pairs, make_rng
from cdrsim.scheduler import SchedulerKind
from cdrsim.session import SessionConfig, run_monte_carlo


def _best(stmt, repeat, number=1):
    return min(timeit.repeat(stmt, repeat=repeat, number=number)) / number


def cases(sizes, k, sessions):
    n = 0.1
    for size in sizes:
        h = draw_pairs(size, n, make_rng(0))
        yield f"scheme_rates n={size}", lambda b, h=h: kernels.scheme_rates(*h, n, backend=b), max(1, 10**5 // size)
    state = draw_network(k, n, make_rng(1))
    yield f"pair_table k={k}", lambda b: kernels.pair_table(state, backend=b), 200
    cfg = SessionConfig(k=k, n=n, sessions=sessions, scheduler=SchedulerKind.EXHAUSTIVE)

    def mc(b):
        prev = kernels.set_backend(b)
        try:
            run_monte_carlo(cfg)
        finally:
            kernels.set_backend(prev)
    yield f"exhaustive sessions={sessions} k={k}", mc, 1


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sizes", type=int, nargs="+", default=[100, 10_000, 1_000_000])
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--sessions", type=int, default=200)
    args = p.parse_args(argv)

    backends = kernels.available_backends()
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["case"] + [f"{b}_s" for b in backends] + (["python_over_cython"] if len(backends) > 1 else []))
    for name, fn, number in cases(args.sizes, args.k, args.sessions):
        times = [_best(lambda: fn(b), args.repeat, number) for b in backends]
        row = [name] + [f"{t:.3e}" for t in times]
        if len(times) > 1:
            row.append(f"{times[-1] / times[0]:.2f}")
        writer.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()

"""Command line entry point: ``desolve solve|tune|bench``."""

import argparse
import json
import sys

import numpy as np

from . import bench
from .errors import DesolveError, NumericError, TuningFailure
from .problems import get_problem

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _parser():
    p = argparse.ArgumentParser(prog="desolve", description="TFC and kernel DE solvers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one problem with fixed hyperparameters")
    s.add_argument("--problem", required=True)
    s.add_argument("--method", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--sigma", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--test-points", type=int)

    t = sub.add_parser("tune", help="pick hyperparameters for one point count")
    t.add_argument("--problem", required=True)
    t.add_argument("--method", required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--tuning", default="auto", choices=("auto", "grid", "simplex"))

    b = sub.add_parser("bench", help="run a sweep described by a JSON spec")
    b.add_argument("--spec", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--format", default="csv", choices=("csv", "json"))
    b.add_argument("--curves", help="directory for per-run error curves")
    b.add_argument("--repeats", type=int, default=bench.TIMING_REPEATS)
    return p


def _solve(args):
    spec = bench.RunSpec(args.problem, args.method, (args.n,), tuning="fixed",
                         test_points=args.test_points, m=args.m, sigma=args.sigma,
                         gamma=args.gamma)
    hp = bench.fixed_hyperparameters(spec.family, spec)
    _, report = bench.solve(spec.problem, spec.family, args.n, hp, n_test=args.test_points)
    print(json.dumps(bench._json_record(report)))


def _tune(args):
    spec = bench.RunSpec(args.problem, args.method, (args.n,), tuning=args.tuning)
    hp = bench.tune_hyperparameters(get_problem(args.problem), args.method, args.n, spec)
    print(json.dumps(hp.as_dict()))


def _bench(args):
    with open(args.spec) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise bench.InvalidArgumentError("spec file must hold a JSON object")
    spec = bench.RunSpec.from_dict(data)
    curves = {}

    def keep(report, sol):
        if args.curves:
            key = (report.problem, report.method, report.n_train)
            curves[key] = bench.error_curve(spec.problem, sol, spec.test_points)

    reports = bench.run_benchmark(spec, on_solution=keep, repeats=args.repeats)
    bench.emit_report(reports, args.format, args.out)
    if args.curves:
        bench.emit_curves(curves, args.curves)
    for r in reports:
        print(f"{r.problem} {r.method} N={r.n_train} mse_test={r.mse_test:.3e} "
              f"converged={r.converged}")


def main(argv=None):
    args = _parser().parse_args(argv)
    handler = {"solve": _solve, "tune": _tune, "bench": _bench}[args.command]
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            handler(args)
    except (NumericError, TuningFailure) as exc:
        print(f"desolve: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DesolveError, ValueError, json.JSONDecodeError, TypeError) as exc:
        print(f"desolve: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"desolve: io failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

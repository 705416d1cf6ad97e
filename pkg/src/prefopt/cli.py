"""Command-line entry point: benchmarks, single runs, and the HTTP service."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bench
from .loop import run_headless, write_history_csv
from .problems import get_problem, problem_names, synthetic_response


def _add_override_flags(parser):
    parser.add_argument("--n-max", type=int, default=None)
    parser.add_argument("--n-init", type=int, default=None)
    parser.add_argument("--delta-e", dest="delta_E", type=float, default=None)
    parser.add_argument("--delta-g", dest="delta_G_default", type=float,
                        default=None)
    parser.add_argument("--delta-s", dest="delta_S_default", type=float,
                        default=None)
    parser.add_argument("--sigma", type=float, default=None)
    parser.add_argument("--c-weight", type=float, default=None)
    parser.add_argument("--lam", type=float, default=None)
    parser.add_argument("--epsilon", dest="epsilon_initial", type=float,
                        default=None)
    parser.add_argument("--recal-steps", dest="recalibration_steps",
                        type=lambda s: [int(v) for v in s.split(",")],
                        default=None, help="comma-separated iteration indices")


def _collect_overrides(args) -> dict:
    keys = ("n_max", "n_init", "delta_E", "delta_G_default", "delta_S_default",
            "sigma", "c_weight", "lam", "epsilon_initial",
            "recalibration_steps")
    overrides = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
    if args.config_file:
        with open(args.config_file) as fh:
            file_values = json.load(fh)
        for k, v in file_values.items():
            overrides.setdefault(k, v)  # flags take precedence
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefopt",
        description="Preference-based global optimization under unknown "
                    "constraints")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="Monte-Carlo benchmark study")
    p_bench.add_argument("--problem", required=True, choices=problem_names())
    p_bench.add_argument("--runs", type=int, default=20)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--mode", choices=["full", "ablation"],
                         default="full")
    p_bench.add_argument("--out", default="bench_out")
    p_bench.add_argument("--jobs", type=int, default=os.cpu_count(),
                         help="parallel worker processes")
    p_bench.add_argument("--config-file", default=None,
                         help="JSON file of parameter overrides")
    _add_override_flags(p_bench)

    p_run = sub.add_parser("run", help="single headless run")
    p_run.add_argument("--problem", required=True, choices=problem_names())
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--mode", choices=["full", "ablation"], default="full")
    p_run.add_argument("--out", default="run_out")
    p_run.add_argument("--config-file", default=None)
    _add_override_flags(p_run)

    p_serve = sub.add_parser("serve", help="interactive session service")
    p_serve.add_argument("--port", type=int,
                         default=int(os.environ.get("PREFOPT_PORT", "8080")))
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data", default="sessions",
                         help="directory for session persistence")
    p_serve.add_argument("--static", default=None,
                         help="directory of built UI assets")
    return parser


def cmd_bench(args) -> int:
    overrides = _collect_overrides(args)
    report = bench.run_monte_carlo(args.problem, runs=args.runs,
                                   base_seed=args.seed, mode=args.mode,
                                   jobs=args.jobs, **overrides)
    paths = bench.write_report(report, args.out)
    agg = report.aggregates()
    print(f"problem={report.problem} mode={report.mode} runs={agg['runs']}")
    print(f"median best f: {agg['median_f']:.4f}")
    print(f"feasible runs: {agg['feasible_count']}/{agg['runs']}")
    if any(r.get("satisfactory") is not None for r in report.successful):
        print(f"satisfactory runs: {agg['satisfactory_count']}/{agg['runs']}")
    print(f"within 5% of optimum: {agg['within_5pct']}/{agg['runs']}")
    print(f"report: {paths['csv']}")
    failed = [r for r in report.records if "error" in r]
    if failed:
        print(f"FAILED runs: {len(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_run(args) -> int:
    overrides = _collect_overrides(args)
    problem = get_problem(args.problem)
    config = bench.default_config(args.problem, mode=args.mode,
                                  seed=args.seed, **overrides)
    result = run_headless(config,
                          lambda c, i: synthetic_response(problem, c, i))
    os.makedirs(args.out, exist_ok=True)
    json_path = os.path.join(args.out, f"{args.problem}_{args.seed}.json")
    with open(json_path, "w") as fh:
        json.dump(result.dataset.to_json(), fh)
    csv_path = os.path.join(args.out, f"{args.problem}_{args.seed}.csv")
    write_history_csv(result, csv_path)
    exact = problem.evaluate(result.best_point)
    print(f"best point: {result.best_point.tolist()}")
    print(f"exact f: {exact['f']:.6f}  feasible: {exact['feasible']}"
          + (f"  satisfactory: {exact['satisfactory']}"
             if "satisfactory" in exact else ""))
    print(f"outputs: {json_path}, {csv_path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, default_static_dir
    static = args.static or default_static_dir()
    app = create_app(args.data, static_dir=static)
    try:
        uvicorn.run(app, host=args.host, port=args.port)
    except SystemExit as exc:
        return int(exc.code or 1)
    except OSError as exc:
        print(f"failed to start server: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"bench": cmd_bench, "run": cmd_run, "serve": cmd_serve}
    try:
        return handlers[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Monte-Carlo benchmark harness: repeated seeded runs and aggregate stats."""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .acquisition import AcquisitionConfig
from .loop import RunConfig, run_headless
from .problems import BenchmarkProblem, get_problem, synthetic_response
from .surrogate import FitConfig

# per-problem solver settings used throughout the benchmark studies
_PROBLEM_SETTINGS = {
    "mbc": dict(n_max=50, n_init=13, delta_E=1.0, delta_G_default=1.0,
                delta_S_default=0.0, sigma=0.02,
                recalibration_steps=[13, 22, 32, 41]),
    "chc": dict(n_max=100, n_init=25, delta_E=2.0, delta_G_default=2.0,
                delta_S_default=0.0, sigma=0.01,
                recalibration_steps=[25, 44, 63, 81]),
    "chsc": dict(n_max=50, n_init=13, delta_E=1.0, delta_G_default=1.0,
                 delta_S_default=0.5, sigma=0.02,
                 recalibration_steps=[13, 22, 32, 41]),
}


def default_config(problem_name: str, mode: str = "full",
                   seed: int = 0, **overrides) -> RunConfig:
    """Bundled solver settings for a benchmark problem.

    mode 'ablation': zero infeasibility/unsatisfaction weights
    and the plain exploration term, relying on preferences only.
    """
    if mode not in ("full", "ablation"):
        raise ValueError("mode must be 'full' or 'ablation'")
    problem = get_problem(problem_name)
    s = dict(_PROBLEM_SETTINGS[problem.name])
    s.update({k: v for k, v in overrides.items() if v is not None})
    n_max = int(s["n_max"])
    if mode == "ablation":
        acq = AcquisitionConfig(delta_E=s["delta_E"], delta_G_default=0.0,
                                delta_S_default=0.0, n_max=n_max,
                                exploration_mode="plain")
    else:
        acq = AcquisitionConfig(delta_E=s["delta_E"],
                                delta_G_default=s["delta_G_default"],
                                delta_S_default=s["delta_S_default"],
                                n_max=n_max)
    return RunConfig(
        domain=problem.domain,
        n_max=n_max,
        n_init=int(s["n_init"]),
        acquisition=acq,
        fit=FitConfig(sigma=s["sigma"], c_weight=s.get("c_weight", 1.0),
                      lam=s.get("lam", 1e-6)),
        epsilon_initial=s.get("epsilon_initial", 1.0),
        epsilon_recalibration_steps=list(s["recalibration_steps"]),
        has_satisfaction_oracle=problem.has_satisfaction,
        seed=seed,
    )


@dataclass
class BenchReport:
    problem: str
    mode: str
    runs: int
    records: list = field(default_factory=list)

    @property
    def successful(self) -> list:
        return [r for r in self.records if "error" not in r]

    def aggregates(self) -> dict:
        ok = self.successful
        if not ok:
            return {"median_f": float("nan"), "feasible_count": 0,
                    "satisfactory_count": 0, "within_5pct": 0, "runs": self.runs}
        fs = np.array([r["f"] for r in ok])
        return {
            "median_f": float(np.median(fs)),
            "feasible_count": sum(r["feasible"] for r in ok),
            "satisfactory_count": sum(r.get("satisfactory") or 0 for r in ok),
            "within_5pct": sum(abs(r["pct_diff"]) <= 5.0 for r in ok),
            "runs": self.runs,
        }


def _single_run(args) -> dict:
    problem_name, mode, seed, overrides = args
    problem = get_problem(problem_name)
    config = default_config(problem_name, mode=mode, seed=seed, **overrides)
    t0 = time.perf_counter()
    try:
        result = run_headless(
            config, lambda c, i: synthetic_response(problem, c, i))
    except Exception as exc:  # record, never drop silently
        return {"seed": seed, "error": f"{type(exc).__name__}: {exc}"}
    elapsed = time.perf_counter() - t0
    best = result.best_point
    exact = problem.evaluate(best)
    opt = problem.reference_optimum
    rec = {
        "seed": seed,
        "best_point": np.asarray(best, float).tolist(),
        "f": exact["f"],
        "feasible": exact["feasible"],
        "satisfactory": exact.get("satisfactory"),
        "pct_diff": (exact["f"] - opt) / abs(opt) * 100.0,
        "wall_time_s": elapsed,
    }
    return rec


def run_monte_carlo(problem_name: str, runs: int, base_seed: int = 0,
                    mode: str = "full", jobs: int = None,
                    **overrides) -> BenchReport:
    """Run `runs` independent seeded runs (seed = base_seed + i)."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    problem = get_problem(problem_name)
    tasks = [(problem.name, mode, base_seed + i, overrides)
             for i in range(runs)]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, runs)) as pool:
            records = list(pool.map(_single_run, tasks))
    else:
        records = [_single_run(t) for t in tasks]
    return BenchReport(problem=problem.name, mode=mode, runs=runs,
                       records=records)


CSV_FIELDS = ("seed", "f", "feasible", "satisfactory", "pct_diff",
              "wall_time_s", "best_point", "error")


def write_report(report: BenchReport, out_dir) -> dict:
    """Emit per-run CSV, a summary text table, and histogram bin data."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{report.problem}_{report.mode}_runs.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for rec in report.records:
            writer.writerow({k: rec.get(k) for k in CSV_FIELDS})

    agg = report.aggregates()
    summary_path = os.path.join(out_dir,
                                f"{report.problem}_{report.mode}_summary.txt")
    sat = (f" ({agg['satisfactory_count']})"
           if any(r.get("satisfactory") is not None for r in report.successful)
           else "")
    with open(summary_path, "w") as fh:
        fh.write(f"problem: {report.problem}  mode: {report.mode}\n")
        fh.write(f"runs: {agg['runs']}\n")
        fh.write(f"median best f: {agg['median_f']:.4f}\n")
        fh.write(f"feasible runs: {agg['feasible_count']}{sat}\n")
        fh.write(f"runs within 5% of optimum: {agg['within_5pct']}\n")

    # percentage-difference distribution, 5%-wide bins up to 100%
    hist_path = os.path.join(out_dir,
                             f"{report.problem}_{report.mode}_hist.csv")
    diffs = [r["pct_diff"] for r in report.successful if abs(r["pct_diff"]) <= 100]
    edges = np.arange(0.0, 105.0, 5.0)
    counts, _ = np.histogram(np.abs(diffs), bins=edges)
    with open(hist_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_low_pct", "bin_high_pct", "count"])
        for lo, hi, c in zip(edges[:-1], edges[1:], counts):
            writer.writerow([lo, hi, int(c)])

    return {"csv": csv_path, "summary": summary_path, "hist": hist_path}

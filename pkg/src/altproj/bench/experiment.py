"""Run the benchmark: every configured method on every generated problem.

Emits, inside the configured output directory:

- ``manifest.csv``  - one row per generated problem (id, seed, rows of A,
  Friedrichs angle);
- ``results.csv``   - one row per problem x method (schema below);
- ``summary.csv``   - per-method median iteration counts per decile of the
  Friedrichs-angle distribution;
- ``run_metadata.json`` - timestamps and versions (kept out of the CSVs so
  that identical configurations yield byte-identical data files);
- ``iterations_vs_angle.svg`` - the iterations-against-angle scatter with
  theoretical-rate overlays.

results.csv schema (exact header)::

    problem_id,seed,n_rows_A,theta_f,theta_p,method,iterations,terminated,final_residual,observed_rate,final_angle_estimate

Floats are printed as shortest round-trip decimals.  `observed_rate` and
`final_angle_estimate` are empty when not computable / not applicable.
"""

from __future__ import annotations

import csv
import json
import multiprocessing
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .. import __version__
from ..operators import parse_method_name, preset
from ..solvers import StoppingRule, fit_observed_rate, run_adaptive, run_fixed
from ..subspaces import intersection_subspace
from .problems import ProblemInstance, generate_problem, problem_seed

__all__ = ["ExperimentConfig", "parse_config_file", "run_experiment", "RESULT_HEADER"]

RESULT_HEADER = (
    "problem_id,seed,n_rows_A,theta_f,theta_p,method,iterations,terminated,"
    "final_residual,observed_rate,final_angle_estimate"
)
MANIFEST_HEADER = "problem_id,seed,n_rows_A,theta_f"

METHOD_LABELS = ("GAP_STAR", "GAPA", "GAP2A", "DR", "MAP")  # plus GAP_FIXED(c) forms


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run: problem categories, corpus size, methods, stopping rule,
    base seed and output directory.

    `categories` are the row counts of the constraint matrix A, each in
    [1, 99] so that the intersection is almost surely nontrivial.
    """

    categories: tuple[int, ...]
    output_dir: Path
    problems_per_category: int = 500
    methods: tuple[str, ...] = ("GAP_STAR", "GAPA", "GAP2A", "DR", "MAP", "GAP_FIXED(1.8)")
    stopping: StoppingRule = StoppingRule()
    base_seed: int = 0

    def __post_init__(self):
        if not self.categories:
            raise ValueError("at least one category is required")
        bad = [c for c in self.categories if not (1 <= c <= 99)]
        if bad:
            raise ValueError(f"categories must lie in [1, 99], got {bad}")
        if self.problems_per_category < 1:
            raise ValueError("problems_per_category must be >= 1")
        if not self.methods:
            raise ValueError("at least one method is required")
        normalized = tuple(_canonical_label(m) for m in self.methods)
        object.__setattr__(self, "methods", normalized)
        object.__setattr__(self, "categories", tuple(int(c) for c in self.categories))
        object.__setattr__(self, "output_dir", Path(self.output_dir))


def _canonical_label(label: str) -> str:
    name, c = parse_method_name(label)
    if name == "GAP_FIXED":
        return f"GAP_FIXED({c:g})"
    if name == "MAP_OPT":
        return "MAP"
    return name


def parse_config_file(path: str | Path) -> ExperimentConfig:
    """Read a flat ``key = value`` config file into an ExperimentConfig.

    Recognized keys: categories (comma-separated ints),
    problems_per_category, methods (comma-separated labels), tolerance,
    max_iterations, base_seed, output_dir.  Lines starting with ``#`` and
    blank lines are ignored.
    """
    path = Path(path)
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()

    known = {
        "categories", "problems_per_category", "methods", "tolerance",
        "max_iterations", "base_seed", "output_dir",
    }
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    if "categories" not in values or "output_dir" not in values:
        raise ValueError(f"{path}: 'categories' and 'output_dir' are required")

    rule = StoppingRule(
        tolerance=float(values.get("tolerance", 1e-8)),
        max_iterations=int(values.get("max_iterations", 200_000)),
    )
    config = ExperimentConfig(
        categories=tuple(int(v) for v in values["categories"].split(",") if v.strip()),
        output_dir=Path(values["output_dir"]),
        base_seed=int(values.get("base_seed", 0)),
        stopping=rule,
    )
    if "problems_per_category" in values:
        config = replace(config, problems_per_category=int(values["problems_per_category"]))
    if "methods" in values:
        config = replace(
            config, methods=tuple(m.strip() for m in values["methods"].split(",") if m.strip())
        )
    return config


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _observed_rate(trace) -> float | None:
    burn_in = len(trace.steps) // 5
    try:
        return fit_observed_rate(trace, burn_in=burn_in)
    except ValueError:
        return None


def solve_problem(problem: ProblemInstance, method: str, rule: StoppingRule, record_every: int = 1):
    """Run one method on one problem instance and return its trace."""
    W = intersection_subspace(problem.U, problem.V)
    return _solve_with_intersection(problem, method, rule, W, record_every)


def _solve_with_intersection(problem, method, rule, W, record_every=1):
    name, c = parse_method_name(method)
    if name == "GAPA":
        return run_adaptive(
            problem.U, problem.V, problem.x0, rule=rule,
            record_every=record_every, intersection=W,
        )
    params = preset(name, theta_f=problem.theta_f, theta_p=problem.theta_p, relaxation=c)
    return run_fixed(
        params, problem.U, problem.V, problem.x0, rule=rule,
        record_every=record_every, intersection=W,
    )


def _run_task(task):
    problem_id, n_rows_a, seed, methods, tolerance, max_iterations = task
    rule = StoppingRule(tolerance=tolerance, max_iterations=max_iterations)
    problem = generate_problem(n_rows_a, seed, problem_id=problem_id)
    W = intersection_subspace(problem.U, problem.V)
    manifest_row = [problem_id, str(seed), str(n_rows_a), _fmt(problem.theta_f)]
    result_rows = []
    for method in methods:
        trace = _solve_with_intersection(problem, method, rule, W)
        result_rows.append([
            problem_id,
            str(seed),
            str(n_rows_a),
            _fmt(problem.theta_f),
            _fmt(problem.theta_p),
            method,
            str(trace.iteration_count),
            trace.termination,
            _fmt(trace.final_residual),
            _fmt(_observed_rate(trace)),
            _fmt(trace.final_angle_estimate),
        ])
    return manifest_row, result_rows


def _write_csv(path: Path, header: str, rows):
    with path.open("w", newline="") as fh:
        fh.write(header + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(rows)


def _summarize(result_rows, methods):
    """Median iterations per method per decile of the theta_f distribution."""
    by_problem = {}
    for row in result_rows:
        by_problem[row[0]] = float(row[3])
    thetas = np.array(sorted(by_problem.values()))
    edges = np.quantile(thetas, np.linspace(0.0, 1.0, 11))
    summary = []
    for d in range(10):
        lo, hi = edges[d], edges[d + 1]
        for method in methods:
            iters = [
                int(row[6]) for row in result_rows
                if row[5] == method
                and (lo <= float(row[3]) < hi or (d == 9 and float(row[3]) == hi))
            ]
            if iters:
                summary.append([
                    str(d), _fmt(float(lo)), _fmt(float(hi)), method,
                    _fmt(float(np.median(iters))), str(len(iters)),
                ])
    return summary


def run_experiment(config: ExperimentConfig, jobs: int = 1, make_figure: bool = True) -> dict[str, Path]:
    """Execute the configured benchmark and write all output files.

    Tasks are distributed over `jobs` worker processes and merged back in
    problem order, so the CSV outputs are byte-identical regardless of
    `jobs`.  Runs that hit the iteration cap are recorded as
    ``max_iters`` rows, not errors.  Returns the emitted file paths.
    """
    out = config.output_dir
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise RuntimeError(f"output directory {out} is not writable: {exc}") from exc

    started = time.time()
    tasks = [
        (
            f"c{cat:02d}-i{i:04d}",
            cat,
            problem_seed(config.base_seed, cat, i),
            config.methods,
            config.stopping.tolerance,
            config.stopping.max_iterations,
        )
        for cat in config.categories
        for i in range(config.problems_per_category)
    ]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            outcomes = pool.map(_run_task, tasks)
    else:
        outcomes = [_run_task(t) for t in tasks]

    manifest_rows = [m for m, _ in outcomes]
    result_rows = [row for _, rows in outcomes for row in rows]

    paths = {
        "manifest": out / "manifest.csv",
        "results": out / "results.csv",
        "summary": out / "summary.csv",
        "metadata": out / "run_metadata.json",
    }
    _write_csv(paths["manifest"], MANIFEST_HEADER, manifest_rows)
    _write_csv(paths["results"], RESULT_HEADER, result_rows)
    _write_csv(
        paths["summary"],
        "decile,theta_f_min,theta_f_max,method,median_iterations,runs",
        _summarize(result_rows, config.methods),
    )
    paths["metadata"].write_text(json.dumps(
        {
            "altproj_version": __version__,
            "numpy_version": np.__version__,
            "started_unix": started,
            "elapsed_seconds": time.time() - started,
            "jobs": jobs,
            "config": {
                "categories": list(config.categories),
                "problems_per_category": config.problems_per_category,
                "methods": list(config.methods),
                "tolerance": config.stopping.tolerance,
                "max_iterations": config.stopping.max_iterations,
                "base_seed": config.base_seed,
                "output_dir": str(config.output_dir),
            },
        },
        indent=2,
    ) + "\n")

    if make_figure:
        from .figures import save_iterations_figure

        paths["figure"] = out / "iterations_vs_angle.svg"
        save_iterations_figure(
            results_csv=paths["results"],
            path=paths["figure"],
            tolerance=config.stopping.tolerance,
        )
    return paths

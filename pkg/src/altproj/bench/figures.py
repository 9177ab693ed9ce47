"""Matplotlib figures for the benchmark: rendered straight to SVG files
next to the CSV output."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..spectrum import expected_iterations, theoretical_rate  # noqa: E402

__all__ = ["save_iterations_figure", "save_rates_figure"]

_METHOD_COLORS = {
    "GAP_STAR": "tab:blue",
    "GAPA": "tab:orange",
    "GAP2A": "tab:red",
    "DR": "tab:green",
    "MAP": "tab:purple",
}

# Methods with a theoretical iteration-count line; GAP2A is dashed since its
# rate assumes the largest principal angle stays moderate.
_LINE_STYLES = {"GAP_STAR": "-", "DR": "-", "MAP": "-", "GAP2A": "--"}


def _method_color(method: str):
    return _METHOD_COLORS.get(method, "tab:cyan")


def save_iterations_figure(results_csv: str | Path, path: str | Path, tolerance: float = 1e-8):
    """Log-log scatter of iteration count against the Friedrichs angle,
    one color per method, overlaid with the theoretical-rate lines."""
    thetas: dict[str, list[float]] = {}
    iters: dict[str, list[int]] = {}
    with Path(results_csv).open(newline="") as fh:
        for row in csv.DictReader(fh):
            method = row["method"]
            thetas.setdefault(method, []).append(float(row["theta_f"]))
            iters.setdefault(method, []).append(int(row["iterations"]))
    if not thetas:
        raise ValueError(f"no result rows in {results_csv}")

    fig, ax = plt.subplots(figsize=(8, 5))
    for method in thetas:
        ax.scatter(
            thetas[method], iters[method], s=8, alpha=0.6,
            color=_method_color(method), label=method, linewidths=0,
        )
    all_thetas = np.concatenate([np.asarray(v) for v in thetas.values()])
    grid = np.geomspace(all_thetas.min() * 0.8, min(all_thetas.max() * 1.2, np.pi / 2), 200)
    for method, style in _LINE_STYLES.items():
        line = [expected_iterations(theoretical_rate(method, t), tolerance) for t in grid]
        ax.plot(grid, line, style, color=_method_color(method), linewidth=1.0, alpha=0.9)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("Friedrichs angle")
    ax.set_ylabel("Iterations")
    ax.legend(loc="upper right", fontsize=9)
    ax.grid(True, which="both", alpha=0.2)
    _save_svg(fig, path)


def save_rates_figure(rows: list[dict], path: str | Path):
    """Theoretical iteration counts against the Friedrichs angle, one line
    per method, from a :func:`altproj.bench.rates.rates_table` result."""
    thetas = [row["theta_f"] for row in rows]
    methods = sorted({k[len("iters_"):] for k in rows[0] if k.startswith("iters_")})
    fig, ax = plt.subplots(figsize=(8, 5))
    for method in methods:
        ax.plot(
            thetas, [row[f"iters_{method}"] for row in rows],
            _LINE_STYLES.get(method, "-"), color=_method_color(method), label=method,
        )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("Friedrichs angle")
    ax.set_ylabel("Iterations to reach tolerance")
    ax.legend(fontsize=9)
    ax.grid(True, which="both", alpha=0.2)
    _save_svg(fig, path)


def _save_svg(fig, path: str | Path):
    # Pin the hash salt and drop the date so rerenders are reproducible.
    with plt.rc_context({"svg.hashsalt": "altproj"}):
        fig.savefig(Path(path), format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)

"""Closed-form rate tables over a grid of Friedrichs angles."""

from __future__ import annotations

import csv
from pathlib import Path

from ..spectrum import expected_iterations, theoretical_rate

__all__ = ["rates_table", "write_rates_csv", "RATE_TABLE_METHODS"]

# Methods with a closed-form rate as a function of the Friedrichs angle
# (PRAP additionally needs the largest principal angle and only appears
# when one is supplied).
RATE_TABLE_METHODS = ("GAP_STAR", "AP", "MAP", "DR", "GAP2A")


def rates_table(
    theta_f_grid,
    theta_p: float | None = None,
    tolerance: float = 1e-8,
) -> list[dict]:
    """Per angle: each method's rate and the iteration count at which that
    rate reaches `tolerance`.

    Returns a list of row dicts with keys ``theta_f`` and, per method M,
    ``gamma_M`` and ``iters_M`` (PRAP included when theta_p is given).
    """
    methods = RATE_TABLE_METHODS + (("PRAP",) if theta_p is not None else ())
    rows = []
    for theta_f in theta_f_grid:
        row: dict = {"theta_f": float(theta_f)}
        for method in methods:
            gamma = theoretical_rate(method, float(theta_f), theta_p=theta_p)
            row[f"gamma_{method}"] = gamma
            row[f"iters_{method}"] = expected_iterations(gamma, tolerance)
        rows.append(row)
    return rows


def write_rates_csv(rows: list[dict], path: str | Path):
    path = Path(path)
    fields = list(rows[0])
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([
                repr(v) if isinstance(v, float) else str(v) for v in (row[f] for f in fields)
            ])

"""Projection iterations with shadow-sequence monitoring.

Both solvers iterate to a point of U ∩ V and monitor the shadow sequence
z_k = P_U(x_k): the run stops once the shadow's distance to the
intersection, ||P_{U∩V}(z_k) - z_k||, drops below the stopping tolerance
(or an iteration cap is hit).  The shadow is monitored instead of the raw
iterate because it can land in the intersection long before the iterate
itself settles, notably for methods with dominant complex eigenvalues.

:func:`run_adaptive` needs no angle information: it estimates the
Friedrichs angle from the current triple of points each step and re-tunes
the relaxation to 2 / (1 + sin(estimate)), capped just below 2 to keep the
iteration averaged.  Started anywhere in U + V the estimate never
undershoots the true angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import GapParameters
from .subspaces import Subspace, intersection_subspace

__all__ = [
    "StoppingRule",
    "IterationRecord",
    "SolverTrace",
    "run_fixed",
    "run_adaptive",
    "estimate_angle",
    "fit_observed_rate",
]

# ||x - y|| <= DEGENERACY_TOL * (1 + ||x||) counts as x == y when forming
# the angle estimate (exact equality never occurs in floating point).
DEGENERACY_TOL = 1e-14


@dataclass(frozen=True)
class StoppingRule:
    """Stop when the shadow residual drops below `tolerance`, or after
    `max_iterations` steps."""

    tolerance: float = 1e-8
    max_iterations: int = 200_000

    def __post_init__(self):
        if not (self.tolerance > 0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class IterationRecord:
    """One recorded iterate: the step index, the shadow residual
    ||P_{U∩V}(z_k) - z_k||, and - for the adaptive solver - the angle
    estimate and relaxation that produced this iterate."""

    k: int
    shadow_residual: float
    angle_estimate: float | None = None
    alpha_used: float | None = None


@dataclass(frozen=True)
class SolverTrace:
    """Result of a solver run.

    `final_point` is the last shadow point P_U(x): the feasibility
    candidate (exactly in U, and within the stopping tolerance of U ∩ V on
    a converged run).  The per-iteration log is held in parallel arrays;
    `iterations` materializes it as records.  `angle_estimates` and
    `alphas_used` hold NaN where not applicable (fixed-parameter runs, and
    the k = 0 row, which precedes any step).
    """

    termination: str  # "converged" | "max_iters"
    iteration_count: int
    final_point: np.ndarray = field(repr=False)
    steps: np.ndarray = field(repr=False)
    shadow_residuals: np.ndarray = field(repr=False)
    angle_estimates: np.ndarray = field(repr=False)
    alphas_used: np.ndarray = field(repr=False)
    adaptive: bool = False

    @property
    def iterations(self) -> list[IterationRecord]:
        return [
            IterationRecord(
                k=int(k),
                shadow_residual=float(r),
                angle_estimate=None if math.isnan(t) else float(t),
                alpha_used=None if math.isnan(a) else float(a),
            )
            for k, r, t, a in zip(
                self.steps, self.shadow_residuals, self.angle_estimates, self.alphas_used
            )
        ]

    @property
    def final_residual(self) -> float:
        return float(self.shadow_residuals[-1])

    @property
    def final_angle_estimate(self) -> float | None:
        if not self.adaptive:
            return None
        estimates = self.angle_estimates[~np.isnan(self.angle_estimates)]
        return float(estimates[-1]) if estimates.size else None


class _TraceBuilder:
    def __init__(self, record_every: int, adaptive: bool):
        if record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {record_every}")
        self.record_every = record_every
        self.adaptive = adaptive
        self.ks: list[int] = []
        self.residuals: list[float] = []
        self.thetas: list[float] = []
        self.alphas: list[float] = []

    def record(self, k: int, residual: float, theta: float = math.nan, alpha: float = math.nan):
        self.ks.append(k)
        self.residuals.append(residual)
        self.thetas.append(theta)
        self.alphas.append(alpha)

    def due(self, k: int) -> bool:
        return k % self.record_every == 0

    def build(self, termination: str, iteration_count: int, final_point: np.ndarray) -> SolverTrace:
        return SolverTrace(
            termination=termination,
            iteration_count=iteration_count,
            final_point=final_point,
            steps=np.asarray(self.ks, dtype=int),
            shadow_residuals=np.asarray(self.residuals, dtype=float),
            angle_estimates=np.asarray(self.thetas, dtype=float),
            alphas_used=np.asarray(self.alphas, dtype=float),
            adaptive=self.adaptive,
        )


def _shadow_residual(bu, bw, x):
    """Shadow point z = P_U(x) and its distance to the intersection."""
    z = bu @ (bu.T @ x) if bu.shape[1] else np.zeros_like(x)
    d = z - bw @ (bw.T @ z) if bw.shape[1] else z
    return z, float(np.linalg.norm(d))


def run_fixed(
    params: GapParameters,
    U: Subspace,
    V: Subspace,
    x0: np.ndarray,
    rule: StoppingRule = StoppingRule(),
    record_every: int = 1,
    intersection: Subspace | None = None,
) -> SolverTrace:
    """Iterate x <- (1-alpha)x + alpha*P_U^a2(P_V^a1(x)) to convergence.

    Records every `record_every`-th iterate plus the final one.  Hitting
    the iteration cap is a valid termination ("max_iters"), not an error.
    `intersection` can pass a precomputed U ∩ V basis; it is computed once
    otherwise.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (U.ambient_dim,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({U.ambient_dim},)")
    W = intersection_subspace(U, V) if intersection is None else intersection
    bu, bv, bw = U.basis, V.basis, W.basis
    a, a1, a2 = params.alpha, params.alpha1, params.alpha2

    trace = _TraceBuilder(record_every, adaptive=False)
    x = x0
    z, r = _shadow_residual(bu, bw, x)
    trace.record(0, r)
    k = 0
    while r >= rule.tolerance and k < rule.max_iterations:
        pv = bv @ (bv.T @ x) if bv.shape[1] else np.zeros_like(x)
        y = x + a1 * (pv - x)
        pu = bu @ (bu.T @ y) if bu.shape[1] else np.zeros_like(y)
        t = y + a2 * (pu - y)
        x = t if a == 1.0 else x + a * (t - x)
        k += 1
        z, r = _shadow_residual(bu, bw, x)
        if trace.due(k):
            trace.record(k, r)
    if not trace.due(k):
        trace.record(k, r)
    termination = "converged" if r < rule.tolerance else "max_iters"
    return trace.build(termination, k, z)


def estimate_angle(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> float:
    """Friedrichs-angle estimate from one iteration's points:
    arccos(|<x - y, z - y>| / (||x - y|| ||z - y||)).

    Returns pi/2 when either difference is degenerate (the estimate is
    defined as cosine 0 there).  The ratio is clamped to [0, 1] before
    arccos since roundoff can push it above 1 for nearly parallel vectors.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if not (x.shape == y.shape == z.shape):
        raise ValueError("x, y, z must have equal shapes")
    v1 = x - y
    v2 = z - y
    n1 = float(np.linalg.norm(v1))
    n2 = float(np.linalg.norm(v2))
    if n1 <= DEGENERACY_TOL * (1.0 + np.linalg.norm(x)):
        return math.pi / 2
    if n2 <= DEGENERACY_TOL * (1.0 + np.linalg.norm(z)):
        return math.pi / 2
    cosine = min(abs(float(v1 @ v2)) / (n1 * n2), 1.0)
    return math.acos(cosine)


def run_adaptive(
    U: Subspace,
    V: Subspace,
    x0: np.ndarray,
    alpha0: float = 1.0,
    rule: StoppingRule = StoppingRule(),
    epsilon_cap: float = 1e-6,
    record_every: int = 1,
    intersection: Subspace | None = None,
) -> SolverTrace:
    """Adaptive iteration: estimate the Friedrichs angle online and re-tune
    the relaxation each step.

    Step k applies y = P_V^a(x), x' = P_U^a(y) with the current relaxation
    a, forms the estimate from (x, y, x'), and sets the next relaxation to
    min(2 / (1 + sin(estimate)), 2 - epsilon_cap).  The cap (any
    epsilon_cap > 0) keeps every step averaged and hence the iteration
    convergent even while the estimate moves.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (U.ambient_dim,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({U.ambient_dim},)")
    if not (0.0 < alpha0 < 2.0):
        raise ValueError(f"alpha0 must be in (0, 2), got {alpha0}")
    if epsilon_cap < 0:
        raise ValueError(f"epsilon_cap must be >= 0, got {epsilon_cap}")
    W = intersection_subspace(U, V) if intersection is None else intersection
    bu, bv, bw = U.basis, V.basis, W.basis

    trace = _TraceBuilder(record_every, adaptive=True)
    x = x0
    alpha = alpha0
    z, r = _shadow_residual(bu, bw, x)
    trace.record(0, r)
    k = 0
    while r >= rule.tolerance and k < rule.max_iterations:
        pv = bv @ (bv.T @ x) if bv.shape[1] else np.zeros_like(x)
        y = x + alpha * (pv - x)
        pu = bu @ (bu.T @ y) if bu.shape[1] else np.zeros_like(y)
        xn = y + alpha * (pu - y)
        theta = estimate_angle(x, y, xn)
        x = xn
        k += 1
        z, r = _shadow_residual(bu, bw, x)
        if trace.due(k):
            trace.record(k, r, theta, alpha)
        last_theta, last_alpha = theta, alpha
        alpha = min(2.0 / (1.0 + math.sin(theta)), 2.0 - epsilon_cap)
    if not trace.due(k):
        trace.record(k, r, last_theta, last_alpha)
    termination = "converged" if r < rule.tolerance else "max_iters"
    return trace.build(termination, k, z)


def fit_observed_rate(trace: SolverTrace, burn_in: int = 0) -> float:
    """Empirical per-iteration contraction factor of a trace.

    Least-squares slope of log(shadow residual) against the step index over
    the recorded iterates after dropping the first `burn_in`, exponentiated.
    Needs at least 10 points past the burn-in, all with positive residuals.
    """
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    ks = trace.steps[burn_in:]
    residuals = trace.shadow_residuals[burn_in:]
    if len(residuals) < 10:
        raise ValueError(
            f"need >= 10 recorded residuals after burn_in={burn_in}, have {len(residuals)}"
        )
    if np.any(residuals <= 0):
        raise ValueError("zero residual inside the fitting window")
    slope = np.polyfit(ks, np.log(residuals), 1)[0]
    return float(np.exp(slope))

"""Relaxed alternating projections between linear subspaces.

Core pieces: subspace geometry (projections, principal angles,
intersections), the three-parameter relaxed projection iteration with its
classical presets, closed-form spectral rate prediction, fixed and
adaptive solvers with shadow-sequence stopping, and a benchmark harness
(`altproj.bench`, CLI entry point ``altproj``).
"""

__version__ = "0.1.0"

from .subspaces import (
    Subspace,
    PrincipalAngleSet,
    nullspace_basis,
    principal_angles,
    intersection_subspace,
    project,
)
from .operators import (
    GapParameters,
    relaxed_project,
    gap_step,
    optimal_parameters,
    optimal_relaxation,
    preset,
    parse_method_name,
    build_dense_operator,
)
from .spectrum import (
    EigenvaluePrediction,
    ConvergenceReport,
    predict_eigenvalues,
    optimal_rate,
    theoretical_rate,
    classify_convergence,
    subdominant_magnitude,
    expected_iterations,
    friedrichs_block_shifted,
    friedrichs_block_trace_det,
    match_spectra,
)
from .solvers import (
    StoppingRule,
    IterationRecord,
    SolverTrace,
    run_fixed,
    run_adaptive,
    estimate_angle,
    fit_observed_rate,
)

__all__ = [
    "__version__",
    "Subspace",
    "PrincipalAngleSet",
    "nullspace_basis",
    "principal_angles",
    "intersection_subspace",
    "project",
    "GapParameters",
    "relaxed_project",
    "gap_step",
    "optimal_parameters",
    "optimal_relaxation",
    "preset",
    "parse_method_name",
    "build_dense_operator",
    "EigenvaluePrediction",
    "ConvergenceReport",
    "predict_eigenvalues",
    "optimal_rate",
    "theoretical_rate",
    "classify_convergence",
    "subdominant_magnitude",
    "expected_iterations",
    "friedrichs_block_shifted",
    "friedrichs_block_trace_det",
    "match_spectra",
    "StoppingRule",
    "IterationRecord",
    "SolverTrace",
    "run_fixed",
    "run_adaptive",
    "estimate_angle",
    "fit_observed_rate",
]

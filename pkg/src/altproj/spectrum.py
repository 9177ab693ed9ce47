"""Analytic spectrum of the projection iteration and closed-form rates.

For two subspaces with principal angles theta_1 <= ... <= theta_m
(m = min(p, q), p = dim U, q = dim V, ambient dimension n), the composition
T = P_U^a2 P_V^a1 is orthogonally similar to a block-diagonal matrix whose
eigenvalues are known in closed form:

- each principal angle theta contributes the pair
  f(theta) +- sqrt(f(theta)^2 - (1-a1)(1-a2)),
  f(theta) = (2 - a1 - a2 + a1*a2*cos(theta)^2) / 2
  (a zero angle degenerates to the pair {1, (1-a1)(1-a2)});
- directions of V orthogonal to U (dimension excess q - p) contribute
  1 - a2, and directions of U orthogonal to V (p - q) contribute 1 - a1;
- the joint orthogonal complement contributes (1-a1)(1-a2) with
  multiplicity n - p - q; when p + q > n that multiplicity is negative and
  removes copies supplied by the (at least p + q - n) zero angles.

The full iteration S = (1-alpha)*I + alpha*T then has eigenvalues
1 + alpha*(lambda - 1).  The asymptotic linear rate of a convergent
iteration is the subdominant magnitude: the largest eigenvalue modulus
after excluding 1 (and including 0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .operators import GapParameters
from .subspaces import PrincipalAngleSet

__all__ = [
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
]

# Eigenvalues within this distance of 1+0i count as the fixed-point
# eigenvalue and are excluded from the subdominant magnitude.
DEFAULT_UNIT_TOL = 1e-9

RATE_METHODS = ("GAP_STAR", "AP", "MAP_OPT", "DR", "GAP2A", "PRAP", "GAP_FIXED")


@dataclass(frozen=True)
class EigenvaluePrediction:
    """Predicted spectrum of the iteration matrix.

    Attributes
    ----------
    eigenvalues : ndarray of complex, shape (n,)
        All eigenvalues with multiplicity.
    gamma : float
        Subdominant magnitude: max(|lambda|) over {0} and all eigenvalues
        not within unit_tol of 1.
    contains_unit : bool
        Whether the eigenvalue 1 is present (fixed points exist).
    convergent : bool
        Whether powers of the matrix converge: every modulus <= 1 and the
        only unit-modulus eigenvalue is 1 itself.  Unit eigenvalues arise
        here from identity sub-blocks and are therefore semisimple.
    """

    eigenvalues: np.ndarray = field(repr=False)
    gamma: float
    contains_unit: bool
    convergent: bool


def _pair_for_angle(theta: float, a1: float, a2: float) -> tuple[complex, complex]:
    f = 0.5 * (2.0 - a1 - a2 + a1 * a2 * math.cos(theta) ** 2)
    disc = f * f - (1.0 - a1) * (1.0 - a2)
    root = cmath.sqrt(disc) if disc < 0 else math.sqrt(disc)
    return f + root, f - root


def predict_eigenvalues(
    params: GapParameters,
    angles: PrincipalAngleSet,
    dims: tuple[int, int, int],
    unit_tol: float = DEFAULT_UNIT_TOL,
) -> EigenvaluePrediction:
    """All n eigenvalues of the iteration matrix, from principal angles alone.

    Parameters
    ----------
    params : GapParameters
        The relaxation triple (any positive values).
    angles : PrincipalAngleSet
        Principal angles between U and V; must hold min(p, q) entries, the
        first `intersection_dim` of which are classified zero.
    dims : (p, q, n)
        Dimensions of U, of V, and of the ambient space.

    Notes
    -----
    Angles classified as zero contribute the exact pair
    {1, (1-a1)(1-a2)}; when p + q > n, the joint-complement block has
    negative multiplicity n - p - q and removes that many (1-a1)(1-a2)
    copies, which the zero angles are guaranteed to supply since
    dim(U ∩ V) >= p + q - n.
    """
    p, q, n = dims
    if p < 1 or q < 1:
        raise ValueError(f"subspace dimensions must be >= 1, got p={p}, q={q}")
    if n < max(p, q):
        raise ValueError(f"ambient dimension {n} below max(p, q) = {max(p, q)}")
    if angles.count != min(p, q):
        raise ValueError(
            f"expected {min(p, q)} principal angles for dims {dims}, got {angles.count}"
        )
    a, a1, a2 = params.alpha, params.alpha1, params.alpha2
    product = (1.0 - a1) * (1.0 - a2)

    t_eigs: list[complex] = []
    zero_count = angles.intersection_dim
    complement = n - p - q
    if complement < 0 and zero_count < -complement:
        raise ValueError(
            f"dims {dims} require at least {-complement} zero angles, "
            f"got intersection_dim={zero_count}"
        )
    # Zero angles split exactly into a fixed direction and a complement-like
    # one; with p + q > n, |n - p - q| of the latter belong to the removed
    # extension and are not part of the spectrum.
    t_eigs.extend([1.0] * zero_count)
    t_eigs.extend([product] * (zero_count + min(complement, 0)))
    for theta in angles.nonzero:
        t_eigs.extend(_pair_for_angle(float(theta), a1, a2))
    if q > p:
        t_eigs.extend([1.0 - a2] * (q - p))
    elif p > q:
        t_eigs.extend([1.0 - a1] * (p - q))
    if complement > 0:
        t_eigs.extend([product] * complement)

    eigenvalues = 1.0 + a * (np.asarray(t_eigs, dtype=complex) - 1.0)
    assert len(eigenvalues) == n

    unit = np.abs(eigenvalues - 1.0) <= unit_tol
    moduli = np.abs(eigenvalues)
    gamma = float(moduli[~unit].max()) if (~unit).any() else 0.0
    convergent = bool(
        np.all(moduli <= 1.0 + unit_tol)
        and np.all(unit[moduli >= 1.0 - unit_tol])
    )
    return EigenvaluePrediction(
        eigenvalues=eigenvalues,
        gamma=gamma,
        contains_unit=bool(unit.any()),
        convergent=convergent,
    )


def optimal_rate(theta_f: float) -> float:
    """The best achievable subdominant magnitude,
    (1 - sin(theta_f)) / (1 + sin(theta_f)).

    Attained exactly by the triple from
    :func:`altproj.operators.optimal_parameters` and by no other positive
    triple (when the relative dimensions of the subspaces are unknown).
    """
    if not (0.0 < theta_f <= math.pi / 2):
        raise ValueError(f"theta_f must be in (0, pi/2], got {theta_f}")
    s = math.sin(theta_f)
    return (1.0 - s) / (1.0 + s)


def theoretical_rate(
    method: str,
    theta_f: float,
    theta_p: float | None = None,
    relaxation: float | None = None,
) -> float:
    """Closed-form asymptotic rate of a named method at a Friedrichs angle.

    GAP_STAR: (1-s)/(1+s); AP: cos^2; MAP_OPT: (1-s^2)/(1+s^2); DR: cos;
    GAP2A: |cos - sin| / (cos + sin); PRAP (needs theta_p):
    (sin^2 tp - sin^2 tf) / (sin^2 tp + sin^2 tf).  GAP_FIXED (needs the
    fixed relaxation c): the larger of |1 - c| and the modulus of the
    Friedrichs-angle eigenvalue.
    """
    method = method.upper()
    if not (0.0 < theta_f <= math.pi / 2):
        raise ValueError(f"theta_f must be in (0, pi/2], got {theta_f}")
    s, c = math.sin(theta_f), math.cos(theta_f)
    if method == "GAP_STAR":
        return optimal_rate(theta_f)
    if method == "AP":
        return c * c
    if method in ("MAP_OPT", "MAP"):
        return (1.0 - s * s) / (1.0 + s * s)
    if method == "DR":
        return c
    if method == "GAP2A":
        return abs(c - s) / (c + s)
    if method == "PRAP":
        if theta_p is None:
            raise ValueError("PRAP rate requires theta_p")
        sp2, sf2 = math.sin(theta_p) ** 2, s * s
        return (sp2 - sf2) / (sp2 + sf2)
    if method == "GAP_FIXED":
        if relaxation is None:
            raise ValueError("GAP_FIXED rate requires the fixed relaxation value")
        pair = _pair_for_angle(theta_f, relaxation, relaxation)
        return max(abs(pair[0]), abs(pair[1]), abs(1.0 - relaxation))
    raise ValueError(f"no closed-form rate for method {method!r}")


@dataclass(frozen=True)
class ConvergenceReport:
    convergent: bool
    spectral_radius: float
    reason: str


def classify_convergence(M: np.ndarray, tol: float = DEFAULT_UNIT_TOL) -> ConvergenceReport:
    """Whether powers of M converge to a limit.

    They do iff rho(M) < 1, or rho(M) = 1 with 1 the only unit-circle
    eigenvalue and 1 semisimple.  Semisimplicity is tested as
    rank(M - I) == rank((M - I)^2).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    eigenvalues = np.linalg.eigvals(M)
    moduli = np.abs(eigenvalues)
    rho = float(moduli.max())
    if rho < 1.0 - tol:
        return ConvergenceReport(True, rho, "spectral radius below 1")
    if rho > 1.0 + tol:
        return ConvergenceReport(False, rho, f"spectral radius {rho:.6g} exceeds 1")
    on_circle = eigenvalues[moduli >= 1.0 - tol]
    off_one = np.abs(on_circle - 1.0) > tol
    if off_one.any():
        worst = on_circle[off_one][0]
        return ConvergenceReport(False, rho, f"unit-modulus eigenvalue {worst:.6g} != 1")
    shifted = M - np.eye(M.shape[0])
    if np.linalg.matrix_rank(shifted) != np.linalg.matrix_rank(shifted @ shifted):
        return ConvergenceReport(False, rho, "eigenvalue 1 is defective")
    return ConvergenceReport(True, rho, "eigenvalue 1 is semisimple and alone on the circle")


def subdominant_magnitude(M: np.ndarray, unit_tol: float = DEFAULT_UNIT_TOL) -> float:
    """Largest eigenvalue modulus of M after excluding eigenvalues within
    unit_tol of 1 (0 if none remain).

    Dense-eigensolver oracle for :func:`predict_eigenvalues`.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    eigenvalues = np.linalg.eigvals(M)
    keep = np.abs(eigenvalues - 1.0) > unit_tol
    return float(np.abs(eigenvalues[keep]).max()) if keep.any() else 0.0


def expected_iterations(gamma: float, tol: float = 1e-8) -> int:
    """Smallest k with gamma^k <= tol: ceil(log(tol) / log(gamma)).

    A relative slack of 1e-9 is applied before the ceiling so that exact
    ties (e.g. 0.1^8 = 1e-8) are not pushed up by floating-point rounding.
    Returns 1 for gamma = 0; raises for gamma >= 1 (no finite count).
    """
    if not (0.0 <= gamma < 1.0):
        raise ValueError(f"gamma must be in [0, 1), got {gamma}")
    if not (tol > 0):
        raise ValueError(f"tol must be positive, got {tol}")
    if gamma == 0.0:
        return 1
    ratio = math.log(tol) / math.log(gamma)
    return max(1, math.ceil(ratio - 1e-9))


def friedrichs_block_shifted(alpha1: float, alpha2: float, theta_f: float) -> np.ndarray:
    """The 2x2 Friedrichs-angle block of the composition, shifted so that a
    positive-real-part eigenvalue certifies a worse-than-optimal rate.

    With a* = 2/(1+sin tf) and B the angle block of P_U^a2 P_V^a1 at
    theta_f, returns (2 - a*) I + (a*/alpha1) (B - I).
    """
    if not (alpha1 > 0 and alpha2 > 0):
        raise ValueError("alpha1 and alpha2 must be positive")
    s, c = math.sin(theta_f), math.cos(theta_f)
    a_star = 2.0 / (1.0 + s)
    block = np.array(
        [
            [1.0 - alpha1 * s * s, alpha1 * c * s],
            [alpha1 * (1.0 - alpha2) * c * s, (1.0 - alpha2) * (1.0 - alpha1 * c * c)],
        ]
    )
    return (2.0 - a_star) * np.eye(2) + (a_star / alpha1) * (block - np.eye(2))


def friedrichs_block_trace_det(alpha1: float, alpha2: float, theta_f: float) -> tuple[float, float]:
    """Closed-form trace and determinant of :func:`friedrichs_block_shifted`.

    Both vanish exactly at alpha1 = alpha2 = 2/(1+sin theta_f), the
    optimality certificate.  Requires theta_f strictly inside (0, pi/2).
    """
    if not (alpha1 > 0 and alpha2 > 0):
        raise ValueError("alpha1 and alpha2 must be positive")
    if not (0.0 < theta_f < math.pi / 2):
        raise ValueError(f"theta_f must be in (0, pi/2) exclusive, got {theta_f}")
    s, c = math.sin(theta_f), math.cos(theta_f)
    trace = 2.0 / ((1.0 + s) * alpha1) * (-alpha1 - alpha2 + alpha2 * alpha1 * c * c + 2.0 * alpha1 * s)
    det = (
        4.0 * s * (1.0 - s) / (alpha1 * (1.0 + s) ** 2)
        * (-alpha1 - alpha2 + alpha1 * alpha2 * (1.0 + s))
    )
    return trace, det


def match_spectra(predicted: np.ndarray, computed: np.ndarray) -> float:
    """Largest pairing distance between two eigenvalue multisets.

    Pairs the two lists by minimum-cost assignment and returns the largest
    |predicted_i - computed_j| over the pairing, so conjugate pairs and
    repeated eigenvalues are matched regardless of ordering.
    """
    predicted = np.asarray(predicted, dtype=complex)
    computed = np.asarray(computed, dtype=complex)
    if predicted.shape != computed.shape:
        raise ValueError(f"spectra differ in length: {predicted.shape} vs {computed.shape}")
    cost = np.abs(predicted[:, None] - computed[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())

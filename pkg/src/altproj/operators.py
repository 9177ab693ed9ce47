"""Relaxed projections and the generalized alternating projections operator.

One iteration maps x to (1-alpha)*x + alpha * P_U^a2(P_V^a1(x)), where
P^a = (1-a)*I + a*P is the relaxed projection.  The three relaxation
parameters (alpha, alpha1, alpha2) select the classical methods as special
cases: plain alternating projections (1, 1, 1), averaged double reflections
a.k.a. Douglas-Rachford (1/2, 2, 2), and the angle-tuned variants built by
:func:`preset`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .subspaces import Subspace

__all__ = [
    "GapParameters",
    "relaxed_project",
    "gap_step",
    "optimal_parameters",
    "optimal_relaxation",
    "preset",
    "parse_method_name",
    "build_dense_operator",
]

PRESET_NAMES = ("GAP_STAR", "GAPA_INIT", "MAP_OPT", "AP", "DR", "GAP2A", "PRAP", "GAP_FIXED")


@dataclass(frozen=True)
class GapParameters:
    """Relaxation triple (alpha, alpha1, alpha2) of the projection iteration.

    All three must be positive; any positive values are accepted so that
    deliberately non-convergent configurations can be constructed and run.
    :meth:`classify` reports which (if any) of the sufficient step-size
    conditions for an averaged, convergent iteration the triple satisfies.
    """

    alpha: float
    alpha1: float
    alpha2: float
    preset_name: str | None = None

    def __post_init__(self):
        for name in ("alpha", "alpha1", "alpha2"):
            value = getattr(self, name)
            if not (value > 0):
                raise ValueError(f"{name} must be positive, got {value}")

    def classify(self) -> str:
        """Which sufficient condition for an averaged iteration holds.

        Returns one of:

        - ``"A1"``: alpha in (0, 1] and alpha1, alpha2 both in (0, 2);
        - ``"A2"``: alpha in (0, 1) and alpha1, alpha2 in (0, 2] with at
          least one of them != 2;
        - ``"A3"``: alpha in (0, 1) and alpha1 = alpha2 = 2;
        - ``"none"``: none of the above (the iteration may still converge,
          e.g. the optimally relaxed alternating projections have
          alpha > 1, but no averagedness guarantee applies).
        """
        a, a1, a2 = self.alpha, self.alpha1, self.alpha2
        if not (0 < a <= 1 and 0 < a1 <= 2 and 0 < a2 <= 2):
            return "none"
        if a1 < 2 and a2 < 2:
            return "A1"
        if a < 1 and (a1 != 2 or a2 != 2):
            return "A2"
        if a < 1 and a1 == 2 and a2 == 2:
            return "A3"
        return "none"


def relaxed_project(subspace: Subspace, alpha: float, x: np.ndarray) -> np.ndarray:
    """The relaxed projection (1-alpha)*x + alpha*P(x).

    alpha = 1 is the orthogonal projection, alpha = 2 the reflection.
    """
    p = subspace.project(x)
    return x + alpha * (p - x)


def gap_step(params: GapParameters, U: Subspace, V: Subspace, x: np.ndarray) -> np.ndarray:
    """One iteration: (1-alpha)*x + alpha * P_U^alpha2(P_V^alpha1(x)).

    Linear in x; every point of U ∩ V is a fixed point whenever the
    parameters keep the composition a (relaxed) projection pair (conditions
    A1/A2 of :meth:`GapParameters.classify`).
    """
    y = relaxed_project(V, params.alpha1, x)
    t = relaxed_project(U, params.alpha2, y)
    if params.alpha == 1.0:
        return t
    return x + params.alpha * (t - x)


def _check_angle(theta: float, name: str = "theta_f"):
    if not (0.0 < theta <= math.pi / 2):
        raise ValueError(f"{name} must be in (0, pi/2], got {theta}")


def optimal_relaxation(theta_f: float) -> float:
    """The rate-optimal relaxation 2 / (1 + sin(theta_f))."""
    _check_angle(theta_f)
    return 2.0 / (1.0 + math.sin(theta_f))


def optimal_parameters(theta_f: float) -> GapParameters:
    """The rate-optimal triple (1, a, a) with a = 2 / (1 + sin(theta_f)).

    For theta_f > 0 this satisfies condition A1 (a < 2), and the resulting
    iteration contracts at the optimal factor
    (1 - sin(theta_f)) / (1 + sin(theta_f)).
    """
    a = optimal_relaxation(theta_f)
    return GapParameters(1.0, a, a, preset_name="GAP_STAR")


def preset(
    name: str,
    theta_f: float | None = None,
    theta_p: float | None = None,
    relaxation: float | None = None,
    alpha0: float = 1.0,
) -> GapParameters:
    """Parameter triples for the methods compared in the benchmark.

    Parameters
    ----------
    name : str
        One of GAP_STAR, GAPA_INIT, MAP_OPT, AP, DR, GAP2A, PRAP,
        GAP_FIXED.
    theta_f : float, optional
        Friedrichs angle; required by GAP_STAR, MAP_OPT, GAP2A and PRAP.
    theta_p : float, optional
        Largest principal angle; required by PRAP.
    relaxation : float, optional
        The fixed relaxation c for GAP_FIXED (alpha1 = alpha2 = c).
    alpha0 : float
        Initial relaxation for GAPA_INIT (the adaptive method's first
        step); defaults to 1, a plain alternating-projections step.
    """
    name = name.upper()
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")

    def need_theta_f() -> float:
        if theta_f is None:
            raise ValueError(f"preset {name} requires theta_f")
        _check_angle(theta_f)
        return theta_f

    if name == "GAP_STAR":
        return optimal_parameters(need_theta_f())
    if name == "GAPA_INIT":
        if not (0 < alpha0 < 2):
            raise ValueError(f"alpha0 must be in (0, 2), got {alpha0}")
        return GapParameters(1.0, alpha0, alpha0, preset_name="GAPA_INIT")
    if name == "MAP_OPT":
        s = math.sin(need_theta_f())
        return GapParameters(2.0 / (1.0 + s * s), 1.0, 1.0, preset_name="MAP_OPT")
    if name == "AP":
        return GapParameters(1.0, 1.0, 1.0, preset_name="AP")
    if name == "DR":
        return GapParameters(0.5, 2.0, 2.0, preset_name="DR")
    if name == "GAP2A":
        tf = need_theta_f()
        return GapParameters(1.0, 2.0, 2.0 / (1.0 + math.sin(2.0 * tf)), preset_name="GAP2A")
    if name == "PRAP":
        tf = need_theta_f()
        if theta_p is None:
            raise ValueError("preset PRAP requires theta_p")
        _check_angle(theta_p, "theta_p")
        a1 = 2.0 / (math.sin(theta_p) ** 2 + math.sin(tf) ** 2)
        return GapParameters(1.0, a1, 1.0, preset_name="PRAP")
    # GAP_FIXED
    if relaxation is None:
        raise ValueError("preset GAP_FIXED requires the fixed relaxation value")
    if not (relaxation > 0):
        raise ValueError(f"fixed relaxation must be positive, got {relaxation}")
    return GapParameters(1.0, relaxation, relaxation, preset_name=f"GAP_FIXED({relaxation:g})")


_GAP_FIXED_RE = re.compile(r"^GAP_FIXED\(([^)]+)\)$|^GAP(\d+(?:\.\d+)?)$")


def parse_method_name(label: str) -> tuple[str, float | None]:
    """Parse a benchmark method label like ``"DR"``, ``"GAP1.8"`` or
    ``"GAP_FIXED(1.8)"`` into (preset name, fixed relaxation or None).

    ``"GAPA"`` (the adaptive method) and ``"MAP"`` (the optimally relaxed
    alternating projections) are accepted as benchmark spellings.
    """
    label = label.strip().upper()
    m = _GAP_FIXED_RE.match(label)
    if m:
        return "GAP_FIXED", float(m.group(1) or m.group(2))
    if label == "MAP":
        return "MAP_OPT", None
    if label == "GAPA":
        return "GAPA", None
    if label in PRESET_NAMES:
        return label, None
    raise ValueError(f"unknown method label {label!r}")


def build_dense_operator(params: GapParameters, U: Subspace, V: Subspace) -> np.ndarray:
    """Materialize the iteration as a dense n x n matrix.

    Returns (1-alpha)*I + alpha*R_U @ R_V with R = (1-a)*I + a*basis@basis.T.
    Intended for spectral oracle checks; the functional :func:`gap_step`
    path is the production one (O(n*d) per application).
    """
    if U.ambient_dim != V.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n = U.ambient_dim
    eye = np.eye(n)
    r_u = (1.0 - params.alpha2) * eye + params.alpha2 * U.projector_matrix()
    r_v = (1.0 - params.alpha1) * eye + params.alpha1 * V.projector_matrix()
    return (1.0 - params.alpha) * eye + params.alpha * (r_u @ r_v)

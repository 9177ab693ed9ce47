"""Linear subspaces of R^n: orthonormal bases, projections, principal angles.

A subspace is always carried around as an n x d matrix with orthonormal
columns.  Principal angles between two subspaces are computed as arccos of
the singular values of the cross-Gram matrix of the two bases: the
numerically standard equivalent of their recursive max-correlation
definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Subspace",
    "PrincipalAngleSet",
    "nullspace_basis",
    "principal_angles",
    "intersection_subspace",
    "project",
]

# Max-norm tolerance for basis.T @ basis == I on construction.
ORTHONORMALITY_TOL = 1e-12

# Default cosine-side tolerance classifying a principal angle as zero:
# cos(theta) > 1 - DEFAULT_ZERO_TOL counts as an intersection direction.
# Singular values cluster quadratically near 1, so a cosine-side test is
# stable; the flip side is that arccos near 1 is inaccurate, which is fine
# because near-zero angles are classified as intersection, not used in rates.
DEFAULT_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^n, represented by an orthonormal basis.

    Attributes
    ----------
    basis : ndarray, shape (n, d)
        Matrix with orthonormal columns spanning the subspace.  d = 0 is
        legal and represents the trivial subspace {0}.
    """

    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim != 2:
            raise ValueError(f"basis must be 2-d, got shape {basis.shape}")
        n, d = basis.shape
        if d > n:
            raise ValueError(f"subspace dimension {d} exceeds ambient dimension {n}")
        if d > 0:
            err = np.max(np.abs(basis.T @ basis - np.eye(d)))
            if err >= ORTHONORMALITY_TOL:
                raise ValueError(f"basis columns are not orthonormal (max error {err:.3e})")
        basis = basis.copy()
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def span(cls, vectors: np.ndarray, rank_tol: float = 1e-12) -> "Subspace":
        """Subspace spanned by the columns of `vectors` (need not be orthonormal).

        Orthonormalizes with an SVD; singular values below
        rank_tol * sigma_max are treated as zero.
        """
        vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        if vectors.shape[1] == 0:
            return cls(np.zeros((vectors.shape[0], 0)))
        u, s, _ = np.linalg.svd(vectors, full_matrices=False)
        rank = int(np.sum(s > rank_tol * s[0])) if s.size else 0
        return cls(u[:, :rank])

    @classmethod
    def trivial(cls, ambient_dim: int) -> "Subspace":
        """The zero subspace {0} of R^n."""
        return cls(np.zeros((ambient_dim, 0)))

    def project(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection of x onto the subspace.

        Idempotent and self-adjoint; for the trivial subspace returns 0.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise ValueError(
                f"vector has shape {x.shape}, expected ({self.ambient_dim},)"
            )
        if self.dim == 0:
            return np.zeros_like(x)
        return self.basis @ (self.basis.T @ x)

    def projector_matrix(self) -> np.ndarray:
        """The dense n x n projection matrix basis @ basis.T."""
        if self.dim == 0:
            n = self.ambient_dim
            return np.zeros((n, n))
        return self.basis @ self.basis.T

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        """Whether x lies in the subspace up to `tol` (relative to ||x||)."""
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(self.project(x) - x)) <= tol * (1.0 + np.linalg.norm(x))


def project(subspace: Subspace, x: np.ndarray) -> np.ndarray:
    """Functional alias for :meth:`Subspace.project`."""
    return subspace.project(x)


@dataclass(frozen=True)
class PrincipalAngleSet:
    """Principal angles between two subspaces, sorted ascending.

    Attributes
    ----------
    angles : ndarray
        All min(dim U, dim V) principal angles in radians, ascending in
        [0, pi/2].
    intersection_dim : int
        Number of angles classified as zero (cosine within zero_tol of 1);
        equals dim(U ∩ V) for the tolerance used.
    friedrichs : float or None
        The smallest nonzero principal angle, i.e. angles[intersection_dim].
        None when every angle is zero (one subspace contains the other).
    """

    angles: np.ndarray
    intersection_dim: int
    friedrichs: float | None

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        angles.setflags(write=False)
        object.__setattr__(self, "angles", angles)

    @property
    def count(self) -> int:
        return len(self.angles)

    @property
    def largest(self) -> float:
        """The largest principal angle."""
        return float(self.angles[-1])

    @property
    def nonzero(self) -> np.ndarray:
        """Angles not classified as intersection directions."""
        return self.angles[self.intersection_dim:]


def nullspace_basis(A: np.ndarray, rank_tol: float = 1e-12) -> Subspace:
    """Orthonormal basis of ker(A), as a Subspace of R^n for A of shape (m, n).

    Uses a full SVD; singular values below rank_tol * sigma_max count as
    zero.  A full-rank square matrix yields the legal d = 0 subspace.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    if m < 1 or n < 1:
        raise ValueError(f"matrix must be at least 1x1, got {A.shape}")
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(s > rank_tol * s[0])) if s.size else 0
    return Subspace(vh[rank:].T)


def _check_same_ambient(U: Subspace, V: Subspace):
    if U.ambient_dim != V.ambient_dim:
        raise ValueError(
            f"ambient dimensions differ: {U.ambient_dim} vs {V.ambient_dim}"
        )


def principal_angles(U: Subspace, V: Subspace, zero_tol: float = DEFAULT_ZERO_TOL) -> PrincipalAngleSet:
    """All principal angles between U and V, with the Friedrichs angle.

    The cosines are the singular values of basis_U.T @ basis_V, clamped to
    [0, 1] before arccos to avoid NaN from roundoff.  Angles with
    cos(theta) > 1 - zero_tol are classified as zero (intersection
    directions); the Friedrichs angle is the first angle past those.

    Raises
    ------
    ValueError
        If the ambient dimensions differ or either subspace is trivial
        (no principal angles are defined for d = 0).
    """
    _check_same_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        raise ValueError("principal angles are undefined for a trivial subspace")
    cosines = np.linalg.svd(U.basis.T @ V.basis, compute_uv=False)
    cosines = np.clip(cosines, 0.0, 1.0)
    angles = np.arccos(cosines)  # cosines descending => angles ascending
    s = int(np.sum(cosines > 1.0 - zero_tol))
    friedrichs = float(angles[s]) if s < len(angles) else None
    return PrincipalAngleSet(angles=angles, intersection_dim=s, friedrichs=friedrichs)


def intersection_subspace(U: Subspace, V: Subspace, zero_tol: float = DEFAULT_ZERO_TOL) -> Subspace:
    """Orthonormal basis for U ∩ V.

    The intersection directions are the principal vectors of U whose
    principal angle is classified as zero: left singular vectors of
    basis_U.T @ basis_V with singular value above 1 - zero_tol, mapped
    through basis_U.  Trivial inputs yield the trivial subspace.
    """
    _check_same_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        return Subspace.trivial(U.ambient_dim)
    left, cosines, _ = np.linalg.svd(U.basis.T @ V.basis)
    k = int(np.sum(np.clip(cosines, 0.0, 1.0) > 1.0 - zero_tol))
    return Subspace(U.basis @ left[:, :k])

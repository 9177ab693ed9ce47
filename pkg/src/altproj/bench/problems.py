"""Random feasibility problems: intersect the nullspaces of two Gaussian
matrices in R^200.

Each problem draws A (n_rows_a x 200), B (100 x 200) and the start point
x0, all with independent N(0, 1) entries, and sets V = ker(A),
U = ker(B).  Almost surely dim U = 100 and dim V = 200 - n_rows_a, so for
n_rows_a <= 99 the intersection is nontrivial with dimension
100 - n_rows_a and U + V is all of R^200.  Larger n_rows_a gives smaller
Friedrichs angles, i.e. harder problems.

Randomness is pinned down completely: a Philox counter-based generator is
seeded per problem, with per-problem seeds derived from
(base_seed, category, index) via numpy's SeedSequence.  Normal variates
come from ``Generator.standard_normal`` (ziggurat); the draw order is
A, then B, then x0.  The same seed reproduces the instance bit for bit on
a given numpy/LAPACK build.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..subspaces import Subspace, nullspace_basis, principal_angles

__all__ = ["ProblemInstance", "generate_problem", "problem_seed", "AMBIENT_DIM", "U_CODIM"]

AMBIENT_DIM = 200
U_CODIM = 100  # rows of B; dim U = AMBIENT_DIM - U_CODIM almost surely

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ProblemInstance:
    """A generated subspace-intersection problem with its ground truth.

    theta_f and theta_p are the Friedrichs (smallest nonzero) and largest
    principal angle between U and V, recomputable from the bases.
    `retries` counts regeneration attempts after degenerate draws where no
    nonzero principal angle existed (a measure-zero event).
    """

    id: str
    seed: int
    n_rows_a: int
    U: Subspace = field(repr=False)
    V: Subspace = field(repr=False)
    x0: np.ndarray = field(repr=False)
    theta_f: float
    theta_p: float
    retries: int = 0


def problem_seed(base_seed: int, category: int, index: int) -> int:
    """Deterministic 64-bit seed for problem `index` of a category."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(category, index))
    return int(ss.generate_state(1, np.uint64)[0])


def generate_problem(
    n_rows_a: int,
    seed: int,
    problem_id: str | None = None,
    zero_tol: float = 1e-10,
    max_retries: int = 8,
) -> ProblemInstance:
    """Draw one problem deterministically from (n_rows_a, seed).

    If a draw is degenerate (one nullspace contains the other, so no
    Friedrichs angle exists), the seed is bumped by one and the draw
    repeated; the number of bumps is recorded on the instance.
    """
    if not (1 <= n_rows_a <= AMBIENT_DIM - 1):
        raise ValueError(f"n_rows_a must be in [1, {AMBIENT_DIM - 1}], got {n_rows_a}")
    for attempt in range(max_retries + 1):
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence((seed + attempt) & _SEED_MASK))
        )
        A = rng.standard_normal((n_rows_a, AMBIENT_DIM))
        B = rng.standard_normal((U_CODIM, AMBIENT_DIM))
        x0 = rng.standard_normal(AMBIENT_DIM)
        V = nullspace_basis(A)
        U = nullspace_basis(B)
        if U.dim == 0 or V.dim == 0:
            continue
        pa = principal_angles(U, V, zero_tol=zero_tol)
        if pa.friedrichs is not None:
            return ProblemInstance(
                id=problem_id if problem_id is not None else f"a{n_rows_a:03d}-s{seed:d}",
                seed=seed,
                n_rows_a=n_rows_a,
                U=U,
                V=V,
                x0=x0,
                theta_f=pa.friedrichs,
                theta_p=pa.largest,
                retries=attempt,
            )
    raise RuntimeError(
        f"no nondegenerate draw for n_rows_a={n_rows_a} within {max_retries} retries of seed {seed}"
    )

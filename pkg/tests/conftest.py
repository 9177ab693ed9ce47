"""Shared constructions for the test suite."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from altproj import Subspace


def random_subspace(rng, n: int, d: int) -> Subspace:
    """Uniformly random d-dimensional subspace of R^n."""
    return Subspace.span(rng.standard_normal((n, d)))


def paired_subspaces(angles, n: int, rng=None):
    """Two subspaces of R^n with exactly the given principal angles.

    Built on coordinate pairs: U gets e_{2i}, V gets
    cos(t_i) e_{2i} + sin(t_i) e_{2i+1}; zero angles yield shared
    directions.  A random rotation of the whole space is applied when an
    rng is passed, which leaves the angles unchanged.
    """
    p = len(angles)
    if 2 * p > n:
        raise ValueError("need n >= 2 * len(angles)")
    bu = np.zeros((n, p))
    bv = np.zeros((n, p))
    for i, t in enumerate(angles):
        bu[2 * i, i] = 1.0
        bv[2 * i, i] = math.cos(t)
        bv[2 * i + 1, i] = math.sin(t)
    if rng is not None:
        q = np.linalg.qr(rng.standard_normal((n, n)))[0]
        bu, bv = q @ bu, q @ bv
    return Subspace(bu), Subspace(bv)


def point_in_sum(rng, U: Subspace, V: Subspace, scale: float = 1.0) -> np.ndarray:
    """A random point of U + V."""
    x = np.zeros(U.ambient_dim)
    if U.dim:
        x += U.basis @ rng.standard_normal(U.dim)
    if V.dim:
        x += V.basis @ rng.standard_normal(V.dim)
    return scale * x


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)

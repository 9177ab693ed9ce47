import math

import numpy as np
import pytest

from altproj import (
    GapParameters,
    Subspace,
    build_dense_operator,
    gap_step,
    intersection_subspace,
    optimal_parameters,
    optimal_relaxation,
    parse_method_name,
    preset,
    relaxed_project,
)
from conftest import paired_subspaces, random_subspace

E1 = Subspace(np.array([[1.0], [0.0]]))
E2 = Subspace(np.array([[0.0], [1.0]]))


def test_relaxed_project_reduces_to_projection_at_one(rng):
    S = random_subspace(rng, 6, 3)
    x = rng.standard_normal(6)
    assert np.allclose(relaxed_project(S, 1.0, x), S.project(x))


def test_relaxed_project_reflection_and_half_step():
    assert np.allclose(relaxed_project(E1, 2.0, np.array([1.0, 1.0])), [1, -1])
    assert np.allclose(relaxed_project(E1, 0.5, np.array([0.0, 2.0])), [0, 1])


def test_gap_parameters_require_positive_values():
    with pytest.raises(ValueError):
        GapParameters(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        GapParameters(1.0, -0.5, 1.0)


def test_classification_cases():
    assert GapParameters(1.0, 1.0, 1.0).classify() == "A1"       # plain projections
    assert GapParameters(1.0, 1.75, 1.75).classify() == "A1"
    assert GapParameters(0.9, 2.0, 1.0).classify() == "A2"
    assert GapParameters(0.5, 2.0, 2.0).classify() == "A3"       # averaged reflections
    assert GapParameters(1.0, 2.0, 2.0).classify() == "none"     # pure reflections
    assert GapParameters(1.96, 1.0, 1.0).classify() == "none"    # over-relaxed outer step
    assert GapParameters(1.0, 3.0, 1.0).classify() == "none"


def test_gap_step_fixes_intersection_points(rng):
    U, V = paired_subspaces([0.0, 0.0, 0.5, 1.1], 12, rng)
    W = intersection_subspace(U, V)
    for params in (preset("AP"), preset("DR"), optimal_parameters(0.5), GapParameters(0.7, 1.3, 0.4)):
        x = W.basis @ rng.standard_normal(W.dim)
        assert np.linalg.norm(gap_step(params, U, V, x) - x) < 1e-13 * (1 + np.linalg.norm(x))


def test_gap_step_double_reflection_average():
    # reflect (1,1) across e2 then e1 gives (-1,-1); averaging with x lands at 0
    out = gap_step(preset("DR"), E1, E2, np.array([1.0, 1.0]))
    assert np.allclose(out, [0.0, 0.0], atol=1e-15)


def test_gap_step_is_linear(rng):
    U = random_subspace(rng, 9, 4)
    V = random_subspace(rng, 9, 3)
    params = GapParameters(0.8, 1.4, 1.9)
    x, y = rng.standard_normal(9), rng.standard_normal(9)
    a, b = 1.7, -0.6
    lhs = gap_step(params, U, V, a * x + b * y)
    rhs = a * gap_step(params, U, V, x) + b * gap_step(params, U, V, y)
    assert np.linalg.norm(lhs - rhs) < 1e-10 * (1 + np.linalg.norm(lhs))


def test_gap_step_matches_dense_operator(rng):
    for _ in range(10):
        n = int(rng.integers(3, 25))
        U = random_subspace(rng, n, int(rng.integers(1, n)))
        V = random_subspace(rng, n, int(rng.integers(1, n)))
        params = GapParameters(
            float(rng.uniform(0.1, 1.0)), float(rng.uniform(0.1, 2.2)), float(rng.uniform(0.1, 2.2))
        )
        dense = build_dense_operator(params, U, V)
        x = rng.standard_normal(n)
        assert np.linalg.norm(dense @ x - gap_step(params, U, V, x)) < 1e-12 * np.linalg.norm(x)


def test_nonexpansive_under_averagedness_conditions(rng):
    cases = [
        GapParameters(1.0, 1.9, 0.3),   # A1
        GapParameters(0.7, 2.0, 1.2),   # A2
        GapParameters(0.5, 2.0, 2.0),   # A3
    ]
    for params in cases:
        assert params.classify() in ("A1", "A2", "A3")
        for _ in range(5):
            n = int(rng.integers(3, 20))
            U = random_subspace(rng, n, int(rng.integers(1, n)))
            V = random_subspace(rng, n, int(rng.integers(1, n)))
            x, y = rng.standard_normal(n), rng.standard_normal(n)
            dist = np.linalg.norm(
                gap_step(params, U, V, x) - gap_step(params, U, V, y)
            )
            assert dist <= np.linalg.norm(x - y) * (1 + 1e-10)


def test_optimal_relaxation_values():
    assert optimal_relaxation(math.pi / 2) == pytest.approx(1.0)
    assert optimal_relaxation(math.asin(1 / 7)) == pytest.approx(1.75)
    assert optimal_relaxation(1e-9) == pytest.approx(2.0, abs=1e-8)
    with pytest.raises(ValueError):
        optimal_relaxation(0.0)
    with pytest.raises(ValueError):
        optimal_relaxation(2.0)


def test_optimal_parameters_satisfy_interior_condition():
    params = optimal_parameters(0.3)
    assert params.alpha == 1.0
    assert params.alpha1 == params.alpha2 == pytest.approx(2 / (1 + math.sin(0.3)))
    assert params.classify() == "A1"


def test_preset_triples():
    assert preset("DR") == GapParameters(0.5, 2.0, 2.0, preset_name="DR")
    assert preset("AP").alpha1 == 1.0

    theta = math.asin(0.1425)
    map_opt = preset("MAP_OPT", theta)
    assert map_opt.alpha == pytest.approx(1.9601957745529834)
    assert map_opt.alpha1 == map_opt.alpha2 == 1.0

    fixed = preset("GAP_FIXED", relaxation=1.8)
    assert (fixed.alpha, fixed.alpha1, fixed.alpha2) == (1.0, 1.8, 1.8)
    assert fixed.preset_name == "GAP_FIXED(1.8)"

    gap2a = preset("GAP2A", 0.2)
    assert gap2a.alpha1 == 2.0
    assert gap2a.alpha2 == pytest.approx(2 / (1 + math.sin(0.4)))

    prap = preset("PRAP", 0.2, math.pi / 4)
    assert prap.alpha1 == pytest.approx(2 / (0.5 + math.sin(0.2) ** 2))
    assert prap.alpha == prap.alpha2 == 1.0

    init = preset("GAPA_INIT")
    assert (init.alpha, init.alpha1, init.alpha2) == (1.0, 1.0, 1.0)


def test_preset_requires_angles():
    with pytest.raises(ValueError):
        preset("GAP_STAR")
    with pytest.raises(ValueError):
        preset("PRAP", 0.2)
    with pytest.raises(ValueError):
        preset("GAP_FIXED")
    with pytest.raises(ValueError):
        preset("NO_SUCH")


def test_parse_method_name():
    assert parse_method_name("DR") == ("DR", None)
    assert parse_method_name("map") == ("MAP_OPT", None)
    assert parse_method_name("GAPA") == ("GAPA", None)
    assert parse_method_name("GAP1.8") == ("GAP_FIXED", 1.8)
    assert parse_method_name("GAP_FIXED(1.65)") == ("GAP_FIXED", 1.65)
    with pytest.raises(ValueError):
        parse_method_name("frobnicate")


def test_dense_operator_trivial_cases(rng):
    full = Subspace(np.eye(4))
    assert np.allclose(build_dense_operator(preset("AP"), full, full), np.eye(4))
    # orthogonal lines under averaged reflections: the zero matrix
    dense = build_dense_operator(preset("DR"), E1, E2)
    assert np.allclose(dense, np.zeros((2, 2)), atol=1e-15)
    assert np.max(np.abs(np.linalg.eigvals(dense))) < 1e-15

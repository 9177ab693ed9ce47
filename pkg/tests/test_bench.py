import math

import numpy as np
import pytest

from altproj import expected_iterations, intersection_subspace, principal_angles
from altproj.bench import (
    ExperimentConfig,
    generate_problem,
    parse_config_file,
    problem_seed,
    rates_table,
    run_experiment,
)
from altproj.bench.experiment import RESULT_HEADER
from altproj.bench.rates import write_rates_csv
from altproj.solvers import StoppingRule

GOLDEN_THETA_F = math.radians(8.195)


# ---------------------------------------------------------------- problems


def test_generate_problem_dimensions():
    problem = generate_problem(99, seed=7)
    assert problem.U.ambient_dim == 200
    assert problem.U.dim == 100
    assert problem.V.dim == 101
    assert intersection_subspace(problem.U, problem.V).dim == 1
    assert problem.retries == 0


def test_generate_problem_ground_truth_matches_bases():
    problem = generate_problem(50, seed=3)
    pa = principal_angles(problem.U, problem.V)
    assert problem.theta_f == pa.friedrichs
    assert problem.theta_p == pa.largest
    assert intersection_subspace(problem.U, problem.V).dim == 50


def test_generate_problem_is_deterministic():
    a = generate_problem(40, seed=123)
    b = generate_problem(40, seed=123)
    assert a.theta_f == b.theta_f  # bit-identical
    assert np.array_equal(a.U.basis, b.U.basis)
    assert np.array_equal(a.x0, b.x0)
    c = generate_problem(40, seed=124)
    assert c.theta_f != a.theta_f


def test_generate_problem_angle_range():
    # the generated corpus keeps Friedrichs angles between 5e-4 and 1
    for cat, seed in ((5, 0), (50, 1), (95, 2)):
        problem = generate_problem(cat, problem_seed(0, cat, seed))
        assert 5e-4 < problem.theta_f < 1.0


def test_generate_problem_validates_rows():
    with pytest.raises(ValueError):
        generate_problem(0, seed=1)
    with pytest.raises(ValueError):
        generate_problem(200, seed=1)


def test_problem_seed_substreams_differ():
    seeds = {problem_seed(42, cat, i) for cat in (1, 2) for i in range(10)}
    assert len(seeds) == 20
    assert problem_seed(42, 1, 3) == problem_seed(42, 1, 3)


# ---------------------------------------------------------------- config


def test_experiment_config_validation(tmp_path):
    with pytest.raises(ValueError):
        ExperimentConfig(categories=(), output_dir=tmp_path)
    with pytest.raises(ValueError):
        ExperimentConfig(categories=(150,), output_dir=tmp_path)
    with pytest.raises(ValueError):
        ExperimentConfig(categories=(10,), output_dir=tmp_path, problems_per_category=0)
    config = ExperimentConfig(categories=(10,), output_dir=tmp_path, methods=("map", "GAP1.8"))
    assert config.methods == ("MAP", "GAP_FIXED(1.8)")


def test_parse_config_file(tmp_path):
    path = tmp_path / "bench.cfg"
    path.write_text(
        "# desk benchmark\n"
        "categories = 20, 50\n"
        "problems_per_category = 3\n"
        "methods = GAP_STAR, GAPA, DR\n"
        "tolerance = 1e-6\n"
        "max_iterations = 5000\n"
        "base_seed = 11\n"
        "output_dir = out\n"
    )
    config = parse_config_file(path)
    assert config.categories == (20, 50)
    assert config.problems_per_category == 3
    assert config.methods == ("GAP_STAR", "GAPA", "DR")
    assert config.stopping == StoppingRule(tolerance=1e-6, max_iterations=5000)
    assert config.base_seed == 11


def test_parse_config_rejects_bad_input(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("categories = 10\noutput_dir = out\nwhat = 1\n")
    with pytest.raises(ValueError, match="unknown config keys"):
        parse_config_file(path)
    path.write_text("categories = 10\n")
    with pytest.raises(ValueError, match="required"):
        parse_config_file(path)
    path.write_text("categories 10\noutput_dir = out\n")
    with pytest.raises(ValueError, match="key = value"):
        parse_config_file(path)


# ---------------------------------------------------------------- experiment


def tiny_config(tmp_path, **overrides):
    defaults = dict(
        categories=(20,),
        output_dir=tmp_path / "out",
        problems_per_category=2,
        methods=("GAP_STAR", "DR"),
        stopping=StoppingRule(tolerance=1e-8, max_iterations=20_000),
        base_seed=5,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def test_run_experiment_row_counts_and_files(tmp_path):
    paths = run_experiment(tiny_config(tmp_path), make_figure=True)
    results = paths["results"].read_text().splitlines()
    assert results[0] == RESULT_HEADER
    assert len(results) == 1 + 2 * 2  # header + problems x methods
    manifest = paths["manifest"].read_text().splitlines()
    assert manifest[0] == "problem_id,seed,n_rows_A,theta_f"
    assert len(manifest) == 3
    assert paths["summary"].exists()
    assert paths["metadata"].exists()
    svg = paths["figure"].read_text()
    assert svg.lstrip().startswith("<?xml")


def test_run_experiment_rows_are_reproducible(tmp_path):
    first = run_experiment(tiny_config(tmp_path, output_dir=tmp_path / "a"), make_figure=False)
    second = run_experiment(tiny_config(tmp_path, output_dir=tmp_path / "b"), make_figure=False)
    assert first["results"].read_bytes() == second["results"].read_bytes()
    assert first["manifest"].read_bytes() == second["manifest"].read_bytes()
    assert first["summary"].read_bytes() == second["summary"].read_bytes()


def test_run_experiment_parallel_matches_serial(tmp_path):
    serial = run_experiment(tiny_config(tmp_path, output_dir=tmp_path / "s"), make_figure=False)
    parallel = run_experiment(
        tiny_config(tmp_path, output_dir=tmp_path / "p"), jobs=2, make_figure=False
    )
    assert serial["results"].read_bytes() == parallel["results"].read_bytes()


def test_run_experiment_converged_rows_make_sense(tmp_path):
    paths = run_experiment(
        tiny_config(tmp_path, methods=("GAP_STAR", "GAPA", "MAP")), make_figure=False
    )
    rows = paths["results"].read_text().splitlines()[1:]
    by_method = {}
    for row in rows:
        fields = row.split(",")
        by_method.setdefault(fields[5], []).append(fields)
    for method, method_rows in by_method.items():
        for fields in method_rows:
            assert fields[7] == "converged"
            assert float(fields[8]) < 1e-8
            theta_f = float(fields[3])
            iters = int(fields[6])
            expected = expected_iterations((1 - math.sin(theta_f)) / (1 + math.sin(theta_f)))
            if method in ("GAP_STAR", "GAPA"):
                assert expected * 0.3 <= iters <= expected * 3
            if method == "GAPA":
                estimate = float(fields[10])
                assert estimate >= theta_f - 1e-9
            else:
                assert fields[10] == ""


def test_run_experiment_unwritable_output(tmp_path):
    target = tmp_path / "blocked"
    target.write_text("a file, not a directory")
    with pytest.raises(RuntimeError, match="not writable"):
        run_experiment(tiny_config(tmp_path, output_dir=target), make_figure=False)


# ---------------------------------------------------------------- rates


def test_rates_table_figure_row():
    row = rates_table([GOLDEN_THETA_F], theta_p=math.pi / 4)[0]
    assert row["gamma_GAP_STAR"] == pytest.approx(0.750, abs=5e-4)
    assert row["gamma_DR"] == pytest.approx(0.990, abs=5e-4)
    assert row["gamma_MAP"] == pytest.approx(0.960, abs=5e-4)
    assert row["gamma_GAP2A"] == pytest.approx(0.748, abs=5e-4)
    assert row["gamma_PRAP"] == pytest.approx(0.922, abs=5e-4)
    assert row["iters_GAP_STAR"] == expected_iterations(row["gamma_GAP_STAR"], 1e-8)


def test_rates_table_limits():
    row = rates_table([math.pi / 2])[0]
    assert row["gamma_GAP_STAR"] == 0.0
    assert row["iters_GAP_STAR"] == 1
    row = rates_table([0.01])[0]
    assert row["iters_DR"] == 368408
    assert row["iters_GAP_STAR"] == 922
    # bracketing: the rate really needs that many steps and no fewer
    for method in ("DR", "GAP_STAR"):
        gamma, iters = row[f"gamma_{method}"], row[f"iters_{method}"]
        assert gamma ** iters <= 1e-8 < gamma ** (iters - 1)


def test_write_rates_csv_round_trips(tmp_path):
    rows = rates_table([0.1, 0.5])
    path = tmp_path / "rates.csv"
    write_rates_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("theta_f,")
    parsed = [float(v) for v in lines[1].split(",")]
    assert parsed[0] == 0.1  # shortest round-trip decimals

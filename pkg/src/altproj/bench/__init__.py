"""Benchmark corpus generation, experiment runner, rate tables and figures."""

from .problems import ProblemInstance, generate_problem, problem_seed
from .experiment import ExperimentConfig, parse_config_file, run_experiment
from .rates import rates_table

__all__ = [
    "ProblemInstance",
    "generate_problem",
    "problem_seed",
    "ExperimentConfig",
    "parse_config_file",
    "run_experiment",
    "rates_table",
]

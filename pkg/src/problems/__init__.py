"""Benchmark problems: random input families, closed forms, reference solvers, datasets."""

from .closed_form import (
    BreatherParams,
    SolitonParams,
    TwoSolitonParams,
    kdv_soliton,
    kdv_two_soliton,
    km_breather,
    parametric_ode_solution,
)
from .datasets import PROBLEMS, Dataset, DatasetSpec, build_dataset, load_dataset, problem_ids, save_dataset
from .random_family import RandomFamilyParams, sample_random_family
from .solvers import burgers_solve, cheb_diff_matrix, elliptic_solve_1d, elliptic_solve_2d
from .targets import EXACT_RULES, target_derivative, target_integrate, target_shift_product

__all__ = [
    "BreatherParams",
    "Dataset",
    "DatasetSpec",
    "EXACT_RULES",
    "PROBLEMS",
    "RandomFamilyParams",
    "SolitonParams",
    "TwoSolitonParams",
    "build_dataset",
    "burgers_solve",
    "cheb_diff_matrix",
    "elliptic_solve_1d",
    "elliptic_solve_2d",
    "kdv_soliton",
    "kdv_two_soliton",
    "km_breather",
    "load_dataset",
    "parametric_ode_solution",
    "problem_ids",
    "sample_random_family",
    "save_dataset",
    "target_derivative",
    "target_integrate",
    "target_shift_product",
]

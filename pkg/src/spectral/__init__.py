"""Spectral core: series, sequence algebra, aliasing analysis, file I/O."""

from .aliasing import (
    Activation,
    aliasing_error,
    aliasing_error_refined,
    compose_with_activation,
    operator_grid_discrepancy,
    relu_cheb_coeff,
    relu_extreme_aliasing,
    relu_refined_reference,
)
from .sequences import Seq, SeqOperator, bias_broadcast_add, kernel_eval, seq_add, seq_inner, seq_matvec
from .series import (
    Basis,
    CoeffSeries,
    Grid,
    GridFunction,
    analysis,
    analysis_matrix,
    basis_values,
    cheb_analysis,
    cheb_points,
    cheb_synthesis,
    chop,
    differentiate,
    evaluate,
    evaluate_on_grid,
    fit_length,
    fourier_analysis,
    fourier_synthesis,
    integrate,
    interpolate_to_grid,
    multiply,
    norm_l2,
    pad,
    shift,
    synthesis,
    synthesis_matrix,
    to_basis,
    uniform_points,
)

__all__ = [
    "Activation",
    "Seq",
    "SeqOperator",
    "aliasing_error",
    "aliasing_error_refined",
    "bias_broadcast_add",
    "compose_with_activation",
    "kernel_eval",
    "operator_grid_discrepancy",
    "relu_cheb_coeff",
    "relu_extreme_aliasing",
    "relu_refined_reference",
    "seq_add",
    "seq_inner",
    "seq_matvec",
    "Basis",
    "CoeffSeries",
    "Grid",
    "GridFunction",
    "analysis",
    "analysis_matrix",
    "basis_values",
    "cheb_analysis",
    "cheb_points",
    "cheb_synthesis",
    "chop",
    "differentiate",
    "evaluate",
    "evaluate_on_grid",
    "fit_length",
    "fourier_analysis",
    "fourier_synthesis",
    "integrate",
    "interpolate_to_grid",
    "multiply",
    "norm_l2",
    "pad",
    "shift",
    "synthesis",
    "synthesis_matrix",
    "to_basis",
    "uniform_points",
]

"""Hybrid Legendre/block-pulse solver for nonlinear Fredholm integro-differential equations."""

from .basis import BasisConfig, basis_matrix, basis_vector, hybrid_eval, legendre_eval
from .expr import parse
from .operators import build_J, build_L, build_P, build_triple_tensor, coeff_matrix
from .projection import (project_function, project_initial_conditions, project_kernel,
                         reconstruct)
from .system import (DiscreteSystem, ProblemSpec, SolveOptions, SolveReport,
                     derivative_coeffs, newton_solve, solve)

__version__ = "0.1.0"

__all__ = [
    "BasisConfig", "basis_matrix", "basis_vector", "hybrid_eval", "legendre_eval",
    "parse",
    "build_J", "build_L", "build_P", "build_triple_tensor", "coeff_matrix",
    "project_function", "project_initial_conditions", "project_kernel", "reconstruct",
    "DiscreteSystem", "ProblemSpec", "SolveOptions", "SolveReport",
    "derivative_coeffs", "newton_solve", "solve",
]

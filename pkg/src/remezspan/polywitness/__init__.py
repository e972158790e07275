"""Polynomials on boxes, exact Remez d-span and independent cross-checks."""

from .basis import (Polynomial, basis_matrix, chebyshev_lobatto, eval_poly, load_polynomial,
                    multi_indices, probe_grid, save_polynomial, space_dim)
from .favard import FavardResult, favard_bound, favard_subset_value
from .oracle import (FalsifyReport, RemezEstimate, definiteness_rank, exact_remez_span,
                     falsify, is_d_definite, lebesgue_function, lebesgue_oracle, lp_value_at)
from .simplex import LPSolution, RemezLP
from .sublevel import sublevel_measure_1d

__all__ = [
    "Polynomial", "basis_matrix", "chebyshev_lobatto", "eval_poly", "load_polynomial",
    "multi_indices", "probe_grid", "save_polynomial", "space_dim",
    "FavardResult", "favard_bound", "favard_subset_value",
    "FalsifyReport", "RemezEstimate", "definiteness_rank", "exact_remez_span", "falsify",
    "is_d_definite", "lebesgue_function", "lebesgue_oracle", "lp_value_at",
    "LPSolution", "RemezLP", "sublevel_measure_1d",
]

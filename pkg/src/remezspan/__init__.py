"""Covering numbers, metric d-span and Remez-type bounds for finite point sets."""

from .covering import (CoverTable, CoveringInterval, CoveringProfile, cover_table,
                       covering_bounds_nd, covering_number_1d, covering_number_exact,
                       covering_profile_1d, greedy_cover, packing_number)
from .errors import (DivergentError, FalsificationFound, IndefiniteSetError,
                     InsufficientPointsError, InvalidParameterError, NotApplicableError,
                     ParseError, RemezSpanError, TooLargeError)
from .pointset import (Box, PointSet, dense_subset, load_pointset, make_geometric_set,
                       make_grid_1d, make_grid_nd, make_power_set, min_pairwise_distance,
                       save_pointset)
from .polywitness import (Polynomial, RemezEstimate, eval_poly, exact_remez_span,
                          falsify, favard_bound, favard_subset_value, is_d_definite,
                          lebesgue_oracle, lp_value_at, sublevel_measure_1d)
from .remez import (BoundReport, brudnyi_ganzburg_factor, chebyshev_eval,
                    grid_product_bound, remez_factor_1d, remez_span_bound)
from .span import (AnalyticBoundInput, SpanResult, VitushkinModel, epsilon1, omega,
                   omega_1d, omega_min_distance_bound, omega_nd, omega_positive,
                   theorem_31_bound, theorem_32_bound, theorem_33_bound, vitushkin_eval)
from .spread import (SpanningTree, SpreadReport, beta_spread, beta_weight,
                     corollary_5_bound, eta, mst, sandwich_check, theorem_35_check, zeta)

__version__ = "0.1.0"

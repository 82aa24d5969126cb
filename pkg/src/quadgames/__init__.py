"""Constructive solvers for quadratic games.

Linear solves with explicit solution sets, convex quadratic
minimization, quadratic saddle points, parametric Lagrangian duality,
the sphere trust-region problem via a companion-matrix eigenvalue, and
sphere-constrained minmax/maxmin, each paired with brute-force oracles.
"""

from .game import (
    DualityReport,
    LambdaSolve,
    PartitionedQuadratic,
    SaddleSolution,
    duality_report,
    lambda_curve,
    maxmin_at_lambda,
    maxmin_threshold,
    minmax_at_lambda,
    minmax_threshold,
    solve_saddle,
    verify_saddle,
)
from .linalg import (
    AffineSolutionSet,
    LinearSolve,
    SchurPair,
    SvdFactors,
    is_psd,
    is_psd_partitioned,
    null_basis,
    pinv,
    range_basis,
    schur_complements,
    solve_linear,
    spectral_norm,
    svd,
)
from .minmax import (
    ConstrainedGameSolution,
    Direction,
    lambda_search,
    solve_homogeneous,
    solve_linear_term,
)
from .oracle import OracleConfig, fd_gradient, grid_minmax, sphere_max
from .quadratic import QuadOptimum, QuadraticForm, maximize, minimize
from .sphere import (
    BoundaryConditions,
    SphereSolutionSet,
    TrustRegionSolution,
    boundary_conditions,
    companion_matrix,
    dual_curve,
    lambda_p,
    solve_trust_region,
    sphere_intersect,
)

__all__ = [
    "AffineSolutionSet",
    "BoundaryConditions",
    "ConstrainedGameSolution",
    "Direction",
    "DualityReport",
    "LambdaSolve",
    "LinearSolve",
    "OracleConfig",
    "PartitionedQuadratic",
    "QuadOptimum",
    "QuadraticForm",
    "SaddleSolution",
    "SchurPair",
    "SphereSolutionSet",
    "SvdFactors",
    "TrustRegionSolution",
    "boundary_conditions",
    "companion_matrix",
    "duality_report",
    "dual_curve",
    "fd_gradient",
    "grid_minmax",
    "is_psd",
    "is_psd_partitioned",
    "lambda_curve",
    "lambda_p",
    "lambda_search",
    "maximize",
    "maxmin_at_lambda",
    "maxmin_threshold",
    "minimize",
    "minmax_at_lambda",
    "minmax_threshold",
    "null_basis",
    "pinv",
    "range_basis",
    "schur_complements",
    "solve_homogeneous",
    "solve_linear",
    "solve_linear_term",
    "solve_saddle",
    "solve_trust_region",
    "spectral_norm",
    "sphere_intersect",
    "sphere_max",
    "svd",
    "verify_saddle",
]

"""Multigrid solver for the Dirichlet Monge-Ampere equation det(D^2 u) = f.

Centered finite differences on uniform 2D/3D grids, a convexity-selecting
nonlinear Gauss-Seidel smoother, FAS V-cycles, and a full-multigrid driver
with a benchmarking CLI (``mamg``).
"""

from .errors import ConfigurationError, DataError, DegenerateNodeError
from .grid import (
    GridField,
    GridGeometry,
    dump_field,
    interior_l2_norm,
    load_field,
    max_norm_error,
    node_coordinate,
)
from .problems import (
    Problem,
    apply_boundary,
    catalog,
    default_geometry,
    problem_names,
    sample_source,
)
from .discretization import (
    apply_operator,
    cubic_from_neighbors,
    discrete_hessian,
    local_coefficients,
    quadratic_from_neighbors,
    residual,
)
from .rootfind import (
    RealRoots,
    cubic_real_roots,
    quadratic_real_roots,
    select_convex_root,
)
from .smoother import (
    SolveReport,
    SweepStats,
    gauss_seidel_solve,
    gauss_seidel_sweep,
)
from .transfer import (
    LevelPair,
    level_pair,
    prolong_cubic,
    prolong_trilinear,
    restrict_halfweight,
    restrict_inject,
)
from .multigrid import (
    LevelHierarchy,
    SolverConfig,
    estimate_order,
    fas_solve,
    fmg_solve,
    gauss_seidel_baseline_solve,
    relative_residual,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DataError", "DegenerateNodeError",
    "GridGeometry", "GridField", "node_coordinate", "interior_l2_norm",
    "max_norm_error", "dump_field", "load_field",
    "Problem", "catalog", "problem_names", "default_geometry",
    "sample_source", "apply_boundary",
    "local_coefficients", "discrete_hessian", "cubic_from_neighbors",
    "quadratic_from_neighbors", "apply_operator", "residual",
    "RealRoots", "cubic_real_roots", "quadratic_real_roots", "select_convex_root",
    "SweepStats", "SolveReport", "gauss_seidel_sweep", "gauss_seidel_solve",
    "LevelPair", "level_pair", "restrict_halfweight", "restrict_inject",
    "prolong_trilinear", "prolong_cubic",
    "SolverConfig", "LevelHierarchy", "fmg_solve", "fas_solve",
    "gauss_seidel_baseline_solve", "solve", "relative_residual", "estimate_order",
    "__version__",
]

"""Quadratic B-spline solvers for singularly perturbed two-point boundary
value problems on geometrically graded meshes.

The package solves ``-eps u'' + p u' + q u = f`` on [0, 1] with Dirichlet
data, using either a spline Galerkin or a subdomain (piecewise-constant test
function) discretisation, and ships the analysis tooling to measure errors,
tune the mesh grading ratio, and verify convergence orders.
"""

from .analysis import (
    ConvergenceRow,
    ConvergenceTable,
    ErrorReport,
    SigmaSearchResult,
    convergence_study,
    count_interior_extrema,
    golden_section_minimize,
    interior_extrema_count,
    linf_error_at_knots,
    linf_error_dense,
    optimize_sigma_golden,
    solve_on_unit_interval,
    sweep_sigma,
)
from .basis import (
    LocalBasisValues,
    eval_basis_local,
    evaluate_solution,
    evaluate_solution_at,
    nodal_values,
)
from .estimator import GradedSplineSolver
from .expressions import ExpressionError, parse_coefficient_expression, to_callable
from .galerkin import (
    ElementMatrices,
    Solution,
    apply_dirichlet_elimination,
    assemble_galerkin,
    closed_form_load_expx,
    element_matrices,
    solve_galerkin,
)
from .mesh import GradedMesh, build_graded_mesh, locate_element
from .numerics import (
    BandedSystem,
    QuadratureRule,
    SingularSystemError,
    gauss_legendre_rule,
    integrate_on_element,
    solve_banded,
    solve_dense_reference,
    solve_tridiagonal,
)
from .problem import (
    BVProblem,
    CATALOG,
    CoefficientPositivityWarning,
    lorenz_example,
    manufactured_problem,
    problem_from_expressions,
)
from .subdomain import SubdomainRow, solve_subdomain, subdomain_row

__version__ = "0.1.0"

__all__ = [
    "BVProblem",
    "BandedSystem",
    "CATALOG",
    "CoefficientPositivityWarning",
    "ConvergenceRow",
    "ConvergenceTable",
    "ElementMatrices",
    "ErrorReport",
    "ExpressionError",
    "GradedMesh",
    "GradedSplineSolver",
    "LocalBasisValues",
    "QuadratureRule",
    "SigmaSearchResult",
    "SingularSystemError",
    "Solution",
    "SubdomainRow",
    "apply_dirichlet_elimination",
    "assemble_galerkin",
    "build_graded_mesh",
    "closed_form_load_expx",
    "convergence_study",
    "count_interior_extrema",
    "element_matrices",
    "eval_basis_local",
    "evaluate_solution",
    "evaluate_solution_at",
    "gauss_legendre_rule",
    "golden_section_minimize",
    "integrate_on_element",
    "interior_extrema_count",
    "linf_error_at_knots",
    "linf_error_dense",
    "locate_element",
    "lorenz_example",
    "manufactured_problem",
    "nodal_values",
    "optimize_sigma_golden",
    "parse_coefficient_expression",
    "problem_from_expressions",
    "solve_banded",
    "solve_dense_reference",
    "solve_galerkin",
    "solve_on_unit_interval",
    "solve_subdomain",
    "solve_tridiagonal",
    "subdomain_row",
    "sweep_sigma",
    "to_callable",
    "__version__",
]

"""Error measurement, mesh-ratio search, and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import evaluate_solution
from .galerkin import Solution, solve_galerkin
from .mesh import build_graded_mesh
from .numerics import QuadratureRule
from .problem import BVProblem
from .subdomain import solve_subdomain
from .validation import check_choice, check_int, check_positive_scalar

SOLVERS = {
    "galerkin": solve_galerkin,
    "subdomain": solve_subdomain,
}

# Knot-value differences below this threshold are treated as flat when
# counting oscillations.
FLAT_TOL = 1e-12


@dataclass(frozen=True)
class ErrorReport:
    """Maximum-norm error over the knots, with the full pointwise table.

    ``pointwise`` has one row per knot with columns
    (x, exact, numeric, absolute error).
    """

    linf: float
    pointwise: np.ndarray
    argmax_x: float


@dataclass(frozen=True)
class SigmaSearchResult:
    """Outcome of a mesh-ratio search: evaluated grid and the best pair."""

    grid: tuple
    best_sigma: float
    best_linf: float
    method: str
    failures: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class ConvergenceRow:
    n_elements: int
    linf: float
    observed_order: Optional[float]


@dataclass(frozen=True)
class ConvergenceTable:
    """Errors under element doubling; each order compares a row to the coarser one."""

    rows: tuple
    method: str
    ratio: float


def linf_error_at_knots(solution: Solution, exact) -> ErrorReport:
    """Measure ``max_j |u(x_j) - u_N(x_j)|`` over the mesh knots."""
    if exact is None:
        raise ValueError("an exact solution evaluator is required to measure the error")
    x = solution.mesh.knots
    reference = np.array([float(exact(float(t))) for t in x])
    error = np.abs(reference - solution.knot_values)
    k = int(np.argmax(error))
    table = np.column_stack([x, reference, solution.knot_values, error])
    return ErrorReport(linf=float(error[k]), pointwise=table, argmax_x=float(x[k]))


def linf_error_dense(solution: Solution, exact, n_points: int = 201) -> ErrorReport:
    """Secondary diagnostic: error over uniform sample points.

    Knot-only norms can miss overshoot between knots; this samples the spline
    solution on a uniform grid of the domain instead.
    """
    if exact is None:
        raise ValueError("an exact solution evaluator is required to measure the error")
    n_points = check_int("n_points", n_points, minimum=2)
    mesh = solution.mesh
    x = np.linspace(mesh.a, mesh.b, n_points)
    reference = np.array([float(exact(float(t))) for t in x])
    numeric = evaluate_solution(mesh, solution.deltas, x)
    error = np.abs(reference - numeric)
    k = int(np.argmax(error))
    table = np.column_stack([x, reference, numeric, error])
    return ErrorReport(linf=float(error[k]), pointwise=table, argmax_x=float(x[k]))


def solve_on_unit_interval(
    problem: BVProblem,
    n_elements: int,
    ratio: float,
    method: str,
    rule: QuadratureRule | None = None,
) -> Solution:
    """Build the graded mesh on [0, 1] and run the selected solver."""
    check_choice("method", method, tuple(SOLVERS))
    mesh = build_graded_mesh(0.0, 1.0, n_elements, ratio)
    return SOLVERS[method](problem, mesh, rule)


def _linf_for_ratio(problem, n_elements, ratio, method, rule) -> float:
    solution = solve_on_unit_interval(problem, n_elements, ratio, method, rule)
    return linf_error_at_knots(solution, problem.exact).linf


def sweep_sigma(
    problem: BVProblem,
    n_elements: int,
    method: str,
    sigma_grid,
    rule: QuadratureRule | None = None,
) -> SigmaSearchResult:
    """Solve once per grid ratio and report the minimiser.

    Solve failures are recorded per ratio (with ``nan`` in the grid) without
    aborting the sweep; ties are broken toward the larger ratio.
    """
    if problem.exact is None:
        raise ValueError("sweep requires a problem with a known exact solution")
    grid = [check_positive_scalar("sigma", s) for s in sigma_grid]
    if not grid:
        raise ValueError("sigma grid must not be empty")
    check_choice("method", method, tuple(SOLVERS))

    entries = []
    failures = []
    for s in grid:
        try:
            err = _linf_for_ratio(problem, n_elements, s, method, rule)
        except ArithmeticError as exc:
            failures.append((s, str(exc)))
            err = math.nan
        entries.append((s, err))

    best = None
    for s, err in entries:
        if math.isnan(err):
            continue
        if best is None or err < best[1] or (err == best[1] and s > best[0]):
            best = (s, err)
    if best is None:
        raise ArithmeticError("every mesh ratio in the sweep failed to solve")
    return SigmaSearchResult(
        grid=tuple(entries),
        best_sigma=best[0],
        best_linf=best[1],
        method=method,
        failures=tuple(failures),
    )


def golden_section_minimize(fn, lo: float, hi: float, tol: float):
    """Golden-section search for a scalar minimum on [lo, hi].

    Returns ``(x, fn(x))`` at the final bracket center once the bracket is
    narrower than ``tol``.  Assumes a unimodal objective; callers that cannot
    guarantee unimodality should cross-check against a coarse grid.
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    inv_phi_sq = (3.0 - math.sqrt(5.0)) / 2.0
    a, b = float(lo), float(hi)
    width = b - a
    if width <= tol:
        mid = 0.5 * (a + b)
        return mid, fn(mid)

    steps = int(math.ceil(math.log(tol / width) / math.log(inv_phi)))
    c = a + inv_phi_sq * width
    d = a + inv_phi * width
    yc = fn(c)
    yd = fn(d)
    for _ in range(steps - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            width *= inv_phi
            c = a + inv_phi_sq * width
            yc = fn(c)
        else:
            a, c, yc = c, d, yd
            width *= inv_phi
            d = a + inv_phi * width
            yd = fn(d)
    mid = 0.5 * (a + d) if yc < yd else 0.5 * (c + b)
    return mid, fn(mid)


def optimize_sigma_golden(
    problem: BVProblem,
    n_elements: int,
    method: str,
    interval: tuple[float, float] = (0.5, 1.0),
    tol: float = 1e-3,
    rule: QuadratureRule | None = None,
) -> SigmaSearchResult:
    """Golden-section search on ratio -> error, guarded by a coarse grid.

    The error profile is not guaranteed to be unimodal in the ratio, so the
    search result is cross-checked against an 11-point grid over the interval
    and the better of the two is returned.  Solver failures inside the bracket
    evaluate as +inf, which shrinks the bracket away from the failing end.
    """
    if problem.exact is None:
        raise ValueError("tuning requires a problem with a known exact solution")
    check_choice("method", method, tuple(SOLVERS))
    lo, hi = float(interval[0]), float(interval[1])
    if not 0.0 < lo < hi <= 1.0:
        raise ValueError(f"interval must satisfy 0 < lo < hi <= 1, got ({lo!r}, {hi!r})")
    if tol < 1e-4:
        raise ValueError(f"tolerance must be at least 1e-4, got {tol!r}")

    cache: dict[float, float] = {}
    failures = []

    def objective(s: float) -> float:
        s = float(s)
        if s not in cache:
            try:
                cache[s] = _linf_for_ratio(problem, n_elements, s, method, rule)
            except ArithmeticError as exc:
                failures.append((s, str(exc)))
                cache[s] = math.inf
        return cache[s]

    golden_section_minimize(objective, lo, hi, tol)
    for s in np.linspace(lo, hi, 11):
        objective(float(s))

    best = None
    for s in sorted(cache):
        err = cache[s]
        if math.isinf(err):
            continue
        if best is None or err < best[1] or (err == best[1] and s > best[0]):
            best = (s, err)
    if best is None:
        raise ArithmeticError("every evaluated mesh ratio failed to solve")
    grid = tuple(
        (s, math.nan if math.isinf(cache[s]) else cache[s]) for s in sorted(cache)
    )
    return SigmaSearchResult(
        grid=grid,
        best_sigma=best[0],
        best_linf=best[1],
        method=method,
        failures=tuple(failures),
    )


def interior_extrema_count(values, tol: float = FLAT_TOL) -> int:
    """Count sign changes of consecutive differences, ignoring flat steps."""
    diffs = np.diff(np.asarray(values, dtype=float))
    diffs = diffs[np.abs(diffs) >= tol]
    if diffs.size < 2:
        return 0
    signs = np.sign(diffs)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def count_interior_extrema(solution: Solution) -> int:
    """Number of interior extrema in the knot values (oscillation diagnostic)."""
    return interior_extrema_count(solution.knot_values)


def convergence_study(
    problem: BVProblem,
    method: str,
    ratio: float,
    n_values,
    rule: QuadratureRule | None = None,
) -> ConvergenceTable:
    """Errors over a doubling sequence of element counts, with observed orders.

    Orders are omitted once either error in a pair sits at rounding level,
    where the ratio of errors stops measuring the discretisation.
    """
    if problem.exact is None:
        raise ValueError("a convergence study requires a known exact solution")
    check_choice("method", method, tuple(SOLVERS))
    counts = [check_int("n_elements", n, minimum=2) for n in n_values]
    if not counts:
        raise ValueError("n_values must not be empty")
    for coarse, fine in zip(counts, counts[1:]):
        if fine != 2 * coarse:
            raise ValueError(f"element counts must double, got {coarse} -> {fine}")

    rows = []
    previous = None
    for n in counts:
        err = _linf_for_ratio(problem, n, ratio, method, rule)
        order = None
        if previous is not None and min(previous, err) > 1e-13:
            order = math.log2(previous / err)
        rows.append(ConvergenceRow(n_elements=n, linf=err, observed_order=order))
        previous = err
    return ConvergenceTable(rows=tuple(rows), method=method, ratio=float(ratio))

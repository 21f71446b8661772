"""Subdomain Galerkin discretisation with piecewise-constant test functions.

Integrating the equation over one element and integrating the diffusion term
by parts gives the per-element balance

    -eps * (u'(x_right) - u'(x_left)) + p_m * (u(x_right) - u(x_left))
        + q_m * int(u) = int(f)

with p and q sampled once per element.  The spline calculus turns the three
left-hand terms into exact linear combinations of d_{m-1}, d_m, d_{m+1}:

    u'|  = (2 ratio / h_{m+1}) d_{m+1}
           - (2 ratio / h_{m+1} + 2 ratio / h_m) d_m + (2 ratio / h_m) d_{m-1}
    u|   = d_{m+1} + (ratio - 1) d_m - ratio * d_{m-1}
    int(u) = (ratio h_m / 3) d_{m-1} + (2 h_m (1 + ratio) / 3) d_m + (h_m / 3) d_{m+1}

so each element contributes one tridiagonal row.  Boundary elimination is the
same substitution used by the Galerkin route and leaves an n_elements-square
tridiagonal system solved with the Thomas recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import nodal_values
from .galerkin import Solution
from .mesh import GradedMesh
from .numerics import (
    DEFAULT_QUAD_ORDER,
    QuadratureRule,
    SingularSystemError,
    gauss_legendre_rule,
    integrate_on_element,
    solve_tridiagonal,
)
from .problem import BVProblem
from .validation import check_choice


@dataclass(frozen=True)
class SubdomainRow:
    """One element's balance equation: coefficients of d_{m-1}, d_m, d_{m+1}."""

    coeff_left: float
    coeff_center: float
    coeff_right: float
    rhs: float


def subdomain_row(
    problem: BVProblem,
    mesh: GradedMesh,
    m: int,
    rule: QuadratureRule,
    *,
    sample_at: str = "left",
    rhs_mode: str = "integral",
) -> SubdomainRow:
    """Build the balance row for element ``m``.

    ``sample_at`` chooses where the per-element samples p_m, q_m are taken
    ("left" endpoint by default, "midpoint" as an option for variable
    coefficients).  ``rhs_mode`` selects the consistent integrated source
    ("integral") or a point-sampled variant ("point", the source value at the
    left endpoint) kept for comparison.
    """
    check_choice("sample_at", sample_at, ("left", "midpoint"))
    check_choice("rhs_mode", rhs_mode, ("integral", "point"))
    if not 0 <= m < mesh.n_elements:
        raise ValueError(f"element index {m} outside 0..{mesh.n_elements - 1}")

    width = mesh.widths[m]
    x_left = mesh.knots[m]
    s = mesh.ratio
    eps = problem.epsilon
    x_sample = x_left if sample_at == "left" else x_left + 0.5 * width
    p_m = problem.p(x_sample)
    q_m = problem.q(x_sample)

    coeff_left = -2.0 * s * eps / width - s * p_m + (s / 3.0) * width * q_m
    coeff_center = (
        (2.0 * eps / width) * (1.0 + s)
        + (s - 1.0) * p_m
        + (2.0 / 3.0) * width * (1.0 + s) * q_m
    )
    coeff_right = -2.0 * eps / width + p_m + (width / 3.0) * q_m

    if rhs_mode == "integral":
        rhs = integrate_on_element(rule, width, lambda xi: problem.f(x_left + xi))
    else:
        rhs = float(problem.f(x_left))
    return SubdomainRow(
        coeff_left=float(coeff_left),
        coeff_center=float(coeff_center),
        coeff_right=float(coeff_right),
        rhs=float(rhs),
    )


def solve_subdomain(
    problem: BVProblem,
    mesh: GradedMesh,
    rule: QuadratureRule | None = None,
    *,
    sample_at: str = "left",
    rhs_mode: str = "integral",
) -> Solution:
    """Assemble one row per element, eliminate the boundary coefficients, solve."""
    if rule is None:
        rule = gauss_legendre_rule(DEFAULT_QUAD_ORDER)
    n = mesh.n_elements
    s = mesh.ratio
    sub = np.zeros(n - 1)
    diag = np.zeros(n)
    sup = np.zeros(n - 1)
    rhs = np.zeros(n)
    for m in range(n):
        row = subdomain_row(problem, mesh, m, rule, sample_at=sample_at, rhs_mode=rhs_mode)
        if m == 0:
            diag[0] = row.coeff_center - row.coeff_left / s
            sup[0] = row.coeff_right
            rhs[0] = row.rhs - row.coeff_left * problem.left_value / s
        elif m == n - 1:
            sub[m - 1] = row.coeff_left
            diag[m] = row.coeff_center - s * row.coeff_right
            rhs[m] = row.rhs - row.coeff_right * problem.right_value
        else:
            sub[m - 1] = row.coeff_left
            diag[m] = row.coeff_center
            sup[m] = row.coeff_right
            rhs[m] = row.rhs

    try:
        interior = solve_tridiagonal(sub, diag, sup, rhs)
    except SingularSystemError as exc:
        raise SingularSystemError(
            f"subdomain system hit a zero pivot (epsilon={problem.epsilon:g}, "
            f"ratio={s:g}, n_elements={n}); a boundary layer may be unresolved, "
            "try a smaller mesh ratio or more elements"
        ) from exc
    deltas = np.concatenate(
        (
            [(problem.left_value - interior[0]) / s],
            interior,
            [problem.right_value - s * interior[-1]],
        )
    )
    values, _ = nodal_values(mesh, deltas)
    return Solution(mesh=mesh, deltas=deltas, method="subdomain", knot_values=values)

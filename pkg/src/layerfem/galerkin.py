"""Quadratic B-spline Galerkin discretisation.

The weak form of ``-eps u'' + p u' + q u = f`` on one element, tested against
each of the three covering splines, reads

    eps * int(v' u') + int(p v u') + int(q v u) - eps * [v u'] = int(v f)

where ``[.]`` is the difference of endpoint values (integration by parts of
the diffusion term produces the positive derivative-product integral together
with that flux term).  Per element this yields 3x3 blocks: stiffness
``int(phi_i' phi_j')``, convection ``int(p phi_i phi_j')``, mass
``int(q phi_i phi_j)``, and the flux block ``phi_i phi_j' |`` evaluated at the
element ends.  Summed over elements the interior flux contributions cancel in
pairs because the basis is C1, leaving boundary contributions only at the two
domain ends.

Coefficient integrals are evaluated by quadrature with p and q inside the
integrand, so variable coefficients are supported; the closed forms below are
exact for the coefficient-free blocks and serve as independent test oracles.
The assembled matrix couples spline coefficients d_{-1} .. d_N and is
pentadiagonal.  Dirichlet data enters by eliminating d_{-1} and d_N through

    d_{-1} = (left_value - d_0) / ratio,    d_N = right_value - ratio * d_{N-1}

and dropping the two exterior test rows, which leaves a square pentadiagonal
system in d_0 .. d_{N-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import eval_basis_local, nodal_values
from .mesh import GradedMesh
from .numerics import (
    DEFAULT_QUAD_ORDER,
    BandedSystem,
    QuadratureRule,
    SingularSystemError,
    gauss_legendre_rule,
    solve_banded,
)
from .problem import BVProblem
from .validation import check_positive_scalar


@dataclass(frozen=True)
class ElementMatrices:
    """Local 3x3 blocks and load vector for one element.

    Rows and columns are ordered by the covering splines (left, center,
    right).  ``convection`` and ``mass`` carry the coefficients p and q inside
    the integrals; ``stiffness`` and ``boundary`` are coefficient-free and are
    scaled by epsilon at assembly time.
    """

    stiffness: np.ndarray
    convection: np.ndarray
    mass: np.ndarray
    boundary: np.ndarray
    load: np.ndarray


@dataclass(frozen=True)
class Solution:
    """Spline coefficients and knot values produced by one solve."""

    mesh: GradedMesh
    deltas: np.ndarray
    method: str
    knot_values: np.ndarray


def element_matrices(
    problem: BVProblem, mesh: GradedMesh, m: int, rule: QuadratureRule
) -> ElementMatrices:
    """Quadrature blocks for element ``m``; the flux block is evaluated exactly."""
    if not 0 <= m < mesh.n_elements:
        raise ValueError(f"element index {m} outside 0..{mesh.n_elements - 1}")
    width = mesh.widths[m]
    x_left = mesh.knots[m]
    ratio = mesh.ratio

    stiffness = np.zeros((3, 3))
    convection = np.zeros((3, 3))
    mass = np.zeros((3, 3))
    load = np.zeros(3)
    for node, weight in zip(rule.nodes, rule.weights):
        xi = width * node
        x = x_left + xi
        local = eval_basis_local(ratio, width, xi)
        values, derivs = local.values, local.derivatives
        scaled = width * weight
        stiffness += scaled * np.outer(derivs, derivs)
        convection += (scaled * problem.p(x)) * np.outer(values, derivs)
        mass += (scaled * problem.q(x)) * np.outer(values, values)
        load += (scaled * problem.f(x)) * values

    start = eval_basis_local(ratio, width, 0.0)
    end = eval_basis_local(ratio, width, width)
    boundary = np.outer(end.values, end.derivatives) - np.outer(start.values, start.derivatives)
    return ElementMatrices(
        stiffness=stiffness, convection=convection, mass=mass, boundary=boundary, load=load
    )


def closed_form_stiffness(ratio: float, width: float) -> np.ndarray:
    """Exact ``int(phi_i' phi_j')`` over one element.

    Row sums vanish identically because the three local derivatives sum to
    zero everywhere; any variant breaking that identity fails the quadrature
    cross-check.
    """
    s = ratio
    return (2.0 / (3.0 * width)) * np.array(
        [
            [2.0 * s * s, s * (1.0 - 2.0 * s), -s],
            [s * (1.0 - 2.0 * s), 2.0 * (s * s - s + 1.0), s - 2.0],
            [-s, s - 2.0, 2.0],
        ]
    )


def closed_form_convection(ratio: float) -> np.ndarray:
    """Exact ``int(phi_i phi_j')`` over one element (independent of the width)."""
    s = ratio
    return np.array(
        [
            [-s * s / 2.0, s * (3.0 * s - 1.0) / 6.0, s / 6.0],
            [-s * (3.0 * s + 5.0) / 6.0, (s * s - 1.0) / 2.0, 5.0 * s / 6.0 + 0.5],
            [-s / 6.0, s / 6.0 - 0.5, 0.5],
        ]
    )


def closed_form_mass(ratio: float, width: float) -> np.ndarray:
    """Exact ``int(phi_i phi_j)`` over one element; every entry is linear in the width."""
    s = ratio
    return (width / 30.0) * np.array(
        [
            [6.0 * s * s, s * (4.0 * s + 9.0), s],
            [s * (4.0 * s + 9.0), 16.0 * s * s + 22.0 * s + 16.0, 9.0 * s + 4.0],
            [s, 9.0 * s + 4.0, 6.0],
        ]
    )


def closed_form_boundary(ratio: float, width: float) -> np.ndarray:
    """Exact flux block ``phi_i phi_j' |`` from the endpoint basis values."""
    s = ratio
    return (1.0 / width) * np.array(
        [
            [2.0 * s * s, -2.0 * s * s, 0.0],
            [2.0 * s, -4.0 * s, 2.0 * s],
            [0.0, -2.0, 2.0],
        ]
    )


def closed_form_load_expx(ratio: float, width: float, x_left: float) -> np.ndarray:
    """Exact load ``int(phi_i exp(x_left + xi))`` over one element.

    Grouped around ``expm1`` so that narrow elements do not lose accuracy to
    cancellation; used as a test oracle for the quadrature load with an
    exponential source.
    """
    width = check_positive_scalar("width", width)
    s = ratio
    h = width
    em = math.expm1(h)
    eh = em + 1.0
    curvature = em - h  # exp(h) - 1 - h, of size h^2/2
    theta_left = s * (2.0 * curvature - h * h)
    theta_center = -2.0 * (s + 1.0) * em + 2.0 * h * (s + eh) - h * h * (1.0 - s * eh)
    theta_right = h * h * eh - 2.0 * (h * eh - em)
    return (math.exp(x_left) / (h * h)) * np.array([theta_left, theta_center, theta_right])


def assemble_galerkin(
    problem: BVProblem, mesh: GradedMesh, rule: QuadratureRule
) -> BandedSystem:
    """Assemble the pentadiagonal global system over all spline coefficients.

    Row and column ``k`` belong to spline ``k - 1``, so the system has
    ``n_elements + 2`` rows before boundary elimination.
    """
    n = mesh.n_elements + 2
    bands = np.zeros((5, n))
    rhs = np.zeros(n)
    eps = problem.epsilon
    for m in range(mesh.n_elements):
        local = element_matrices(problem, mesh, m, rule)
        block = eps * local.stiffness + local.convection + local.mass - eps * local.boundary
        for i in range(3):
            row = m + i
            rhs[row] += local.load[i]
            for j in range(3):
                bands[2 + i - j, m + j] += block[i, j]
    return BandedSystem(n=n, kl=2, ku=2, bands=bands, rhs=rhs)


def apply_dirichlet_elimination(
    system: BandedSystem, ratio: float, left_value: float, right_value: float
) -> BandedSystem:
    """Fold the boundary coefficients into the system and drop the exterior rows.

    Substitutes ``d_{-1} = (left_value - d_0) / ratio`` and
    ``d_N = right_value - ratio * d_{N-1}``, moves the known parts to the
    right-hand side, and removes the first and last rows and columns.
    """
    ratio = check_positive_scalar("ratio", ratio)
    if system.kl != 2 or system.ku != 2:
        raise ValueError("expected a pentadiagonal system from assemble_galerkin")
    n = system.n
    if n < 4:
        raise ValueError(f"system of dimension {n} has no interior unknowns")

    bands = system.bands.copy()
    rhs = system.rhs.copy()
    # Column 0 holds d_{-1}; only rows 0..2 reach it.
    for i in range(3):
        entry = bands[2 + i, 0]
        if entry != 0.0:
            bands[1 + i, 1] -= entry / ratio
            rhs[i] -= entry * left_value / ratio
    # Column n-1 holds d_N; only rows n-3..n-1 reach it.
    for i in range(n - 3, n):
        entry = bands[2 + i - (n - 1), n - 1]
        if entry != 0.0:
            bands[2 + i - (n - 2), n - 2] -= ratio * entry
            rhs[i] -= entry * right_value
    reduced = bands[:, 1 : n - 1].copy()
    size = n - 2
    # Cells of the slice that referenced the dropped rows are invalid now.
    for col in range(size):
        for band_row in range(5):
            row = band_row - 2 + col
            if row < 0 or row >= size:
                reduced[band_row, col] = 0.0
    return BandedSystem(n=size, kl=2, ku=2, bands=reduced, rhs=rhs[1 : n - 1].copy())


def solve_galerkin(
    problem: BVProblem, mesh: GradedMesh, rule: QuadratureRule | None = None
) -> Solution:
    """Assemble, eliminate, and solve; returns coefficients and knot values."""
    if rule is None:
        rule = gauss_legendre_rule(DEFAULT_QUAD_ORDER)
    system = assemble_galerkin(problem, mesh, rule)
    reduced = apply_dirichlet_elimination(
        system, mesh.ratio, problem.left_value, problem.right_value
    )
    try:
        interior = solve_banded(reduced)
    except SingularSystemError as exc:
        raise SingularSystemError(
            f"galerkin system is singular (epsilon={problem.epsilon:g}, "
            f"ratio={mesh.ratio:g}, n_elements={mesh.n_elements})"
        ) from exc
    s = mesh.ratio
    deltas = np.concatenate(
        (
            [(problem.left_value - interior[0]) / s],
            interior,
            [problem.right_value - s * interior[-1]],
        )
    )
    values, _ = nodal_values(mesh, deltas)
    return Solution(mesh=mesh, deltas=deltas, method="galerkin", knot_values=values)

"""Self-contained oracle suite behind ``layerfem verify``.

Each check cross-validates one part of the solver stack against an
independent route: quadrature blocks against hand-derived closed forms,
banded solvers against dense elimination, assembled flux terms against the
telescoping identity, and both discretisations against solutions they must
reproduce exactly.  All randomness is seeded, so the suite is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import solve_on_unit_interval
from .basis import eval_basis_local
from .galerkin import (
    assemble_galerkin,
    closed_form_boundary,
    closed_form_convection,
    closed_form_load_expx,
    closed_form_mass,
    closed_form_stiffness,
    element_matrices,
)
from .mesh import build_graded_mesh
from .numerics import (
    BandedSystem,
    gauss_legendre_rule,
    solve_banded,
    solve_dense_reference,
    solve_tridiagonal,
)
from .problem import BVProblem

DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _unit_coefficient_problem() -> BVProblem:
    return BVProblem(
        epsilon=1.0,
        p=lambda x: 1.0,
        q=lambda x: 1.0,
        f=lambda x: 1.0,
        left_value=0.0,
        right_value=0.0,
        name="unit",
    )


def _matrices_for(ratio: float, width: float, order: int = 8):
    """Element blocks on a two-element mesh whose first element has (close to)
    the requested width; p = q = 1 so the blocks are coefficient-free.
    Returns the blocks together with the exact constructed width."""
    mesh = build_graded_mesh(0.0, width * (1.0 + ratio), 2, ratio)
    local = element_matrices(_unit_coefficient_problem(), mesh, 0, gauss_legendre_rule(order))
    return local, float(mesh.widths[0])


def check_basis_identities(seed: int = DEFAULT_SEED) -> CheckResult:
    """Partition-of-unity style sums and cross-knot continuity on random data."""
    rng = np.random.default_rng(seed)
    worst_sum = 0.0
    worst_dsum = 0.0
    for _ in range(200):
        ratio = rng.uniform(0.3, 2.5)
        width = rng.uniform(0.01, 1.0)
        xi = rng.uniform(0.0, width)
        local = eval_basis_local(ratio, width, xi)
        worst_sum = max(worst_sum, abs(local.values.sum() - (1.0 + ratio)) / (1.0 + ratio))
        worst_dsum = max(worst_dsum, abs(local.derivatives.sum()) * width / ratio)

    worst_c1 = 0.0
    for _ in range(50):
        ratio = rng.uniform(0.5, 1.5)
        mesh = build_graded_mesh(0.0, 1.0, 8, ratio)
        deltas = rng.uniform(-2.0, 2.0, mesh.n_elements + 2)
        for k in range(1, mesh.n_elements):
            left = eval_basis_local(ratio, mesh.widths[k - 1], mesh.widths[k - 1])
            right = eval_basis_local(ratio, mesh.widths[k], 0.0)
            v_left = deltas[k - 1 : k + 2] @ left.values
            v_right = deltas[k : k + 3] @ right.values
            d_left = deltas[k - 1 : k + 2] @ left.derivatives
            d_right = deltas[k : k + 3] @ right.derivatives
            scale = max(1.0, abs(v_left), abs(d_left))
            worst_c1 = max(worst_c1, abs(v_left - v_right) / scale, abs(d_left - d_right) / scale)

    worst = max(worst_sum, worst_dsum, worst_c1)
    return CheckResult(
        name="basis identities (constant sum, derivative sum, C1 continuity)",
        passed=worst <= 1e-11,
        detail=f"largest scaled deviation {worst:.3e} (tolerance 1e-11)",
    )


def check_element_matrices(seed: int = DEFAULT_SEED) -> CheckResult:
    """Quadrature blocks against the closed forms on 50 random elements."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        ratio = rng.uniform(0.5, 2.0)
        local, width = _matrices_for(ratio, rng.uniform(0.05, 0.5))
        for got, want in (
            (local.stiffness, closed_form_stiffness(ratio, width)),
            (local.convection, closed_form_convection(ratio)),
            (local.mass, closed_form_mass(ratio, width)),
            (local.boundary, closed_form_boundary(ratio, width)),
        ):
            scale = max(1.0, float(np.max(np.abs(want))))
            worst = max(worst, float(np.max(np.abs(got - want))) / scale)
    return CheckResult(
        name="element matrices vs closed forms",
        passed=worst <= 1e-12,
        detail=f"largest scaled entry deviation {worst:.3e} (tolerance 1e-12)",
    )


def check_load_closed_form(seed: int = DEFAULT_SEED) -> CheckResult:
    """Quadrature load with an exponential source against the exact integrals."""
    rng = np.random.default_rng(seed)
    rule = gauss_legendre_rule(8)
    worst = 0.0
    for _ in range(20):
        ratio = rng.uniform(0.5, 2.0)
        mesh = build_graded_mesh(0.0, rng.uniform(0.05, 0.5) * (1.0 + ratio), 2, ratio)
        x_left = rng.uniform(0.0, 0.5)
        shifted = BVProblem(
            epsilon=1.0,
            p=lambda x: 1.0,
            q=lambda x: 1.0,
            f=lambda x, off=x_left: math.exp(off + x),
            name="exp-load",
        )
        local = element_matrices(shifted, mesh, 0, rule)
        want = closed_form_load_expx(ratio, float(mesh.widths[0]), x_left)
        scale = max(1.0, float(np.max(np.abs(want))))
        worst = max(worst, float(np.max(np.abs(local.load - want))) / scale)
    return CheckResult(
        name="exponential load vs closed form",
        passed=worst <= 1e-12,
        detail=f"largest scaled deviation {worst:.3e} (tolerance 1e-12)",
    )


def _random_banded_dominant(rng, n: int, kl: int, ku: int) -> np.ndarray:
    dense = np.zeros((n, n))
    for i in range(n):
        for j in range(max(0, i - kl), min(n, i + ku + 1)):
            dense[i, j] = rng.uniform(-1.0, 1.0)
    for i in range(n):
        off = np.sum(np.abs(dense[i])) - abs(dense[i, i])
        dense[i, i] = (off + 1.0) * (1.0 if rng.uniform() < 0.5 else -1.0)
    return dense


def check_linear_solvers(seed: int = DEFAULT_SEED) -> CheckResult:
    """Banded and tridiagonal routes against dense elimination, 100 systems."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 101))
        kl = int(rng.integers(0, 4))
        ku = int(rng.integers(0, 4))
        dense = _random_banded_dominant(rng, n, kl, ku)
        rhs = rng.uniform(-1.0, 1.0, n)
        x_dense = solve_dense_reference(dense, rhs)
        x_band = solve_banded(BandedSystem.from_dense(dense, kl, ku, rhs))
        worst = max(worst, float(np.max(np.abs(x_band - x_dense))))
        if kl <= 1 and ku <= 1:
            x_tri = solve_tridiagonal(
                np.diag(dense, -1), np.diag(dense), np.diag(dense, 1), rhs
            )
            worst = max(worst, float(np.max(np.abs(x_tri - x_dense))))
    return CheckResult(
        name="banded and tridiagonal solvers vs dense reference",
        passed=worst <= 1e-10,
        detail=f"largest max-norm difference {worst:.3e} over 100 systems (tolerance 1e-10)",
    )


def check_boundary_telescoping(seed: int = DEFAULT_SEED) -> CheckResult:
    """Accumulated per-element flux blocks equal the end-only flux matrix."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        ratio = rng.uniform(0.5, 1.6)
        mesh = build_graded_mesh(0.0, 1.0, 8, ratio)
        n = mesh.n_elements + 2
        accumulated = np.zeros((n, n))
        rule = gauss_legendre_rule(4)
        for m in range(mesh.n_elements):
            local = element_matrices(_unit_coefficient_problem(), mesh, m, rule)
            accumulated[m : m + 3, m : m + 3] += local.boundary

        end_only = np.zeros((n, n))
        first = eval_basis_local(ratio, mesh.widths[0], 0.0)
        last = eval_basis_local(ratio, mesh.widths[-1], mesh.widths[-1])
        end_only[0:3, 0:3] -= np.outer(first.values, first.derivatives)
        end_only[n - 3 : n, n - 3 : n] += np.outer(last.values, last.derivatives)

        scale = max(1.0, float(np.max(np.abs(end_only))))
        worst = max(worst, float(np.max(np.abs(accumulated - end_only))) / scale)
    return CheckResult(
        name="flux telescoping to the domain ends",
        passed=worst <= 1e-12,
        detail=f"largest scaled deviation {worst:.3e} (tolerance 1e-12)",
    )


def check_constant_reproduction() -> CheckResult:
    """Both methods must reproduce u == c exactly when c solves the equation."""
    constant = 3.5
    problem = BVProblem(
        epsilon=0.37,
        p=lambda x: 0.0,
        q=lambda x: 1.0,
        f=lambda x: constant,
        left_value=constant,
        right_value=constant,
        name="constant",
    )
    worst = 0.0
    for method in ("galerkin", "subdomain"):
        for ratio in (0.7, 1.0, 1.3):
            solution = solve_on_unit_interval(problem, 16, ratio, method)
            worst = max(worst, float(np.max(np.abs(solution.knot_values - constant))))
    return CheckResult(
        name="constant-solution reproduction",
        passed=worst <= 1e-10,
        detail=f"largest knot deviation {worst:.3e} (tolerance 1e-10)",
    )


def check_boundary_values(seed: int = DEFAULT_SEED) -> CheckResult:
    """Every solve must hit the Dirichlet data exactly at the two endpoints."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        left = rng.uniform(-2.0, 2.0)
        right = rng.uniform(-2.0, 2.0)
        problem = BVProblem(
            epsilon=rng.uniform(0.05, 1.5),
            p=lambda x: 1.0,
            q=lambda x: 1.0,
            f=lambda x: math.sin(3.0 * x),
            left_value=left,
            right_value=right,
            name="random-bc",
        )
        for method in ("galerkin", "subdomain"):
            solution = solve_on_unit_interval(problem, 12, rng.uniform(0.6, 1.4), method)
            worst = max(
                worst,
                abs(solution.knot_values[0] - left),
                abs(solution.knot_values[-1] - right),
            )
    return CheckResult(
        name="boundary values honoured",
        passed=worst <= 1e-12,
        detail=f"largest endpoint deviation {worst:.3e} (tolerance 1e-12)",
    )


def run_all_checks(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    return [
        check_basis_identities(seed),
        check_element_matrices(seed),
        check_load_closed_form(seed),
        check_linear_solvers(seed),
        check_boundary_telescoping(seed),
        check_constant_reproduction(),
        check_boundary_values(seed),
    ]

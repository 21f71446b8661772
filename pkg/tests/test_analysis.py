import math

import numpy as np
import pytest

import layerfem.analysis as analysis
from layerfem import (
    BVProblem,
    Solution,
    build_graded_mesh,
    convergence_study,
    count_interior_extrema,
    golden_section_minimize,
    interior_extrema_count,
    linf_error_at_knots,
    lorenz_example,
    manufactured_problem,
    optimize_sigma_golden,
    solve_on_unit_interval,
    sweep_sigma,
)


def fake_solution(knot_values, n=2):
    mesh = build_graded_mesh(0.0, 1.0, n, 1.0)
    return Solution(
        mesh=mesh,
        deltas=np.zeros(n + 2),
        method="galerkin",
        knot_values=np.asarray(knot_values, dtype=float),
    )


def test_linf_zero_for_identical_values():
    solution = fake_solution([0.0, 1.0, 0.0])
    table = {0.0: 0.0, 0.5: 1.0, 1.0: 0.0}
    report = linf_error_at_knots(solution, lambda x: table[x])
    assert report.linf == 0.0


def test_linf_hand_case():
    solution = fake_solution([0.0, 0.9, 0.05])
    table = {0.0: 0.0, 0.5: 1.0, 1.0: 0.0}
    report = linf_error_at_knots(solution, lambda x: table[x])
    assert report.linf == pytest.approx(0.1, rel=1e-14)
    assert report.argmax_x == 0.5
    assert report.pointwise.shape == (3, 4)


def test_linf_requires_exact():
    solution = fake_solution([0.0, 1.0, 0.0])
    with pytest.raises(ValueError, match="exact"):
        linf_error_at_knots(solution, None)


def test_linf_consistent_with_pointwise_table():
    problem = lorenz_example(0.5)
    solution = solve_on_unit_interval(problem, 64, 1.0, "galerkin")
    report = linf_error_at_knots(solution, problem.exact)
    assert 0.0 < report.linf < 1e-3
    assert report.argmax_x > 0.9  # the layer sits at the right boundary
    assert report.linf == float(np.max(report.pointwise[:, 3]))
    shuffled = report.pointwise[::-1]
    assert float(np.max(shuffled[:, 3])) == report.linf


def test_sweep_singleton_equals_direct_solve():
    problem = lorenz_example(0.5)
    result = sweep_sigma(problem, 16, "galerkin", [1.0])
    direct = linf_error_at_knots(
        solve_on_unit_interval(problem, 16, 1.0, "galerkin"), problem.exact
    )
    assert result.best_sigma == 1.0
    assert result.best_linf == direct.linf
    assert result.grid == ((1.0, direct.linf),)


def test_sweep_finds_graded_mesh_improvement():
    problem = lorenz_example(0.01)
    grid = [0.5 + 0.05 * k for k in range(11)]  # 0.50 .. 1.00
    result = sweep_sigma(problem, 20, "galerkin", grid)
    uniform = dict(result.grid)[1.0]
    assert result.best_linf < uniform
    assert result.best_sigma < 1.0


def test_sweep_manufactured_prefers_grading():
    problem = manufactured_problem(0.01)
    grid = [0.5 + 0.05 * k for k in range(11)]
    result = sweep_sigma(problem, 20, "subdomain", grid)
    assert result.best_sigma < 1.0


def test_sweep_records_failures_without_aborting(monkeypatch):
    def flaky(problem, n_elements, ratio, method, rule):
        if ratio < 0.7:
            raise ArithmeticError("synthetic failure")
        return (ratio - 0.8) ** 2

    monkeypatch.setattr(analysis, "_linf_for_ratio", flaky)
    result = sweep_sigma(lorenz_example(0.5), 8, "galerkin", [0.5, 0.6, 0.8, 0.9])
    assert [s for s, _ in result.failures] == [0.5, 0.6]
    assert math.isnan(result.grid[0][1]) and math.isnan(result.grid[1][1])
    assert result.best_sigma == 0.8


def test_sweep_ties_break_toward_larger_ratio(monkeypatch):
    monkeypatch.setattr(analysis, "_linf_for_ratio", lambda *args: 1.0)
    result = sweep_sigma(lorenz_example(0.5), 8, "galerkin", [0.5, 0.75, 1.0])
    assert result.best_sigma == 1.0


def test_sweep_validation():
    problem = lorenz_example(0.5)
    with pytest.raises(ValueError, match="empty"):
        sweep_sigma(problem, 8, "galerkin", [])
    with pytest.raises(ValueError, match="method"):
        sweep_sigma(problem, 8, "collocation", [1.0])
    no_exact = BVProblem(epsilon=0.5, p=lambda x: 1.0, q=lambda x: 1.0, f=lambda x: 1.0)
    with pytest.raises(ValueError, match="exact"):
        sweep_sigma(no_exact, 8, "galerkin", [1.0])


def test_golden_section_on_quadratic_stub():
    best, value = golden_section_minimize(lambda s: (s - 0.7) ** 2, 0.5, 1.0, 1e-4)
    assert abs(best - 0.7) <= 1e-3
    assert value <= 1e-6


def test_golden_section_tiny_bracket():
    best, _ = golden_section_minimize(lambda s: s, 0.5, 0.5 + 1e-9, 1e-4)
    assert best == pytest.approx(0.5, abs=1e-6)


def test_optimize_beats_uniform_mesh():
    problem = lorenz_example(0.01)
    result = optimize_sigma_golden(problem, 20, "galerkin", (0.5, 1.0), 1e-3)
    uniform = linf_error_at_knots(
        solve_on_unit_interval(problem, 20, 1.0, "galerkin"), problem.exact
    ).linf
    assert result.best_linf <= 0.5 * uniform
    # the returned minimum never exceeds any evaluated grid value
    finite = [err for _, err in result.grid if not math.isnan(err)]
    assert result.best_linf <= min(finite) + 1e-12


def test_optimize_validation():
    problem = lorenz_example(0.5)
    with pytest.raises(ValueError, match="interval"):
        optimize_sigma_golden(problem, 8, "galerkin", (0.0, 1.0), 1e-3)
    with pytest.raises(ValueError, match="interval"):
        optimize_sigma_golden(problem, 8, "galerkin", (0.9, 0.5), 1e-3)
    with pytest.raises(ValueError, match="tolerance"):
        optimize_sigma_golden(problem, 8, "galerkin", (0.5, 1.0), 1e-5)


def test_optimize_shrinks_away_from_failures(monkeypatch):
    def flaky(problem, n_elements, ratio, method, rule):
        if ratio < 0.6:
            raise ArithmeticError("synthetic failure")
        return (ratio - 0.8) ** 2

    monkeypatch.setattr(analysis, "_linf_for_ratio", flaky)
    result = optimize_sigma_golden(lorenz_example(0.5), 8, "galerkin", (0.5, 1.0), 1e-3)
    assert abs(result.best_sigma - 0.8) <= 1e-2
    assert result.failures  # the failing end was probed and recorded


def test_extrema_counting_basics():
    assert interior_extrema_count([0.0, 0.1, 0.2, 0.5]) == 0
    assert interior_extrema_count([0.0, 1.0, 0.0, 1.0, 0.0]) == 3
    assert interior_extrema_count([3.0, 2.0, 1.0]) == 0
    # alternating sequence of length k has k - 2 interior extrema
    for k in (4, 7, 10):
        values = [(-1.0) ** j for j in range(k)]
        assert interior_extrema_count(values) == k - 2


def test_extrema_ignores_flat_steps():
    assert interior_extrema_count([0.0, 1e-15, 1.0, 2.0]) == 0
    assert interior_extrema_count([0.0, 1e-13, 0.0, 1.0]) == 0


def test_exact_layer_profile_has_single_maximum():
    problem = lorenz_example(0.01)
    mesh = build_graded_mesh(0.0, 1.0, 20, 0.7)
    values = [problem.exact(float(x)) for x in mesh.knots]
    assert interior_extrema_count(values) == 1
    solution = fake_solution(values, n=20)
    assert count_interior_extrema(solution) == 1


def test_convergence_study_orders():
    problem = lorenz_example(0.5)
    table = convergence_study(problem, "galerkin", 1.0, [32, 64, 128])
    assert table.rows[0].observed_order is None
    assert all(row.observed_order >= 1.8 for row in table.rows[1:])

    table = convergence_study(problem, "subdomain", 1.0, [32, 64, 128])
    assert all(row.observed_order >= 1.5 for row in table.rows[1:])


def test_convergence_study_constant_problem_omits_orders():
    problem = BVProblem(
        epsilon=0.3,
        p=lambda x: 0.0,
        q=lambda x: 1.0,
        f=lambda x: 2.0,
        left_value=2.0,
        right_value=2.0,
        exact=lambda x: 2.0,
    )
    table = convergence_study(problem, "galerkin", 1.0, [4, 8, 16])
    assert all(row.linf <= 1e-10 for row in table.rows)
    assert all(row.observed_order is None for row in table.rows)


def test_convergence_study_validation():
    problem = lorenz_example(0.5)
    with pytest.raises(ValueError, match="double"):
        convergence_study(problem, "galerkin", 1.0, [32, 48])
    no_exact = BVProblem(epsilon=0.5, p=lambda x: 1.0, q=lambda x: 1.0, f=lambda x: 1.0)
    with pytest.raises(ValueError, match="exact"):
        convergence_study(no_exact, "galerkin", 1.0, [32, 64])

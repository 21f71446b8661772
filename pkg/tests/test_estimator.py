import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from layerfem import (
    GradedSplineSolver,
    evaluate_solution_at,
    linf_error_at_knots,
    lorenz_example,
)
from layerfem.problem import BVProblem


def test_fit_returns_self_and_sets_attributes():
    problem = lorenz_example(0.5)
    solver = GradedSplineSolver(n_elements=32)
    assert solver.fit(problem) is solver
    assert solver.mesh_.n_elements == 32
    assert solver.deltas_.shape == (34,)
    assert solver.knot_values_.shape == (33,)
    assert solver.linf_error_ > 0.0


def test_predict_matches_pointwise_evaluation():
    problem = lorenz_example(0.5)
    solver = GradedSplineSolver(n_elements=16, mesh_ratio=0.9).fit(problem)
    points = [0.0, 0.21, 0.5, 0.93, 1.0]
    got = solver.predict(points)
    want = [evaluate_solution_at(solver.mesh_, solver.deltas_, x) for x in points]
    np.testing.assert_allclose(got, want, rtol=0, atol=0)


def test_predict_accepts_scalar_and_column_inputs():
    solver = GradedSplineSolver(n_elements=8).fit(lorenz_example(0.5))
    scalar = solver.predict(0.5)
    column = solver.predict(np.array([[0.5]]))
    assert scalar.shape == (1,)
    assert column.shape == (1,)
    assert scalar[0] == column[0]


def test_predict_rejects_matrix_input():
    solver = GradedSplineSolver(n_elements=8).fit(lorenz_example(0.5))
    with pytest.raises(ValueError, match="single-column"):
        solver.predict(np.zeros((3, 2)))


def test_boundary_values_in_fitted_solution():
    solver = GradedSplineSolver(method="subdomain", n_elements=24).fit(lorenz_example(0.5))
    assert abs(solver.knot_values_[0]) <= 1e-12
    assert abs(solver.knot_values_[-1]) <= 1e-12


def test_score_is_negative_linf():
    problem = lorenz_example(0.5)
    solver = GradedSplineSolver(n_elements=32).fit(problem)
    report = linf_error_at_knots(solver.solution_, problem.exact)
    assert solver.score() == -report.linf


def test_score_requires_exact_solution():
    problem = BVProblem(epsilon=0.5, p=lambda x: 1.0, q=lambda x: 1.0, f=lambda x: 1.0)
    solver = GradedSplineSolver(n_elements=8).fit(problem)
    assert solver.linf_error_ is None
    with pytest.raises(ValueError, match="exact"):
        solver.score()


def test_get_set_params_round_trip():
    solver = GradedSplineSolver(method="subdomain", n_elements=10, mesh_ratio=0.8, quad_order=4)
    params = solver.get_params()
    assert params == {
        "method": "subdomain",
        "n_elements": 10,
        "mesh_ratio": 0.8,
        "quad_order": 4,
    }
    solver.set_params(mesh_ratio=0.6)
    assert solver.mesh_ratio == 0.6


def test_clone_preserves_hyperparameters():
    solver = GradedSplineSolver(method="subdomain", mesh_ratio=0.7)
    copy = clone(solver)
    assert copy.get_params() == solver.get_params()


def test_unfitted_predict_raises():
    with pytest.raises(NotFittedError):
        GradedSplineSolver().predict(0.5)


def test_fit_validates_inputs():
    problem = lorenz_example(0.5)
    with pytest.raises(TypeError, match="BVProblem"):
        GradedSplineSolver().fit("not a problem")
    with pytest.raises(ValueError, match="method"):
        GradedSplineSolver(method="collocation").fit(problem)
    with pytest.raises(ValueError, match="n_elements"):
        GradedSplineSolver(n_elements=1).fit(problem)
    with pytest.raises(ValueError, match="mesh_ratio"):
        GradedSplineSolver(mesh_ratio=-1.0).fit(problem)
    with pytest.raises(ValueError, match="quad_order"):
        GradedSplineSolver(quad_order=99).fit(problem)


def test_mesh_ratio_sweep_through_estimator_api():
    problem = lorenz_example(0.01)
    scores = {
        ratio: GradedSplineSolver(n_elements=20, mesh_ratio=ratio).fit(problem).score()
        for ratio in (0.7, 1.0)
    }
    assert scores[0.7] > scores[1.0]  # graded mesh wins (less negative score)

"""Two-point boundary value problems of convection-diffusion type.

The equation is

    -epsilon * u'' + p(x) * u' + q(x) * u = f(x)   on [0, 1]

with Dirichlet data ``u(0) = left_value`` and ``u(1) = right_value``.  The
diffusion parameter ``epsilon`` is small and positive; for small values the
solution develops a thin layer whose width scales with ``epsilon``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .expressions import parse_coefficient_expression, to_callable
from .validation import check_positive_scalar


class CoefficientPositivityWarning(UserWarning):
    """Diagnostic for coefficients that violate the positivity assumptions."""


@dataclass(frozen=True)
class BVProblem:
    """Coefficients, boundary data, and an optional exact solution.

    Evaluators take a float in [0, 1] and return a float; they must be
    re-entrant since solves may share a problem across workers.  The classical
    well-posedness assumptions ask for strictly positive p and q; violations
    are reported with :class:`CoefficientPositivityWarning` at construction
    but are not rejected, because useful benchmarks (convection only, q == 0)
    break them.
    """

    epsilon: float
    p: Callable[[float], float]
    q: Callable[[float], float]
    f: Callable[[float], float]
    left_value: float = 0.0
    right_value: float = 0.0
    exact: Optional[Callable[[float], float]] = None
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "epsilon", check_positive_scalar("epsilon", self.epsilon))
        object.__setattr__(self, "left_value", float(self.left_value))
        object.__setattr__(self, "right_value", float(self.right_value))
        samples = np.linspace(0.0, 1.0, 101)
        for label in ("p", "q"):
            fn = getattr(self, label)
            values = [float(fn(float(t))) for t in samples]
            low = min(values)
            if low <= 0.0:
                at = samples[values.index(low)]
                warnings.warn(
                    f"{label}(x) is not strictly positive on [0, 1] "
                    f"(min {low:.6g} at x = {at:.3g}); classical assumptions "
                    "for this problem class do not hold",
                    CoefficientPositivityWarning,
                    stacklevel=3,
                )


def lorenz_example(epsilon: float) -> BVProblem:
    """Convection-dominated benchmark with a layer at the right boundary.

        -epsilon * u'' + u' = exp(x),   u(0) = u(1) = 0

    The closed-form solution is

        u(x) = (exp(x) - (1 - E1 + (e - 1) * exp((x-1)/epsilon)) / (1 - E0))
               / (1 - epsilon)

    with ``E0 = exp(-1/epsilon)`` and ``E1 = exp(1 - 1/epsilon)``.  All
    exponents are non-positive for epsilon < 1, so for very small epsilon the
    exponentials underflow to zero, which is the correct limit rather than an
    error.  The formula is singular at epsilon = 1 and that value is rejected.
    """
    eps = check_positive_scalar("epsilon", epsilon)
    if eps == 1.0:
        raise ValueError("epsilon = 1 makes the closed-form solution singular; pick a nearby value")
    e0 = math.exp(-1.0 / eps)
    e1 = math.exp(1.0 - 1.0 / eps)
    growth = math.e - 1.0
    denominator = 1.0 - e0

    def exact(x: float) -> float:
        layer = math.exp((x - 1.0) / eps)
        return (math.exp(x) - (1.0 - e1 + growth * layer) / denominator) / (1.0 - eps)

    return BVProblem(
        epsilon=eps,
        p=lambda x: 1.0,
        q=lambda x: 0.0,
        f=math.exp,
        left_value=0.0,
        right_value=0.0,
        exact=exact,
        name="lorenz",
    )


def manufactured_problem(epsilon: float) -> BVProblem:
    """Problem built backwards from the chosen solution ``x (1 - exp((x-1)/eps))``.

    With ``p = q = 1`` the source term is assembled from the hand-coded
    derivatives, so the exact solution is known by construction.  The layer
    again sits at the right boundary.
    """
    eps = check_positive_scalar("epsilon", epsilon)

    def layer(x: float) -> float:
        return math.exp((x - 1.0) / eps)

    def exact(x: float) -> float:
        return x * (1.0 - layer(x))

    def exact_d1(x: float) -> float:
        return 1.0 - (1.0 + x / eps) * layer(x)

    def exact_d2(x: float) -> float:
        return -(2.0 / eps + x / eps**2) * layer(x)

    def source(x: float) -> float:
        return -eps * exact_d2(x) + exact_d1(x) + exact(x)

    return BVProblem(
        epsilon=eps,
        p=lambda x: 1.0,
        q=lambda x: 1.0,
        f=source,
        left_value=0.0,
        right_value=0.0,
        exact=exact,
        name="manufactured",
    )


CATALOG = {
    "lorenz": lorenz_example,
    "manufactured": manufactured_problem,
}


def problem_from_expressions(
    epsilon: float,
    p: str,
    q: str,
    f: str,
    exact: str | None = None,
    left_value: float = 0.0,
    right_value: float = 0.0,
) -> BVProblem:
    """Build a problem from expression strings (see :mod:`layerfem.expressions`)."""
    evaluators = {}
    for label, text in (("p", p), ("q", q), ("f", f)):
        evaluators[label] = to_callable(parse_coefficient_expression(text))
    exact_fn = to_callable(parse_coefficient_expression(exact)) if exact else None
    return BVProblem(
        epsilon=epsilon,
        p=evaluators["p"],
        q=evaluators["q"],
        f=evaluators["f"],
        left_value=left_value,
        right_value=right_value,
        exact=exact_fn,
        name="custom",
    )

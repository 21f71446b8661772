"""Quadratic B-spline basis on geometrically graded elements.

On element ``m`` with width ``h`` and local coordinate ``xi = x - knots[m]``
the three overlapping splines take the values

    left   (h - xi)^2 * ratio / h^2
    center (h^2 + 2 h ratio xi - (1 + ratio) xi^2) / h^2
    right  xi^2 / h^2

Their sum is the constant ``1 + ratio`` and the sum of their derivatives is
zero.  At a knot the spline combination ``u = sum_m d_m Q_m`` reduces to

    u(x_m)  = ratio * d_{m-1} + d_m
    u'(x_m) = (2 ratio / h_m) * (d_m - d_{m-1})

with ``h_m`` the width of the element to the right of the knot.  Because
consecutive widths are related by the mesh ratio, values and derivatives agree
from both sides of every interior knot, so the basis is C1 on its mesh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import GradedMesh, locate_element
from .validation import as_point_array


@dataclass(frozen=True)
class LocalBasisValues:
    """Values and first derivatives of the three splines covering one element.

    Entries are ordered (left, center, right); derivatives carry units of
    one over length.
    """

    values: np.ndarray
    derivatives: np.ndarray


def eval_basis_local(ratio: float, width: float, xi: float) -> LocalBasisValues:
    """Evaluate the three local splines and their derivatives at ``xi``."""
    if not width > 0.0:
        raise ValueError(f"element width must be positive, got {width!r}")
    if xi < 0.0 or xi > width:
        raise ValueError(f"local coordinate {xi!r} lies outside [0, {width!r}]")
    h2 = width * width
    values = np.array(
        [
            ratio * (width - xi) ** 2,
            h2 + 2.0 * width * ratio * xi - (1.0 + ratio) * xi * xi,
            xi * xi,
        ]
    ) / h2
    derivatives = np.array(
        [
            -2.0 * ratio * (width - xi),
            2.0 * width * ratio - 2.0 * (1.0 + ratio) * xi,
            2.0 * xi,
        ]
    ) / h2
    return LocalBasisValues(values=values, derivatives=derivatives)


def check_coefficients(mesh: GradedMesh, deltas) -> np.ndarray:
    """Validate a spline coefficient vector against the mesh size.

    Coefficients are indexed -1 .. n_elements, so the array holds
    ``n_elements + 2`` entries; ``deltas[k]`` is the coefficient of spline
    ``k - 1``.
    """
    arr = np.asarray(deltas, dtype=float)
    expected = mesh.n_elements + 2
    if arr.shape != (expected,):
        raise ValueError(
            f"coefficient vector must have shape ({expected},) for this mesh, got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficient vector contains non-finite entries")
    return arr


def nodal_values(mesh: GradedMesh, deltas) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(u, du)`` at every knot for the given coefficients.

    The derivative at each knot uses the element to its right; the final knot
    has no such element, so the last element's right-end relation
    ``(2 / h_last) * (d_N - d_{N-1})`` is used there.
    """
    arr = check_coefficients(mesh, deltas)
    s = mesh.ratio
    u = s * arr[:-1] + arr[1:]
    du = np.empty(mesh.n_elements + 1)
    du[:-1] = 2.0 * s * (arr[1:-1] - arr[:-2]) / mesh.widths
    du[-1] = 2.0 * (arr[-1] - arr[-2]) / mesh.widths[-1]
    return u, du


def evaluate_solution_at(mesh: GradedMesh, deltas, x: float) -> float:
    """Evaluate the spline combination at a single point of ``[a, b]``."""
    arr = check_coefficients(mesh, deltas)
    m = locate_element(mesh, x)
    local = eval_basis_local(mesh.ratio, mesh.widths[m], float(x) - mesh.knots[m])
    return float(arr[m : m + 3] @ local.values)


def evaluate_solution(mesh: GradedMesh, deltas, xs) -> np.ndarray:
    """Vectorised :func:`evaluate_solution_at` over a 1-d array of points."""
    arr = check_coefficients(mesh, deltas)
    pts = as_point_array(xs)
    out = np.empty(pts.size)
    for k, x in enumerate(pts):
        m = locate_element(mesh, x)
        local = eval_basis_local(mesh.ratio, mesh.widths[m], x - mesh.knots[m])
        out[k] = arr[m : m + 3] @ local.values
    return out

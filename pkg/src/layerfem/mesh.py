"""Geometrically graded partitions of an interval.

Element widths form a geometric progression ``widths[m] = ratio * widths[m-1]``.
Ratios below one concentrate elements near the right endpoint, which is where
the boundary layers of the shipped benchmark problems sit; ratio one gives the
uniform partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_int, check_positive_scalar

# Below this distance from ratio 1 the closed form (1 - ratio^N) cancels
# catastrophically, so the uniform-width formula is used instead.
_UNIFORM_TOL = 1e-12


@dataclass(frozen=True)
class GradedMesh:
    """Partition of ``[a, b]`` into ``n_elements`` geometrically graded elements.

    Attributes
    ----------
    a, b : float
        Interval endpoints with ``a < b``.
    n_elements : int
        Number of elements (at least 2).
    ratio : float
        Common ratio of successive element widths.
    first_width : float
        Width of the leftmost element.
    knots : ndarray, shape (n_elements + 1,)
        Strictly increasing, with ``knots[0] == a`` and ``knots[-1] == b``.
    widths : ndarray, shape (n_elements,)
        Differences of consecutive knots.
    """

    a: float
    b: float
    n_elements: int
    ratio: float
    first_width: float
    knots: np.ndarray
    widths: np.ndarray


def build_graded_mesh(a: float, b: float, n_elements: int, ratio: float) -> GradedMesh:
    """Construct a geometrically graded mesh on ``[a, b]``.

    The first width solves ``h0 * (1 + ratio + ... + ratio^(N-1)) = b - a``,
    evaluated through the stable closed form ``(b - a)(1 - ratio)/(1 - ratio^N)``
    away from ratio one.  The final knot is snapped onto ``b`` exactly, folding
    the accumulated rounding residual into the last width.
    """
    n_elements = check_int("n_elements", n_elements, minimum=2)
    ratio = check_positive_scalar("ratio", ratio)
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise ValueError(f"interval endpoints must satisfy a < b, got a={a!r}, b={b!r}")

    length = b - a
    if abs(ratio - 1.0) <= _UNIFORM_TOL:
        first_width = length / n_elements
        knots = a + length * np.arange(n_elements + 1, dtype=float) / n_elements
    else:
        denominator = 1.0 - ratio**n_elements
        first_width = length * (1.0 - ratio) / denominator
        # closed-form partial sums instead of running accumulation: each knot
        # is accurate to its own rounding and no drift lands in the last width
        powers = ratio ** np.arange(n_elements + 1, dtype=float)
        knots = a + length * (1.0 - powers) / denominator
    if not (first_width > 0.0 and math.isfinite(first_width)):
        raise ValueError(
            f"grading ratio {ratio!r} with {n_elements} elements produces a "
            f"degenerate first width {first_width!r}"
        )
    knots[0] = a
    knots[-1] = b
    widths = np.diff(knots)
    if np.any(widths <= 0.0):
        raise ValueError(
            f"grading ratio {ratio!r} with {n_elements} elements underflows: "
            "some element widths are not positive"
        )
    knots.setflags(write=False)
    widths.setflags(write=False)
    return GradedMesh(
        a=a,
        b=b,
        n_elements=n_elements,
        ratio=ratio,
        first_width=first_width,
        knots=knots,
        widths=widths,
    )


def locate_element(mesh: GradedMesh, x: float) -> int:
    """Return the index ``m`` of the element whose span contains ``x``.

    Knot-coincident points belong to the element starting at that knot,
    except ``x == b`` which belongs to the last element.
    """
    x = float(x)
    if not (mesh.a <= x <= mesh.b):
        raise ValueError(f"x={x!r} lies outside the mesh interval [{mesh.a!r}, {mesh.b!r}]")
    m = int(np.searchsorted(mesh.knots, x, side="right")) - 1
    return min(max(m, 0), mesh.n_elements - 1)

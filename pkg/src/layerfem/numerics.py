"""Quadrature rules and banded linear solvers.

Three solve routes are provided: the Thomas recurrence for tridiagonal
systems, LAPACK banded LU (partial pivoting within the band) for general
banded systems, and a hand-rolled dense Gaussian elimination that serves as
an independent reference in tests and in ``layerfem verify``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import LinAlgError
from scipy.linalg import solve_banded as _lapack_solve_banded

from .validation import check_int, check_positive_scalar

DEFAULT_QUAD_ORDER = 8
MAX_QUAD_ORDER = 16

_PIVOT_FLOOR = 1e-300


class SingularSystemError(ArithmeticError):
    """Raised when a linear system cannot be solved to working precision."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on the reference interval [0, 1]."""

    nodes: np.ndarray
    weights: np.ndarray


def gauss_legendre_rule(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1], exact for polynomials of degree 2*order - 1."""
    order = check_int("order", order, minimum=1)
    if order > MAX_QUAD_ORDER:
        raise ValueError(f"order must be at most {MAX_QUAD_ORDER}, got {order}")
    nodes, weights = leggauss(order)
    nodes = (nodes + 1.0) / 2.0
    weights = weights / 2.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights)


def integrate_on_element(rule: QuadratureRule, width: float, integrand) -> float:
    """Integrate ``integrand(xi)`` over ``[0, width]`` with the mapped rule."""
    width = check_positive_scalar("width", width)
    total = 0.0
    for node, weight in zip(rule.nodes, rule.weights):
        xi = width * node
        value = float(integrand(xi))
        if not math.isfinite(value):
            raise ArithmeticError(
                f"integrand returned non-finite value {value!r} at local coordinate {xi!r}"
            )
        total += weight * value
    return width * total


def solve_tridiagonal(sub, diag, sup, rhs) -> np.ndarray:
    """Solve a tridiagonal system with the Thomas recurrence (no pivoting).

    ``sub`` and ``sup`` hold the n-1 off-diagonal entries, ``diag`` and
    ``rhs`` the n diagonal and right-hand-side entries.
    """
    sub = np.asarray(sub, dtype=float)
    diag = np.asarray(diag, dtype=float)
    sup = np.asarray(sup, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = diag.size
    if n < 1:
        raise ValueError("system must have at least one row")
    if sub.size != n - 1 or sup.size != n - 1 or rhs.size != n:
        raise ValueError(
            f"inconsistent lengths: diag {n}, sub {sub.size}, sup {sup.size}, rhs {rhs.size}"
        )

    scaled_sup = np.empty(max(n - 1, 0))
    scratch = np.empty(n)
    pivot = diag[0]
    if abs(pivot) < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot in row 0")
    if n > 1:
        scaled_sup[0] = sup[0] / pivot
    scratch[0] = rhs[0] / pivot
    for i in range(1, n):
        pivot = diag[i] - sub[i - 1] * scaled_sup[i - 1]
        if abs(pivot) < _PIVOT_FLOOR:
            raise SingularSystemError(f"zero pivot in row {i}")
        if i < n - 1:
            scaled_sup[i] = sup[i] / pivot
        scratch[i] = (rhs[i] - sub[i - 1] * scratch[i - 1]) / pivot

    x = np.empty(n)
    x[-1] = scratch[-1]
    for i in range(n - 2, -1, -1):
        x[i] = scratch[i] - scaled_sup[i] * x[i + 1]
    return x


@dataclass
class BandedSystem:
    """General banded matrix in LAPACK band storage, plus a right-hand side.

    ``bands`` has shape ``(kl + ku + 1, n)`` with entry ``(i, j)`` of the
    dense matrix stored at ``bands[ku + i - j, j]``; cells outside the band
    are structurally zero.
    """

    n: int
    kl: int
    ku: int
    bands: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"system dimension must be positive, got {self.n}")
        if self.kl < 0 or self.ku < 0:
            raise ValueError(f"bandwidths must be non-negative, got kl={self.kl}, ku={self.ku}")
        self.bands = np.asarray(self.bands, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        if self.bands.shape != (self.kl + self.ku + 1, self.n):
            raise ValueError(
                f"band storage must have shape ({self.kl + self.ku + 1}, {self.n}), "
                f"got {self.bands.shape}"
            )
        if self.rhs.shape != (self.n,):
            raise ValueError(f"rhs must have shape ({self.n},), got {self.rhs.shape}")

    @classmethod
    def from_dense(cls, matrix, kl: int, ku: int, rhs) -> "BandedSystem":
        matrix = np.asarray(matrix, dtype=float)
        n = matrix.shape[0]
        bands = np.zeros((kl + ku + 1, n))
        for i in range(n):
            for j in range(max(0, i - kl), min(n, i + ku + 1)):
                bands[ku + i - j, j] = matrix[i, j]
        return cls(n=n, kl=kl, ku=ku, bands=bands, rhs=np.asarray(rhs, dtype=float))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n))
        for j in range(self.n):
            for i in range(max(0, j - self.ku), min(self.n, j + self.kl + 1)):
                dense[i, j] = self.bands[self.ku + i - j, j]
        return dense


def solve_banded(system: BandedSystem) -> np.ndarray:
    """Solve a banded system by LU with partial pivoting within the band."""
    try:
        x = _lapack_solve_banded((system.kl, system.ku), system.bands, system.rhs)
    except LinAlgError as exc:
        raise SingularSystemError(f"banded system is singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("banded solve produced non-finite values")
    return x


def solve_dense_reference(matrix, rhs) -> np.ndarray:
    """Dense Gaussian elimination with partial pivoting (verification oracle)."""
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n > 2000:
        raise ValueError(f"dense reference solver is limited to n <= 2000, got {n}")
    if b.shape != (n,):
        raise ValueError(f"rhs must have shape ({n},), got {b.shape}")

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < _PIVOT_FLOOR:
            raise SingularSystemError(f"matrix is singular at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        b[k + 1 :] -= factors * b[k]

    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - a[i, i + 1 :] @ x[i + 1 :]) / a[i, i]
    return x

"""Uniform periodic B-spline bases in one dimension.

A :class:`SplineSpace` of degree ``p`` on ``n_cells`` cells carries exactly
``n_cells`` basis functions after periodic identification; at any point,
``p + 1`` of them are nonzero and they sum to one. Knots sit at the uniform
grid ``x_j = j * dx`` with half-open cells ``[x_j, x_{j+1})``, so a point
evaluated exactly at a knot belongs to the cell on its right.

References
----------
L. Piegl and W. Tiller, The NURBS Book, 2nd ed., Springer, 1997.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _kernels

__all__ = [
    "SplineSpace",
    "gauss_rule_01",
    "eval_basis",
    "eval_basis_derivative",
    "integrate_basis_along_segment",
    "eval_field",
]

_MAX_GAUSS_POINTS = 10


def gauss_rule_01(n_points):
    """Gauss-Legendre nodes and weights mapped to [0, 1].

    Tables are available for 1 to 10 points; an ``n``-point rule integrates
    polynomials up to degree ``2n - 1`` exactly.
    """
    if not 1 <= n_points <= _MAX_GAUSS_POINTS:
        raise ValueError(f"Gauss rule with {n_points} points not tabulated")
    return _GAUSS_01[n_points]


def _build_gauss_tables():
    tables = {}
    for n in range(1, _MAX_GAUSS_POINTS + 1):
        nodes, weights = leggauss(n)
        tables[n] = (0.5 * (nodes + 1.0), 0.5 * weights)
    return tables


_GAUSS_01 = _build_gauss_tables()


@dataclass(frozen=True)
class SplineSpace:
    """Periodic uniform B-spline space of a given degree.

    Parameters
    ----------
    degree : int
        Polynomial degree, >= 0.
    n_cells : int
        Number of grid cells; must exceed the degree so the periodic basis
        functions are linearly independent.
    domain_length : float
        Length L of the periodic interval [0, L).
    """

    degree: int
    n_cells: int
    domain_length: float
    cell_width: float = field(init=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if self.n_cells < self.degree + 1:
            raise ValueError(
                f"n_cells={self.n_cells} too small for degree {self.degree}"
            )
        if not self.domain_length > 0:
            raise ValueError("domain_length must be positive")
        object.__setattr__(self, "cell_width", self.domain_length / self.n_cells)

    @property
    def dim(self):
        """Number of independent basis functions (= n_cells, periodic)."""
        return self.n_cells

    def wrap(self, x):
        """Map positions into [0, L)."""
        length = self.domain_length
        y = x - length * np.floor(x / length)
        return np.where(y >= length, y - length, y)

    def cell_of(self, x):
        """Cell index and local coordinate t in [0, 1) of a position."""
        u = self.wrap(x) / self.cell_width
        j = np.minimum(u.astype(np.int64) if np.ndim(u) else int(u),
                       self.n_cells - 1)
        return j, u - j

    def quadrature_rule(self):
        """Per-cell Gauss rule exact for products of two basis functions."""
        return gauss_rule_01(self.degree + 1)


def eval_basis(space, x):
    """Nonzero basis values at a single position.

    Returns
    -------
    first_index : int
        Index of the leftmost active basis function (modulo n_cells).
    values : ndarray
        The ``degree + 1`` values, nonnegative, summing to one.
    """
    j, t = _cell_scalar(space, x)
    vals = np.empty(_kernels.MAX_DEGREE + 1)
    _kernels._basis_values(t, space.degree, vals)
    return (j - space.degree) % space.n_cells, vals[: space.degree + 1].copy()


def eval_basis_derivative(space, x):
    """First derivative of the active basis functions at a position.

    The derivative of a degree-p spline is the scaled difference of two
    degree p-1 splines, so the returned values sum to zero. Degree-0 spaces
    are rejected: their derivative leaves the discrete complex.
    """
    p = space.degree
    if p < 1:
        raise ValueError("derivative of a degree-0 basis leaves the complex")
    j, t = _cell_scalar(space, x)
    vals = np.empty(_kernels.MAX_DEGREE + 1)
    _kernels._basis_values(t, p - 1, vals)
    lower = vals[:p].copy()
    out = np.empty(p + 1)
    inv_dx = 1.0 / space.cell_width
    for k in range(p + 1):
        left = lower[k - 1] if k > 0 else 0.0
        right = lower[k] if k < p else 0.0
        out[k] = (left - right) * inv_dx
    return (j - p) % space.n_cells, out


def integrate_basis_along_segment(space, x0, x1):
    """Oriented integrals of every basis function along a straight segment.

    Splits the segment at each interior knot and applies Gauss-Legendre
    quadrature with ``ceil((degree+1)/2)`` points per piece, which is exact
    for the polynomial integrand. Returns a sparse mapping from basis index
    to the value of ``int_{x0}^{x1} N_i(s) ds``; reversing the endpoints
    flips every sign.
    """
    if not abs(x1 - x0) <= space.domain_length * (1.0 + 1e-12):
        raise ValueError(
            "segment endpoints must be finite and at most one period apart")
    nodes, weights = gauss_rule_01((space.degree + 2) // 2)
    out = np.zeros(space.n_cells)
    _kernels.segment_integrals(float(x0), float(x1), space.degree,
                               space.n_cells, space.cell_width, nodes,
                               weights, out)
    return {int(i): out[i] for i in np.nonzero(out)[0]}


def eval_field(space, coeffs, x):
    """Evaluate ``sum_i coeffs[i] N_i`` at one position or an array of them."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (space.n_cells,):
        raise ValueError(
            f"expected {space.n_cells} coefficients, got {coeffs.shape}"
        )
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape[0])
    _kernels.gather_field(xs, coeffs, space.degree, space.n_cells,
                          space.cell_width, space.domain_length, out)
    return out[0] if np.ndim(x) == 0 else out


def _cell_scalar(space, x):
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("position must be finite")
    j, t = space.cell_of(x)
    return int(j), float(t)

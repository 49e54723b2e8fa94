"""The 1D discrete deRham complex used by the field solver.

Two compatible periodic spline spaces form the complex: V0 of degree ``p``
(the electric field component E2 lives here) and V1 of degree ``p - 1``
(the components D = E1 and B live here). The derivative matrix maps V0
coefficients to V1 coefficients exactly, so grad/curl identities hold at the
coefficient level and the weak Gauss law is a conserved quantity of the
semi-discrete system.

Mass matrices are assembled with per-cell Gauss-Legendre quadrature that is
exact for products of basis functions; the systems are small and circulant,
so they are factorized densely once (Cholesky) and reused for every solve.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .splines import SplineSpace, gauss_rule_01

__all__ = [
    "DeRhamComplex1d",
    "FieldCoeffs",
    "build_complex",
    "solve_mass",
    "poisson_solve_initial_field",
    "field_integral",
    "mixed_inner",
    "project",
]


@dataclass
class FieldCoeffs:
    """Coefficient vectors of the three field components.

    d : E1 coefficients in V1, e : E2 coefficients in V0, b : B3
    coefficients in V1. All have length n_cells.
    """

    d: np.ndarray
    e: np.ndarray
    b: np.ndarray

    @classmethod
    def zeros(cls, n_cells):
        return cls(np.zeros(n_cells), np.zeros(n_cells), np.zeros(n_cells))

    def copy(self):
        return FieldCoeffs(self.d.copy(), self.e.copy(), self.b.copy())


def _basis_on_nodes(degree, t_nodes):
    """Values of the degree+1 active splines at local coordinates t_nodes.

    Returns an array of shape (len(t_nodes), degree + 1); column k holds the
    basis function with index j - degree + k on cell j.
    """
    t = np.asarray(t_nodes, dtype=float)
    vals = np.zeros((t.shape[0], degree + 1))
    vals[:, 0] = 1.0
    for r in range(1, degree + 1):
        for k in range(r, -1, -1):
            left = vals[:, k - 1] if k > 0 else 0.0
            right = vals[:, k] if k < r else 0.0
            vals[:, k] = ((t + r - k) * left + (k + 1.0 - t) * right) / r
    return vals


def _mass_matrix(space_row, space_col, n_quad):
    """Mass matrix of two spaces sharing the same periodic grid."""
    n = space_row.n_cells
    dx = space_row.cell_width
    nodes, weights = gauss_rule_01(n_quad)
    rows = _basis_on_nodes(space_row.degree, nodes)
    cols = _basis_on_nodes(space_col.degree, nodes)
    # per-cell block: identical for every cell on a uniform grid
    block = np.einsum("q,qk,ql->kl", weights * dx, rows, cols)
    mat = np.zeros((n, n))
    pr, pc = space_row.degree, space_col.degree
    for j in range(n):
        ridx = (j - pr + np.arange(pr + 1)) % n
        cidx = (j - pc + np.arange(pc + 1)) % n
        mat[np.ix_(ridx, cidx)] += block
    return mat


class DeRhamComplex1d:
    """V0/V1 spline pair with derivative matrix, masses and factorizations.

    Immutable after construction; mass solves only read the precomputed
    factorizations, so instances can be shared freely.
    """

    def __init__(self, degree_p, n_cells, domain_length):
        if degree_p < 1:
            raise ValueError("degree_p must be >= 1")
        if n_cells <= degree_p:
            raise ValueError(
                f"n_cells={n_cells} too small for the degree-{degree_p} stencil"
            )
        self.degree_p = degree_p
        self.v0 = SplineSpace(degree_p, n_cells, domain_length)
        self.v1 = SplineSpace(degree_p - 1, n_cells, domain_length)
        n = n_cells
        dx = self.v0.cell_width

        deriv = np.zeros((n, n))
        idx = np.arange(n)
        deriv[idx, idx] = 1.0 / dx
        deriv[idx, (idx - 1) % n] -= 1.0 / dx
        self.deriv = deriv

        n_quad = degree_p + 1
        self.m0 = _mass_matrix(self.v0, self.v0, n_quad)
        self.m1 = _mass_matrix(self.v1, self.v1, n_quad)
        self.m01 = _mass_matrix(self.v0, self.v1, n_quad)

        self._m0_chol = cho_factor(self.m0)
        self._m1_chol = cho_factor(self.m1)

        # periodic Laplacian has the constants in its kernel; a rank-one
        # shift keeps it SPD while leaving zero-mean solutions untouched
        lap = deriv.T @ self.m1 @ deriv
        shift = np.mean(np.diag(lap)) / n
        self._poisson_op = lap
        self._poisson_chol = cho_factor(lap + shift * np.ones((n, n)))

    @property
    def n_cells(self):
        return self.v0.n_cells

    @property
    def domain_length(self):
        return self.v0.domain_length

    @property
    def cell_width(self):
        return self.v0.cell_width

    def space(self, space_id):
        if space_id == "v0":
            return self.v0
        if space_id == "v1":
            return self.v1
        raise ValueError(f"unknown space id {space_id!r}")


def build_complex(degree_p, n_cells, domain_length):
    """Assemble spaces, derivative matrix and mass matrices."""
    return DeRhamComplex1d(degree_p, n_cells, domain_length)


def solve_mass(cplx, matrix_id, rhs):
    """Solve M y = rhs against a precomputed Cholesky factorization."""
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (cplx.n_cells,):
        raise ValueError(f"rhs must have length {cplx.n_cells}")
    if matrix_id == "m0":
        return cho_solve(cplx._m0_chol, rhs)
    if matrix_id == "m1":
        return cho_solve(cplx._m1_chol, rhs)
    raise ValueError(f"unknown mass matrix id {matrix_id!r}")


def poisson_solve_initial_field(cplx, rho_dofs):
    """Electric field coefficients solving the discrete Poisson problem.

    Solves ``G^T M1 G phi = rho_dofs`` with the zero-mean gauge on phi and
    returns ``d = -G phi``, which satisfies the weak Gauss law
    ``G^T M1 d = -rho_dofs`` up to solver round-off. The load vector must be
    compatible (total charge zero).
    """
    rho = np.asarray(rho_dofs, dtype=float)
    if rho.shape != (cplx.n_cells,):
        raise ValueError(f"rho_dofs must have length {cplx.n_cells}")
    total = rho.sum()
    scale = np.abs(rho).sum()
    if scale == 0.0:
        return np.zeros(cplx.n_cells)
    if abs(total) > 1e-10 * scale:
        raise ValueError(
            f"incompatible charge density: sum {total:.3e} vs scale {scale:.3e}"
        )
    phi = cho_solve(cplx._poisson_chol, rho - total / cplx.n_cells)
    phi -= phi.mean()
    return -cplx.deriv @ phi


def field_integral(cplx, space_id, coeffs):
    """Integral over the domain of a spline field, exact.

    Every periodic basis function integrates to the cell width, so the
    integral is ``dx * sum(coeffs)`` in either space.
    """
    cplx.space(space_id)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (cplx.n_cells,):
        raise ValueError(f"coeffs must have length {cplx.n_cells}")
    return cplx.cell_width * coeffs.sum()


def mixed_inner(cplx, e, b):
    """L2 inner product of a V0 field with a V1 field, int E_h B_h dx."""
    return float(np.asarray(e) @ cplx.m01 @ np.asarray(b))


def project(cplx, space_id, func, n_quad=10):
    """L2 projection of a callable onto V0 or V1.

    The load vector uses a dense per-cell Gauss rule; for the smooth
    initial-field profiles this is accurate far beyond the projection error.
    """
    space = cplx.space(space_id)
    n, dx = space.n_cells, space.cell_width
    nodes, weights = gauss_rule_01(n_quad)
    basis = _basis_on_nodes(space.degree, nodes)
    load = np.zeros(n)
    p = space.degree
    for j in range(n):
        fx = func((j + nodes) * dx)
        contrib = (weights * dx * fx) @ basis
        load[(j - p + np.arange(p + 1)) % n] += contrib
    matrix_id = "m0" if space_id == "v0" else "m1"
    return solve_mass(cplx, matrix_id, load)

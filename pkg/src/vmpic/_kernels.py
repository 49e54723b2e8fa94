"""Compiled kernels for particle-grid transfer and the particle sub-flows.

All kernels assume a uniform periodic B-spline basis: cells of width ``dx``
on ``[0, L)``, coefficient indices taken modulo ``n_cells``. Basis values on
a cell come from the Cox-de Boor triangular recursion in the local
coordinate ``t = x/dx - j`` (see Piegl & Tiller, The NURBS Book, Alg. A2.2).

The periodic wrap-around is handled with ghost-padded copies of the
coefficient vectors (``degree`` leading ghosts), so the hot loops index with
``j + k`` instead of a modulo. Deposits accumulate in particle order with a
single thread and fold the ghosts back afterwards, so results are
bit-reproducible between runs. Gathers write disjoint per-particle slots.
"""

import numpy as np
from numba import njit

# stack buffers below hold degree+1 values
MAX_DEGREE = 8


@njit(cache=True, inline="always")
def _wrap(x, length):
    y = x - length * np.floor(x / length)
    if y >= length:
        y -= length
    if y < 0.0:
        y = 0.0
    return y


@njit(cache=True, inline="always")
def _locate(x, length, dx, n_cells):
    """Cell index ``j`` and local coordinate ``t`` in [0, 1) of a position."""
    u = _wrap(x, length) / dx
    if not (u == u):
        raise ValueError("non-finite particle position")
    j = int(u)
    if j >= n_cells:
        j = n_cells - 1
    return j, u - j


@njit(cache=True, inline="always")
def _basis_raise(t, r, vals):
    """One level of the Cox-de Boor recursion, degree r-1 -> r, in place."""
    for k in range(r, -1, -1):
        left = vals[k - 1] if k > 0 else 0.0
        right = vals[k] if k < r else 0.0
        vals[k] = ((t + r - k) * left + (k + 1.0 - t) * right) / r


@njit(cache=True, inline="always")
def _basis_values(t, degree, vals):
    """Values of the degree+1 splines active on a cell, at local t.

    ``vals[k]`` is the value of the basis function with index ``j-degree+k``
    when the point lies in cell ``j``.
    """
    vals[0] = 1.0
    for r in range(1, degree + 1):
        _basis_raise(t, r, vals)


@njit(cache=True)
def _pad(coeffs, degree):
    """Ghost-extended copy: pad[i] = coeffs[(i - degree) mod n]."""
    n = coeffs.shape[0]
    out = np.empty(n + degree)
    out[:degree] = coeffs[n - degree:]
    out[degree:] = coeffs
    return out


@njit(cache=True)
def _fold(padded, degree, out):
    """Accumulate a ghost-extended deposit back onto the periodic vector."""
    n = out.shape[0]
    for i in range(n):
        out[i] += padded[i + degree]
    for k in range(degree):
        out[(n - degree + k) % n] += padded[k]


@njit(cache=True)
def gather_field(x, coeffs, degree, n_cells, dx, length, out):
    """out[a] = sum_i coeffs[i] N_i(x[a]) for every particle a."""
    vals = np.empty(MAX_DEGREE + 1)
    pad = _pad(coeffs, degree)
    for a in range(x.shape[0]):
        j, t = _locate(x[a], length, dx, n_cells)
        _basis_values(t, degree, vals)
        acc = 0.0
        for k in range(degree + 1):
            acc += pad[j + k] * vals[k]
        out[a] = acc


@njit(cache=True)
def scatter_field(x, values, degree, n_cells, dx, length, out):
    """out[i] += sum_a values[a] N_i(x[a]); serial, deterministic order."""
    vals = np.empty(MAX_DEGREE + 1)
    pad = np.zeros(n_cells + degree)
    for a in range(x.shape[0]):
        j, t = _locate(x[a], length, dx, n_cells)
        _basis_values(t, degree, vals)
        va = values[a]
        for k in range(degree + 1):
            pad[j + k] += va * vals[k]
    _fold(pad, degree, out)


@njit(cache=True)
def kick_from_fields(x, v1, v2, d, e, degree_p, n_cells, dx, length, c1, c0):
    """v1[a] += c1 * D_h(x[a]); v2[a] += c0 * E_h(x[a]).

    D_h lives in the degree p-1 space, E_h in the degree p space; both basis
    levels come out of one recursion pass.
    """
    vals = np.empty(MAX_DEGREE + 1)
    dlo = degree_p - 1
    dpad = _pad(d, dlo)
    epad = _pad(e, degree_p)
    for a in range(x.shape[0]):
        j, t = _locate(x[a], length, dx, n_cells)
        _basis_values(t, dlo, vals)
        acc = 0.0
        for k in range(dlo + 1):
            acc += dpad[j + k] * vals[k]
        v1[a] += c1 * acc
        _basis_raise(t, degree_p, vals)
        acc = 0.0
        for k in range(degree_p + 1):
            acc += epad[j + k] * vals[k]
        v2[a] += c0 * acc


@njit(cache=True)
def kick_and_deposit_v2(x, v1, v2, b, degree_p, n_cells, dx, length, cg, cs,
                        j0_out):
    """v1[a] += cg * B_h(x[a]) * v2[a]; j0_out[i] += cs * sum_a v2[a] N_i^p(x[a]).

    B_h is gathered from the degree p-1 space; the deposit goes into the
    degree p space. v2 itself is untouched.
    """
    vals = np.empty(MAX_DEGREE + 1)
    dlo = degree_p - 1
    bpad = _pad(b, dlo)
    jpad = np.zeros(n_cells + degree_p)
    for a in range(x.shape[0]):
        j, t = _locate(x[a], length, dx, n_cells)
        _basis_values(t, dlo, vals)
        bh = 0.0
        for k in range(dlo + 1):
            bh += bpad[j + k] * vals[k]
        v1[a] += cg * bh * v2[a]
        _basis_raise(t, degree_p, vals)
        va = cs * v2[a]
        for k in range(degree_p + 1):
            jpad[j + k] += va * vals[k]
    _fold(jpad, degree_p, j0_out)


@njit(cache=True, inline="always")
def _segment_accumulate(x0, x1, scale, bpad, degree, n_cells, dx,
                        gnodes, gweights, jpad, vals):
    """Exact oriented segment integrals of the periodic basis.

    Adds ``scale * int_{x0}^{x1} N_i(s) ds`` into the ghost-padded deposit
    and returns the oriented integral of the spline field with ghost-padded
    coefficients ``bpad`` along the same path. The segment is split at every
    knot it crosses and each piece is integrated with the supplied
    Gauss-Legendre rule on [0, 1], which is exact for the piecewise
    polynomial integrand. Positions may be unwrapped; cell indices are
    reduced modulo n_cells per sub-segment.
    """
    if x1 >= x0:
        a0, a1, sign = x0, x1, 1.0
    else:
        a0, a1, sign = x1, x0, -1.0
    c0 = int(np.floor(a0 / dx))
    c1 = int(np.floor(a1 / dx))
    total = 0.0
    for c in range(c0, c1 + 1):
        lo = max(a0, c * dx)
        hi = min(a1, (c + 1) * dx)
        h = hi - lo
        if h <= 0.0:
            continue
        jm = c % n_cells
        for q in range(gnodes.shape[0]):
            s = lo + h * gnodes[q]
            t = s / dx - c
            _basis_values(t, degree, vals)
            wq = h * gweights[q] * sign
            for k in range(degree + 1):
                jpad[jm + k] += scale * wq * vals[k]
                total += wq * bpad[jm + k] * vals[k]
    return total


@njit(cache=True)
def segment_integrals(x0, x1, degree, n_cells, dx, gnodes, gweights, out):
    """out[i] += int_{x0}^{x1} N_i(s) ds for a single oriented segment."""
    vals = np.empty(MAX_DEGREE + 1)
    jpad = np.zeros(n_cells + degree)
    bpad = np.zeros(n_cells + degree)
    _segment_accumulate(x0, x1, 1.0, bpad, degree, n_cells, dx, gnodes,
                        gweights, jpad, vals)
    _fold(jpad, degree, out)


@njit(cache=True, inline="always")
def _check_segment(seg, length):
    # a blown-up or NaN displacement would otherwise walk the knot loop
    # astronomically far; fail loudly instead
    if not (np.abs(seg) <= length):
        raise ValueError(
            "particle displacement exceeds one period in a single substep; "
            "the time step is unstable for this configuration")


@njit(cache=True)
def current_deposit(x, v1, dt, qw, degree, n_cells, dx, length, gnodes,
                    gweights, out):
    """out[i] += qw * int along each straight path of N_i (oriented)."""
    vals = np.empty(MAX_DEGREE + 1)
    jpad = np.zeros(n_cells + degree)
    bpad = np.zeros(n_cells + degree)
    for a in range(x.shape[0]):
        seg = dt * v1[a]
        if seg == 0.0:
            continue
        _check_segment(seg, length)
        x0 = _wrap(x[a], length)
        _segment_accumulate(x0, x0 + seg, qw, bpad, degree, n_cells, dx,
                            gnodes, gweights, jpad, vals)
    _fold(jpad, degree, out)


@njit(cache=True)
def hp1_flow(x, v1, v2, b, dt, qm, qw, degree, n_cells, dx, length, gnodes,
             gweights, j1_out):
    """Exact drift sub-flow: x += dt*v1 (wrapped afterwards), v2 gets the
    line-integrated magnetic kick, j1_out receives the path-exact current.

    The path integrals use the unwrapped segment so a boundary crossing
    contributes exactly once.
    """
    vals = np.empty(MAX_DEGREE + 1)
    bpad = _pad(b, degree)
    jpad = np.zeros(n_cells + degree)
    for a in range(x.shape[0]):
        seg = dt * v1[a]
        if seg == 0.0:
            continue
        _check_segment(seg, length)
        x0 = _wrap(x[a], length)
        bint = _segment_accumulate(x0, x0 + seg, qw, bpad, degree, n_cells,
                                   dx, gnodes, gweights, jpad, vals)
        v2[a] -= qm * bint
        x[a] = _wrap(x0 + seg, length)
    _fold(jpad, degree, j1_out)


@njit(cache=True)
def bracket_sums(x, v1, v2, d, e, b, degree_p, n_cells, dx, length):
    """Particle sums of the first-order backward-error brackets.

    Returns (sum v1*B_h*v2, sum v1*D_h, sum v2*E_h) in one basis pass; the
    caller applies the charge-weight factors.
    """
    vals = np.empty(MAX_DEGREE + 1)
    dlo = degree_p - 1
    dpad = _pad(d, dlo)
    bpad = _pad(b, dlo)
    epad = _pad(e, degree_p)
    s_vbv = 0.0
    s_vd = 0.0
    s_ve = 0.0
    for a in range(x.shape[0]):
        j, t = _locate(x[a], length, dx, n_cells)
        _basis_values(t, dlo, vals)
        dh = 0.0
        bh = 0.0
        for k in range(dlo + 1):
            dh += dpad[j + k] * vals[k]
            bh += bpad[j + k] * vals[k]
        s_vbv += v1[a] * bh * v2[a]
        s_vd += v1[a] * dh
        _basis_raise(t, degree_p, vals)
        eh = 0.0
        for k in range(degree_p + 1):
            eh += epad[j + k] * vals[k]
        s_ve += v2[a] * eh
    return s_vbv, s_vd, s_ve

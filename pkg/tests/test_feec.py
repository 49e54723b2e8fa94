import numpy as np
import pytest

from vmpic.feec import (build_complex, field_integral, mixed_inner,
                        poisson_solve_initial_field, project, solve_mass)
from vmpic.splines import eval_field

from _reference import composite_quadrature


class TestBuildComplex:
    def test_p1_v1_mass_is_diagonal(self):
        cplx = build_complex(1, 16, 2.0)
        np.testing.assert_allclose(cplx.m1, cplx.cell_width * np.eye(16),
                                   atol=1e-15)

    def test_p2_v1_mass_hat_values(self):
        # exact integrals of hat-function products: 2dx/3 and dx/6
        cplx = build_complex(2, 16, 2.0)
        dx = cplx.cell_width
        assert cplx.m1[0, 0] == pytest.approx(2 * dx / 3, rel=1e-13)
        assert cplx.m1[0, 1] == pytest.approx(dx / 6, rel=1e-13)
        assert cplx.m1[0, 2] == 0.0

    def test_deriv_annihilates_constants(self):
        for p in (2, 3, 4):
            cplx = build_complex(p, 16, 2.0)
            np.testing.assert_allclose(cplx.deriv @ np.ones(16), 0.0,
                                       atol=1e-14)

    def test_deriv_difference_quotient(self, rng):
        cplx = build_complex(3, 16, 2.0)
        e = rng.standard_normal(16)
        expected = (e - np.roll(e, 1)) / cplx.cell_width
        np.testing.assert_allclose(cplx.deriv @ e, expected, rtol=1e-14)

    def test_deriv_row_and_column_sums(self):
        cplx = build_complex(3, 16, 2.0)
        np.testing.assert_allclose(cplx.deriv.sum(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(cplx.deriv.sum(axis=1), 0.0, atol=1e-12)

    def test_too_few_cells_rejected(self):
        with pytest.raises(ValueError):
            build_complex(3, 3, 1.0)

    @pytest.mark.parametrize("mat", ["m0", "m1"])
    def test_mass_spd(self, mat, cplx16, rng):
        m = getattr(cplx16, mat)
        np.testing.assert_allclose(m, m.T, atol=1e-15)
        for _ in range(100):
            y = rng.standard_normal(16)
            assert y @ m @ y > 0.0

    def test_mass_circulant_banded(self, cplx16):
        m0 = cplx16.m0
        for shift in range(1, 16):
            np.testing.assert_allclose(
                np.diag(np.roll(np.roll(m0, shift, 0), shift, 1)),
                np.diag(m0), rtol=1e-13)
        # bandwidth equals the degree (periodic wrap aside)
        assert m0[0, 4] == pytest.approx(0.0, abs=1e-18)
        assert abs(m0[0, 3]) > 0.0


class TestSolveMass:
    def test_roundtrip_ones(self, cplx16):
        rhs = cplx16.m0 @ np.ones(16)
        np.testing.assert_allclose(solve_mass(cplx16, "m0", rhs), 1.0,
                                   rtol=1e-12)

    def test_zero(self, cplx16):
        np.testing.assert_allclose(solve_mass(cplx16, "m1", np.zeros(16)), 0.0)

    @pytest.mark.parametrize("mat", ["m0", "m1"])
    def test_residual(self, mat, cplx16, rng):
        for _ in range(10):
            rhs = rng.standard_normal(16)
            y = solve_mass(cplx16, mat, rhs)
            m = getattr(cplx16, mat)
            resid = np.max(np.abs(m @ y - rhs))
            assert resid <= 1e-12 * np.max(np.abs(rhs))

    def test_unknown_matrix(self, cplx16):
        with pytest.raises(ValueError):
            solve_mass(cplx16, "m2", np.zeros(16))


class TestPoisson:
    def test_zero_density(self, cplx16):
        np.testing.assert_allclose(
            poisson_solve_initial_field(cplx16, np.zeros(16)), 0.0)

    def test_gauss_law_identity(self, cplx16, rng):
        for _ in range(10):
            rho = rng.standard_normal(16)
            rho -= rho.mean()
            d = poisson_solve_initial_field(cplx16, rho)
            resid = cplx16.deriv.T @ cplx16.m1 @ d + rho
            assert np.max(np.abs(resid)) <= 1e-10

    def test_incompatible_density_rejected(self, cplx16):
        with pytest.raises(ValueError):
            poisson_solve_initial_field(cplx16, np.ones(16))

    def test_cosine_density_convergence(self):
        # analytic solution: rho = -alpha cos(kx) gives E = -(alpha/k) sin(kx)
        alpha, k = 0.5, 0.5
        length = 2 * np.pi / k
        errors = []
        for n_cells in (16, 32):
            cplx = build_complex(3, n_cells, length)
            rho = project_load(cplx, lambda x: -alpha * np.cos(k * x))
            d = poisson_solve_initial_field(cplx, rho)
            xs = np.linspace(0, length, 500, endpoint=False)
            target = -(alpha / k) * np.sin(k * xs)
            errors.append(np.max(np.abs(eval_field(cplx.v1, d, xs) - target)))
        rate = np.log2(errors[0] / errors[1])
        assert rate > 2.5  # order p = 3


class TestIntegralsAndInner:
    def test_field_integral_ones(self, cplx16):
        assert field_integral(cplx16, "v0", np.ones(16)) == pytest.approx(2.0)
        assert field_integral(cplx16, "v1", np.zeros(16)) == 0.0

    def test_field_integral_matches_quadrature(self, cplx16, rng):
        coeffs = rng.standard_normal(16)
        ref = composite_quadrature(
            lambda s: eval_field(cplx16.v0, coeffs, s), 0.0, 2.0)
        assert field_integral(cplx16, "v0", coeffs) == pytest.approx(
            ref, abs=1e-12)

    def test_mixed_inner_zero_b(self, cplx16, rng):
        assert mixed_inner(cplx16, rng.standard_normal(16), np.zeros(16)) == 0.0

    def test_mixed_inner_constant_e(self, cplx16, rng):
        b = rng.standard_normal(16)
        value = mixed_inner(cplx16, np.ones(16), b)
        assert value == pytest.approx(cplx16.cell_width * b.sum(), rel=1e-12)

    def test_mixed_inner_matches_quadrature(self, cplx16, rng):
        e = rng.standard_normal(16)
        b = rng.standard_normal(16)
        ref = composite_quadrature(
            lambda s: eval_field(cplx16.v0, e, s) * eval_field(cplx16.v1, b, s),
            0.0, 2.0)
        assert mixed_inner(cplx16, e, b) == pytest.approx(ref, abs=1e-12)


class TestCommutingDiagram:
    def test_pointwise_derivative(self, cplx16, rng):
        from vmpic.splines import eval_basis_derivative
        psi = rng.standard_normal(16)
        gpsi = cplx16.deriv @ psi
        for x in rng.uniform(0, 2.0, 100):
            first, dvals = eval_basis_derivative(cplx16.v0, x)
            direct = sum(psi[(first + k) % 16] * dvals[k] for k in range(4))
            assert direct == pytest.approx(
                eval_field(cplx16.v1, gpsi, x), abs=1e-11)


def project_load(cplx, func, n_quad=10):
    """V0 load vector of a smooth density, by per-cell quadrature."""
    from vmpic.feec import _basis_on_nodes
    from vmpic.splines import gauss_rule_01
    space = cplx.v0
    nodes, weights = gauss_rule_01(n_quad)
    basis = _basis_on_nodes(space.degree, nodes)
    load = np.zeros(space.n_cells)
    p = space.degree
    for j in range(space.n_cells):
        fx = func((j + nodes) * space.cell_width)
        load[(j - p + np.arange(p + 1)) % space.n_cells] += (
            weights * space.cell_width * fx) @ basis
    return load

import numpy as np
import pytest

from vmpic.borisyee import StaggeredState, boris_init, boris_step
from vmpic.feec import FieldCoeffs, build_complex, solve_mass
from vmpic.hamsplit import SimState
from vmpic.particles import ParticleSet


@pytest.fixture
def small_state(rng):
    cplx = build_complex(3, 16, 2.0)
    n = 300
    particles = ParticleSet(
        x=rng.uniform(0, 2.0, n),
        v1=rng.normal(0, 0.2, n),
        v2=rng.normal(0, 0.2, n),
        weight=2.0 / n,
    )
    fields = FieldCoeffs(
        d=0.05 * rng.standard_normal(16),
        e=0.05 * rng.standard_normal(16),
        b=0.05 * rng.standard_normal(16),
    )
    return cplx, SimState(particles, fields, 0.0)


class TestRotation:
    def test_orthogonality_random_angles(self, rng):
        # the tan-half-angle map is an exact rotation for any alpha
        for alpha in rng.standard_normal(200):
            mat = np.array([
                [1 - alpha ** 2, 2 * alpha],
                [-2 * alpha, 1 - alpha ** 2],
            ]) / (1 + alpha ** 2)
            assert np.linalg.det(mat) == pytest.approx(1.0, abs=1e-15)
            v = rng.standard_normal(2)
            rotated = mat @ v
            assert rotated @ rotated == pytest.approx(v @ v, rel=1e-14)

    def test_speed_preserved_with_uniform_b(self, small_state):
        # zero-weight test particles: no currents, so the kick terms stay
        # zero and only the rotation acts
        cplx, st = small_state
        st.fields.e[:] = 0.0
        st.fields.d[:] = 0.0
        st.fields.b[:] = 0.7
        st.particles.weight = 0.0
        stag = boris_init(cplx, st, 0.1)
        before = stag.v1 ** 2 + stag.v2 ** 2
        new = boris_step(cplx, stag, 0.1, qm=st.particles.qm, qw=0.0)
        after = new.v1 ** 2 + new.v2 ** 2
        np.testing.assert_allclose(after, before, rtol=1e-13)
        assert np.max(np.abs(new.v1 - stag.v1)) > 0.0


class TestBorisInit:
    def test_zero_dt_copies(self, small_state):
        cplx, st = small_state
        stag = boris_init(cplx, st, 0.0)
        np.testing.assert_array_equal(stag.x_half, st.particles.x)
        np.testing.assert_array_equal(stag.d_half, st.fields.d)
        np.testing.assert_array_equal(stag.e_half, st.fields.e)
        np.testing.assert_array_equal(stag.b, st.fields.b)

    def test_no_motion_no_current(self, small_state):
        cplx, st = small_state
        st.particles.v1[:] = 0.0
        st.particles.v2[:] = 0.0
        st.fields.e[:] = 0.0
        stag = boris_init(cplx, st, 0.2)
        np.testing.assert_array_equal(stag.x_half, st.particles.x)
        np.testing.assert_allclose(stag.d_half, st.fields.d, atol=1e-15)

    def test_half_step_gauss_error_is_second_order(self):
        from vmpic.particles import InitialCase, deposit_charge, sample_initial
        from vmpic.feec import poisson_solve_initial_field
        case = InitialCase.preset("landau")
        cplx = build_complex(3, 32, case.domain_length)
        particles, fields = sample_initial(case, 20000, True, cplx)
        errors = []
        for dt in (0.2, 0.1):
            st = SimState(particles.copy(), fields.copy(), 0.0)
            stag = boris_init(cplx, st, dt)
            snapshot = ParticleSet(stag.x_half, stag.v1, stag.v2,
                                   particles.weight)
            rho = deposit_charge(snapshot, cplx)
            d_poisson = poisson_solve_initial_field(cplx, rho)
            errors.append(np.max(np.abs(stag.d_half - d_poisson)))
        assert errors[0] / errors[1] > 3.0  # ~4x per halving


class TestFieldLeapfrog:
    def test_time_symmetry_without_particles(self, cplx16, rng):
        # the exact inverse of the staggered field update is the same update
        # with dt negated and the sub-updates applied in reverse order
        e0 = 0.1 * rng.standard_normal(16)
        b0 = 0.1 * rng.standard_normal(16)
        dt = 0.07
        b1 = b0 - dt * (cplx16.deriv @ e0)
        e1 = e0 + dt * solve_mass(cplx16, "m0",
                                  cplx16.deriv.T @ (cplx16.m1 @ b1))
        # reversed order with -dt
        e2 = e1 - dt * solve_mass(cplx16, "m0",
                                  cplx16.deriv.T @ (cplx16.m1 @ b1))
        b2 = b1 + dt * (cplx16.deriv @ e2)
        assert np.max(np.abs(e2 - e0)) < 1e-12
        assert np.max(np.abs(b2 - b0)) < 1e-12

    def test_step_matches_field_updates_without_particles(self, cplx16, rng):
        stag = StaggeredState(
            x_half=np.zeros(0), v1=np.zeros(0), v2=np.zeros(0),
            d_half=np.zeros(16), e_half=0.1 * rng.standard_normal(16),
            b=0.1 * rng.standard_normal(16), time=0.0)
        dt = 0.05
        new = boris_step(cplx16, stag, dt, -1.0, -1.0)
        b_expect = stag.b - dt * (cplx16.deriv @ stag.e_half)
        e_expect = stag.e_half + dt * solve_mass(
            cplx16, "m0", cplx16.deriv.T @ (cplx16.m1 @ b_expect))
        np.testing.assert_allclose(new.b, b_expect, atol=1e-15)
        np.testing.assert_allclose(new.e_half, e_expect, atol=1e-15)


class TestPureDrift:
    def test_fields_change_only_through_currents(self, small_state):
        # v2 = 0 keeps the transverse current zero, so e and b stay exactly
        # zero while the drift current feeds d
        cplx, st = small_state
        st.fields.d[:] = 0.0
        st.fields.e[:] = 0.0
        st.fields.b[:] = 0.0
        st.particles.v2[:] = 0.0
        stag = boris_init(cplx, st, 0.1)
        np.testing.assert_array_equal(stag.e_half, 0.0)
        new = boris_step(cplx, stag, 0.1, st.particles.qm, st.particles.qw)
        np.testing.assert_array_equal(new.b, 0.0)
        np.testing.assert_array_equal(new.e_half, 0.0)
        np.testing.assert_array_equal(new.v2, 0.0)
        assert np.max(np.abs(new.d_half)) > 0.0

    def test_zero_weight_drift_is_pure(self, small_state):
        # without deposits nothing can move the fields at all
        cplx, st = small_state
        st.fields.d[:] = 0.0
        st.fields.e[:] = 0.0
        st.fields.b[:] = 0.0
        st.particles.weight = 0.0
        stag = boris_init(cplx, st, 0.1)
        new = boris_step(cplx, stag, 0.1, qm=st.particles.qm, qw=0.0)
        np.testing.assert_array_equal(new.d_half, stag.d_half)
        np.testing.assert_array_equal(new.v1, stag.v1)
        expected_drift = cplx.v0.wrap(stag.x_half + 0.1 * stag.v1)
        np.testing.assert_allclose(new.x_half, expected_drift, atol=1e-15)


class TestRunStaggered:
    def test_short_run_diagnostics(self):
        from vmpic.config import preset_config
        from vmpic.hamsplit import run_simulation
        cfg = preset_config("weibel", n_particles=2000, t_end=0.5,
                            propagator="boris")
        records = run_simulation(cfg)
        assert len(records) == 11
        h0 = records[0].total_energy
        assert all(abs(r.total_energy - h0) < 1e-6 for r in records)
        # the baseline violates the Gauss law well above round-off
        assert max(r.gauss_residual for r in records) > 1e-12

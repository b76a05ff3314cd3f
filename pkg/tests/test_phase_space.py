import math

import numpy as np
import pytest

from pibgk import (
    DistributionField,
    GridMismatch,
    NonPositiveDensity,
    NonPositiveInput,
    NonPositiveTemperature,
    SpatialGrid,
    VelocityGrid,
    compute_heat_flux,
    compute_moments,
    local_equilibrium,
    maxwellian,
)
from pibgk.phase_space import _rho_u_T, check_velocity_domain


def field_1d(values, space, vgrid):
    return DistributionField(np.atleast_2d(values), space, vgrid)


def uniform_field(rho, u, T, space, vgrid):
    prof = maxwellian(rho, u, T, vgrid)
    return DistributionField(np.tile(prof, space.shape + (1,)), space, vgrid)


class TestVelocityGrid:
    def test_weights_sum_to_volume(self, vgrid_1d, vgrid_2d):
        assert vgrid_1d.weights.sum() == pytest.approx(16.0, abs=1e-12)
        assert vgrid_2d.weights.sum() == pytest.approx(400.0, abs=1e-9)

    def test_nodes_symmetric(self, vgrid_1d):
        v = vgrid_1d.component(0)
        np.testing.assert_allclose(v, -v[::-1], atol=0)

    def test_zero_node_membership(self):
        even = VelocityGrid.uniform((-4, 4), 8)
        odd = VelocityGrid.uniform((-4, 4), 9)
        assert not np.any(even.component(0) == 0.0)
        assert np.any(odd.component(0) == 0.0)

    def test_asymmetric_bounds_rejected(self):
        with pytest.raises(ValueError):
            VelocityGrid.uniform((-4.0, 5.0), 10)

    def test_midpoint_exact_on_linear(self, vgrid_1d):
        # Midpoint rule integrates polynomials of degree <= 1 exactly.
        v, w = vgrid_1d.component(0), vgrid_1d.weights
        assert np.sum(w * (2.0 + 3.0 * v)) == pytest.approx(2.0 * 16.0, rel=1e-14)
        assert abs(np.sum(w * v)) < 1e-13


class TestMoments:
    def test_maxwellian_moments_vs_fine_quadrature(self, vgrid_1d):
        # Oracle: the same integrals on a J=4000 grid.
        fine = VelocityGrid.uniform((-8.0, 8.0), 4000)
        for rho, u, T in [(1.0, 0.0, 1.0), (0.5, 0.7, 0.8)]:
            coarse_m = _rho_u_T(maxwellian(rho, [u], T, vgrid_1d)[None, :], vgrid_1d)
            fine_m = _rho_u_T(maxwellian(rho, [u], T, fine)[None, :], fine)
            assert coarse_m[0][0] == pytest.approx(fine_m[0][0], abs=1e-9)
            assert coarse_m[1][0, 0] == pytest.approx(fine_m[1][0, 0], abs=1e-9)
            assert coarse_m[2][0] == pytest.approx(fine_m[2][0], abs=1e-9)

    def test_unit_maxwellian_round_trip(self, vgrid_1d, sod_space):
        f = uniform_field(1.0, [0.0], 1.0, sod_space, vgrid_1d)
        m = compute_moments(f)
        np.testing.assert_allclose(m.rho, 1.0, atol=1e-9)
        np.testing.assert_allclose(m.u, 0.0, atol=1e-9)
        np.testing.assert_allclose(m.T, 1.0, atol=1e-9)

    def test_constant_half(self, vgrid_1d):
        space = SpatialGrid.uniform((0, 1), 3, "outflow")
        f = DistributionField(np.full((3, 80), 0.5), space, vgrid_1d)
        rho, u, _ = _rho_u_T(f.values, vgrid_1d)
        np.testing.assert_allclose(rho, 8.0, rtol=1e-14)
        np.testing.assert_allclose(u, 0.0, atol=1e-13)

    def test_energy_consistency(self, vgrid_1d, sod_space):
        f = uniform_field(0.8, [0.5], 1.3, sod_space, vgrid_1d)
        m = compute_moments(f)
        usq = np.einsum("...d,...d->...", m.u, m.u)
        np.testing.assert_allclose(
            m.E, 0.5 * m.rho * usq + 0.5 * m.rho * m.T, rtol=1e-14
        )

    @pytest.mark.parametrize("rho,u,T", [
        (0.1, -3.0, 0.2), (10.0, 3.0, 4.0), (1.0, 0.0, 1.0), (2.5, -1.2, 0.5),
    ])
    def test_round_trip_property(self, rho, u, T):
        # Bounds at u +/- 6 sqrt(T) guarantee negligible tail truncation.
        reach = abs(u) + 6.0 * math.sqrt(T)
        bound = max(8.0, reach)
        grid = VelocityGrid.uniform((-bound, bound), 160)
        r2, u2, T2 = _rho_u_T(maxwellian(rho, [u], T, grid)[None, :], grid)
        assert r2[0] == pytest.approx(rho, rel=1e-6)
        assert u2[0, 0] == pytest.approx(u, abs=1e-6 * math.sqrt(T))
        assert T2[0] == pytest.approx(T, rel=1e-6)

    def test_nonpositive_density_reports_cell(self, vgrid_1d):
        space = SpatialGrid.uniform((0, 1), 4, "outflow")
        vals = np.full((4, 80), 0.1)
        vals[2] = -0.1
        with pytest.raises(NonPositiveDensity, match="cell 2"):
            _rho_u_T(vals, vgrid_1d)

    def test_nan_input_rejected(self, vgrid_1d):
        space = SpatialGrid.uniform((0, 1), 2, "outflow")
        vals = np.full((2, 80), 0.1)
        vals[1, 3] = np.nan
        with pytest.raises(NonPositiveDensity):
            _rho_u_T(vals, vgrid_1d)
        del space

    def test_nonpositive_temperature(self, vgrid_1d):
        # All mass on a single node: zero variance, T = 0.
        vals = np.zeros((1, 80))
        vals[0, 40] = 1.0
        with pytest.raises(NonPositiveTemperature, match="cell 0"):
            _rho_u_T(vals, vgrid_1d)


class TestMaxwellian:
    def test_peak_value_1d(self):
        grid = VelocityGrid.uniform((-4, 4), 9)   # odd: includes v = 0
        prof = maxwellian(1.0, [0.0], 1.0, grid)
        i0 = np.argmin(np.abs(grid.component(0)))
        assert prof[i0] == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-13)

    def test_peak_near_bulk_velocity_2d(self, vgrid_2d):
        # The 2D shock upstream state: maximum sits at the node nearest u.
        u = (math.sqrt(5.0 / 3.0) * 7.0 / 16.0, 0.0)
        prof = maxwellian(16.0 / 7.0, u, 133.0 / 64.0, vgrid_2d)
        du = vgrid_2d.nodes - np.asarray(u)
        nearest = np.argmin(np.einsum("jd,jd->j", du, du))
        assert np.argmax(prof) == nearest

    def test_strictly_positive(self, vgrid_1d):
        prof = maxwellian(0.1, [2.5], 0.2, vgrid_1d)
        assert np.all(prof > 0)

    def test_nonpositive_inputs(self, vgrid_1d):
        with pytest.raises(NonPositiveInput):
            maxwellian(-1.0, [0.0], 1.0, vgrid_1d)
        with pytest.raises(NonPositiveInput):
            maxwellian(1.0, [0.0], 0.0, vgrid_1d)

    def test_dimension_checked(self, vgrid_1d):
        with pytest.raises(GridMismatch):
            maxwellian(1.0, [0.0, 0.0], 1.0, vgrid_1d)


class TestHeatFlux:
    def test_maxwellian_has_zero_flux(self, vgrid_1d, sod_space):
        f = uniform_field(1.0, [0.5], 0.7, sod_space, vgrid_1d)
        m = compute_moments(f)
        assert np.abs(m.q).max() < 1e-8

    def test_point_mass_closed_form(self, vgrid_1d):
        space = SpatialGrid.uniform((0, 1), 1, "outflow")
        j = 70
        vstar = vgrid_1d.component(0)[j]
        mass = 2.3
        vals = np.zeros((1, 80))
        vals[0, j] = mass
        u = np.zeros((1, 1))
        f = DistributionField(vals, space, vgrid_1d)
        q = compute_heat_flux(f, u)
        w = vgrid_1d.weights[j]
        assert q[0, 0] == pytest.approx(0.5 * abs(vstar) ** 2 * vstar * w * mass, rel=1e-14)

    def test_vanishes_in_fluid_limit(self, vgrid_1d):
        # Strong relaxation keeps f near Maxwellian, so q ~ 0 away from the
        # wave structure at the final time.
        from pibgk import (ProjectiveParameters, TimeScheme, integrate,
                           make_rhs, named_tableau, sod_1d)

        space = SpatialGrid.uniform((0, 1), 50, "outflow")
        eps = 1e-5
        params = ProjectiveParameters(eps, 2, 0.4 * space.spacing[0])
        scheme = TimeScheme(kind="prk", params=params, tableau=named_tableau("rk4"))
        state = integrate(sod_1d(space, vgrid_1d), scheme,
                          make_rhs(space, vgrid_1d, eps), t_end=0.15)
        m = compute_moments(state.field)
        grad = np.abs(np.gradient(m.rho))
        smooth = grad < 0.2 * grad.max()
        assert np.abs(m.q[smooth, 0]).max() < 1e-4
        assert smooth.sum() > 25

    def test_symmetric_profile_zero_flux(self, vgrid_1d):
        # Any even profile about u = 0 on the symmetric grid.
        space = SpatialGrid.uniform((0, 1), 1, "outflow")
        v = vgrid_1d.component(0)
        vals = (1.0 + np.cos(v))[None, :] * np.exp(-v[None, :] ** 2 / 4)
        f = DistributionField(vals, space, vgrid_1d)
        q = compute_heat_flux(f, np.zeros((1, 1)))
        assert abs(q[0, 0]) < 1e-13


class TestLocalEquilibrium:
    def test_corrected_moments_match(self, vgrid_1d):
        rng = np.random.RandomState(7)
        v = vgrid_1d.component(0)
        vals = np.exp(-((v - 0.4) ** 2)) * (1.1 + 0.2 * np.sin(3 * v))
        vals = vals[None, :] * (1.0 + 0.1 * rng.rand(5, 1))
        rho, u, T = _rho_u_T(vals, vgrid_1d)
        M = local_equilibrium(vals, vgrid_1d, mode="corrected")
        rm, um, Tm = _rho_u_T(M, vgrid_1d)
        np.testing.assert_allclose(rm, rho, rtol=1e-12)
        np.testing.assert_allclose(um, u, atol=1e-12)
        np.testing.assert_allclose(Tm, T, rtol=1e-12)

    def test_analytic_is_plain_maxwellian(self, vgrid_1d):
        vals = maxwellian(0.7, [0.3], 0.9, vgrid_1d)[None, :] * 1.05
        rho, u, T = _rho_u_T(vals, vgrid_1d)
        M = local_equilibrium(vals, vgrid_1d, mode="analytic")
        np.testing.assert_array_equal(M, maxwellian(rho, u, T, vgrid_1d))

    def test_unknown_mode(self, vgrid_1d):
        vals = maxwellian(1.0, [0.0], 1.0, vgrid_1d)[None, :]
        with pytest.raises(ValueError):
            local_equilibrium(vals, vgrid_1d, mode="nope")


def test_velocity_domain_warning():
    grid = VelocityGrid.uniform((-4, 4), 40)
    with pytest.warns(UserWarning, match="clip"):
        check_velocity_domain(np.array([[2.0]]), np.ones(1), grid)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        check_velocity_domain(np.array([[0.0]]), 0.25 * np.ones(1), grid)


def test_field_shape_checked(vgrid_1d, sod_space):
    with pytest.raises(GridMismatch):
        DistributionField(np.zeros((99, 80)), sod_space, vgrid_1d)

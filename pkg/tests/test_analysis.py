import math

import numpy as np
import pytest

import starcap as sc
from starcap.errors import NoCrossingError


@pytest.fixture(scope="module")
def annulus_potential():
    fac = sc.RadialConformalFactor.euclidean(1.0)
    ring = sc.StarshapedRing(sc.RadialFunction.constant(2.0, 64),
                             sc.RadialFunction.constant(1.0, 64), fac)
    grid = sc.build_grid(ring, 64, 128)
    return sc.solve_linear(grid, sc.RhsSpec.zero(), sc.SolverConfig()).field


@pytest.fixture()
def bump_field(euclid):
    """1 - |x - (0.3, 0)|^2 on an annulus reaching radii below 0.3: rises
    then falls along the ray toward the bump center."""
    ring = sc.StarshapedRing(sc.RadialFunction.constant(2.0, 64),
                             sc.RadialFunction.constant(0.1, 64), euclid)
    grid = sc.build_grid(ring, 64, 64)
    vals = 1.0 - (grid.x1 - 0.3) ** 2 - grid.x2 ** 2
    return sc.ScalarField(grid, vals)


class TestEnvelope:
    def test_monotone_field_is_fixed_point(self, annulus_potential):
        env = sc.envelope(annulus_potential)
        np.testing.assert_array_equal(env.values, annulus_potential.values)

    def test_suffix_maximum_on_one_ray(self, round_ring):
        grid = sc.build_grid(round_ring, 8, 5)
        vals = np.zeros((8, 5))
        vals[0] = [0.0, 0.21, 0.25, 0.21, 0.0]
        env = sc.envelope(sc.ScalarField(grid, vals))
        np.testing.assert_allclose(env.values[0],
                                   [0.25, 0.25, 0.25, 0.21, 0.0])

    def test_idempotent_bitwise(self, bump_field):
        env = sc.envelope(bump_field)
        env2 = sc.envelope(env)
        np.testing.assert_array_equal(env.values, env2.values)

    def test_dominates_and_ray_monotone(self, bump_field):
        env = sc.envelope(bump_field)
        assert np.all(env.values >= bump_field.values)
        assert np.all(np.diff(env.values, axis=1) <= 0.0)

    def test_minimality_among_monotone_majorants(self, round_ring, rng):
        grid = sc.build_grid(round_ring, 16, 24)
        for _ in range(20):
            u = rng.uniform(0.0, 1.0, (16, 24))
            field = sc.ScalarField(grid, u)
            env_u = sc.envelope(field).values
            # any ray-monotone majorant of u dominates the envelope
            w = sc.envelope(sc.ScalarField(
                grid, u + rng.uniform(0.0, 0.5, u.shape))).values
            assert np.all(w >= u)
            assert np.all(np.diff(w, axis=1) <= 1e-15)
            assert np.all(w >= env_u - 1e-15)


class TestStarshapeReport:
    def test_annulus_potential_passes(self, annulus_potential):
        rep = sc.starshape_report(annulus_potential, tol=5e-3)
        assert rep.verdict
        assert rep.envelope_defect <= 5e-3
        assert rep.monotonicity_defect <= 5e-3
        assert rep.normal_defect <= 5e-3

    def test_bump_field_fails(self, bump_field):
        rep = sc.starshape_report(bump_field, tol=5e-3)
        assert not rep.verdict
        assert rep.monotonicity_defect > 1e-2
        assert rep.envelope_defect > 1e-2
        assert rep.normal_defect > 0.1

    def test_constant_field_trivially_passes(self, round_ring):
        grid = sc.build_grid(round_ring, 16, 8)
        rep = sc.starshape_report(sc.ScalarField(grid, np.full((16, 8), 0.5)),
                                  tol=1e-9)
        assert rep.verdict
        assert rep.envelope_defect == 0.0
        assert rep.monotonicity_defect == 0.0
        assert rep.normal_defect == 0.0

    def test_defects_vanish_together(self, round_ring, rng):
        grid = sc.build_grid(round_ring, 16, 24)
        for _ in range(20):
            u = rng.uniform(0.0, 1.0, (16, 24))
            rep = sc.starshape_report(sc.ScalarField(grid, u), tol=1e-12)
            assert (rep.envelope_defect == 0.0) == (rep.monotonicity_defect
                                                    == 0.0)
            mono = sc.ScalarField(grid, sc.envelope(
                sc.ScalarField(grid, u)).values)
            rep2 = sc.starshape_report(mono, tol=1e-12)
            assert rep2.envelope_defect == 0.0
            assert rep2.monotonicity_defect == 0.0


class TestSuperlevelBoundary:
    def test_annulus_half_level_is_sqrt2(self, annulus_potential):
        rho = sc.superlevel_boundary(annulus_potential, 0.5)
        np.testing.assert_allclose(rho.samples, math.sqrt(2.0), atol=5e-3)

    def test_high_level_hugs_inner_boundary(self, annulus_potential):
        rho = sc.superlevel_boundary(annulus_potential, 0.999)
        cell = (2.0 - 1.0) / (annulus_potential.grid.k - 1)
        assert np.all(rho.samples >= 1.0 - 1e-12)
        assert np.all(rho.samples <= 1.0 + cell)

    def test_monotone_in_level(self, annulus_potential):
        cell = (2.0 - 1.0) / (annulus_potential.grid.k - 1)
        prev = None
        for level in (0.2, 0.4, 0.6, 0.8):
            rho = sc.superlevel_boundary(annulus_potential, level).samples
            if prev is not None:
                assert np.all(rho <= prev + cell)
            prev = rho

    def test_star_ring_levels_starshaped(self, star_ring):
        grid = sc.build_grid(star_ring, 64, 128)
        field = sc.solve_linear(grid, sc.RhsSpec.zero(),
                                sc.SolverConfig()).field
        for level in (0.1, 0.5, 0.9):
            rho = sc.superlevel_boundary(field, level)
            assert sc.star_defect(rho, (0.0, 0.0), 720) >= -5e-3

    def test_level_range_validated(self, annulus_potential):
        with pytest.raises(ValueError):
            sc.superlevel_boundary(annulus_potential, 0.0)
        with pytest.raises(ValueError):
            sc.superlevel_boundary(annulus_potential, 1.0)

    def test_no_crossing_raises(self, round_ring):
        grid = sc.build_grid(round_ring, 16, 8)
        flat = sc.ScalarField(grid, np.full((16, 8), 0.5))
        with pytest.raises(NoCrossingError):
            sc.superlevel_boundary(flat, 0.3)

    def test_outermost_crossing_taken(self, round_ring):
        grid = sc.build_grid(round_ring, 8, 5)
        vals = np.tile([1.0, 0.2, 0.8, 0.4, 0.0], (8, 1))
        rho = sc.superlevel_boundary(sc.ScalarField(grid, vals), 0.5)
        # crossings of 0.5 exist in cells (0,1) and (2,3); the outer one wins
        s_star = 0.5 + 0.25 * (0.8 - 0.5) / (0.8 - 0.4)
        np.testing.assert_allclose(rho.samples, 1.0 + s_star, atol=1e-12)


class TestConditionMargin:
    def test_zero_rhs_margin_zero(self, euclid, round_ring):
        assert sc.condition_margin(sc.RhsSpec.zero(), euclid, 2.0,
                                   round_ring) == 0.0

    def test_state_source_euclidean_holds(self, euclid, round_ring):
        rhs = sc.RhsSpec.separable(1.0, lambda s: s)
        margin = sc.condition_margin(rhs, euclid, 2.0, round_ring)
        assert margin >= 0.0

    def test_state_source_sphere_fails_beyond_equator(self, sphere):
        ring = sc.StarshapedRing(sc.RadialFunction.constant(2.0, 64),
                                 sc.RadialFunction.constant(0.5, 64), sphere)
        rhs = sc.RhsSpec.separable(1.0, lambda s: s)
        margin, argmin = sc.condition_margin(rhs, sphere, 2.0, ring,
                                             return_argmin=True)
        assert margin < 0.0
        # the violator scales out to where t*psi(t) is decreasing
        assert argmin["tau"] > 1.0

    def test_scaling_invariance(self, sphere):
        ring = sc.StarshapedRing(sc.RadialFunction.constant(2.0, 64),
                                 sc.RadialFunction.constant(0.5, 64), sphere)
        base = sc.condition_margin(sc.RhsSpec.separable(1.0, lambda s: s),
                                   sphere, 2.0, ring)
        tripled = sc.condition_margin(sc.RhsSpec.separable(3.0, lambda s: s),
                                      sphere, 2.0, ring)
        assert abs(tripled - 3.0 * base) <= 1e-12 * max(1.0, abs(base))
        assert (tripled < 0.0) == (base < 0.0)

    def test_sample_counts_validated(self, euclid, round_ring):
        with pytest.raises(ValueError):
            sc.condition_margin(sc.RhsSpec.zero(), euclid, 2.0, round_ring,
                                samples=(1, 8, 5, 8))

import math

import numpy as np
import pytest

import starcap as sc
from starcap.errors import DomainError
from starcap.geometry import adaptive_simpson


def closed_form_arc(factor, r):
    """Antiderivatives of psi for the three model kinds."""
    if factor.kind == "euclidean":
        return factor.param * r
    if factor.kind == "sphere":
        return 2.0 * factor.param * math.atan(r / factor.param)
    if factor.kind == "hyperbolic":
        rr = factor.param
        return rr * math.log((rr + r) / (rr - r))
    raise AssertionError


class TestPsiEval:
    def test_euclidean_is_constant(self):
        fac = sc.RadialConformalFactor.euclidean(1.0)
        assert sc.psi_eval(fac, 0.7) == 1.0

    def test_sphere_formula(self, sphere):
        assert sc.psi_eval(sphere, 1.0) == pytest.approx(1.0, abs=1e-15)
        assert sc.psi_eval(sphere, 0.0) == pytest.approx(2.0, abs=1e-15)

    def test_hyperbolic_formula(self, hyperbolic):
        assert sc.psi_eval(hyperbolic, 0.5) == pytest.approx(8.0 / 3.0, rel=1e-15)

    def test_domain_error_outside_chart(self, hyperbolic):
        with pytest.raises(DomainError):
            sc.psi_eval(hyperbolic, 1.0)
        with pytest.raises(DomainError):
            sc.psi_eval(hyperbolic, 1.5)

    def test_rejects_negative_argument(self, sphere):
        with pytest.raises(DomainError):
            sc.psi_eval(sphere, -0.1)

    def test_vectorized(self, sphere):
        t = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(sc.psi_eval(sphere, t),
                                   2.0 / (1.0 + t ** 2), rtol=1e-15)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            sc.RadialConformalFactor.euclidean(0.0)
        with pytest.raises(ValueError):
            sc.RadialConformalFactor.sphere(-1.0)


class TestDerivativeConsistency:
    @pytest.mark.parametrize("kind", ["euclidean", "sphere", "hyperbolic"])
    def test_centered_difference_matches_psi_prime(self, kind, rng):
        fac = {"euclidean": sc.RadialConformalFactor.euclidean(2.0),
               "sphere": sc.RadialConformalFactor.sphere(1.3),
               "hyperbolic": sc.RadialConformalFactor.hyperbolic(1.7)}[kind]
        hi = 1.5 if math.isinf(fac.domain_radius) else 0.95 * fac.domain_radius
        pts = rng.uniform(0.05, hi, 100)
        h = 1e-6
        for t in pts:
            fd = (fac.psi(t + h) - fac.psi(t - h)) / (2.0 * h)
            exact = fac.psi_prime(t)
            scale = max(1.0, abs(exact))
            assert abs(fd - exact) <= 1e-6 * scale

    def test_custom_table_matches_its_interpolant(self, rng):
        knots = np.linspace(0.0, 2.0, 81)
        fac = sc.RadialConformalFactor.from_table(knots, 2.0 / (1.0 + knots ** 2))
        h = 1e-7
        pts = rng.uniform(0.05, 1.95, 100)
        # keep the difference stencil inside one polynomial piece
        spacing = knots[1] - knots[0]
        pts = knots[np.minimum((pts / spacing).astype(int), 79)] + 0.5 * spacing
        for t in pts:
            fd = (fac.psi(t + h) - fac.psi(t - h)) / (2.0 * h)
            exact = fac.psi_prime(t)
            assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


class TestCustomFactor:
    def test_reproduces_samples_and_bounds_domain(self):
        knots = np.linspace(0.0, 3.0, 61)
        vals = 2.0 / (1.0 + knots ** 2)
        fac = sc.RadialConformalFactor.from_table(knots, vals)
        assert fac.domain_radius == 3.0
        np.testing.assert_allclose(fac.psi(knots[:-1]), vals[:-1], rtol=1e-14)
        with pytest.raises(DomainError):
            fac.psi(3.0)

    def test_tracks_smooth_target_between_knots(self):
        # PCHIP clamps the slope at the extremum t = 0, so accuracy is O(h^2)
        # there and O(h^3) elsewhere; 61 knots over [0, 3] give ~4e-4.
        knots = np.linspace(0.0, 3.0, 61)
        fac = sc.RadialConformalFactor.from_table(knots, 2.0 / (1.0 + knots ** 2))
        t = np.linspace(0.01, 2.99, 500)
        np.testing.assert_allclose(fac.psi(t), 2.0 / (1.0 + t ** 2), atol=5e-4)

    def test_rejects_nonzero_slope_at_origin(self):
        knots = np.linspace(0.0, 1.0, 21)
        with pytest.raises(ValueError, match="psi'\\(0\\)"):
            sc.RadialConformalFactor.from_table(knots, 1.0 + knots)

    def test_rejects_bad_tables(self):
        knots = np.linspace(0.0, 1.0, 21)
        with pytest.raises(ValueError):
            sc.RadialConformalFactor.from_table(knots, np.full(21, -1.0))
        with pytest.raises(ValueError):
            sc.RadialConformalFactor.from_table(knots[::-1], np.ones(21))
        with pytest.raises(ValueError):
            sc.RadialConformalFactor.from_table(knots + 0.5, np.ones(21))


class TestLogPsiGradient:
    def test_euclidean_gradient_vanishes(self):
        fac = sc.RadialConformalFactor.euclidean(2.0)
        np.testing.assert_array_equal(sc.log_psi_gradient(fac, (0.3, 0.4)),
                                      np.zeros(2))

    def test_origin_limit_is_zero(self, sphere, hyperbolic):
        for fac in (sphere, hyperbolic):
            np.testing.assert_array_equal(sc.log_psi_gradient(fac, (0.0, 0.0)),
                                          np.zeros(2))

    def test_sphere_value_and_finite_difference(self, sphere):
        g = sc.log_psi_gradient(sphere, (1.0, 0.0))
        np.testing.assert_allclose(g, [-1.0, 0.0], atol=1e-14)
        # cross-check the radial coefficient by differencing log psi
        h = 1e-6
        fd = (math.log(sphere.psi(1.0 + h)) - math.log(sphere.psi(1.0 - h))) / (2 * h)
        assert g[0] == pytest.approx(fd, abs=1e-9)

    def test_gradient_is_radial(self, sphere, hyperbolic, rng):
        for fac in (sphere, hyperbolic):
            hi = 1.5 if math.isinf(fac.domain_radius) else 0.9 * fac.domain_radius
            for _ in range(50):
                x = rng.uniform(-hi, hi, 2) / math.sqrt(2.0)
                if np.hypot(*x) < 1e-3:
                    continue
                g = sc.log_psi_gradient(fac, x)
                cross = g[0] * x[1] - g[1] * x[0]
                assert abs(cross) <= 1e-12


class TestArcLength:
    def test_euclidean_is_linear(self):
        fac = sc.RadialConformalFactor.euclidean(1.0)
        assert sc.arc_length(fac, 2.0) == pytest.approx(2.0, abs=1e-12)

    def test_sphere_closed_form(self, sphere):
        assert sc.arc_length(sphere, 1.0) == pytest.approx(math.pi / 2.0,
                                                           abs=1e-10)

    def test_hyperbolic_closed_form(self, hyperbolic):
        assert sc.arc_length(hyperbolic, 0.5) == pytest.approx(math.log(3.0),
                                                               abs=1e-10)

    @pytest.mark.parametrize("kind", ["sphere", "hyperbolic"])
    def test_matches_antiderivative_everywhere(self, kind, rng):
        fac = (sc.RadialConformalFactor.sphere(1.1) if kind == "sphere"
               else sc.RadialConformalFactor.hyperbolic(1.4))
        hi = 2.5 if math.isinf(fac.domain_radius) else 0.95 * fac.domain_radius
        for r in rng.uniform(0.01, hi, 20):
            assert sc.arc_length(fac, r) == pytest.approx(
                closed_form_arc(fac, r), rel=1e-10)

    def test_strictly_monotone(self, sphere, rng):
        radii = np.sort(rng.uniform(0.01, 3.0, 30))
        vals = [sc.arc_length(sphere, r) for r in radii]
        assert np.all(np.diff(vals) > 0.0)

    def test_domain_error(self, hyperbolic):
        with pytest.raises(DomainError):
            sc.arc_length(hyperbolic, 1.0)


class TestAdaptiveSimpson:
    def test_polynomial_exact(self):
        assert adaptive_simpson(lambda x: x ** 3, 0.0, 2.0) == pytest.approx(
            4.0, abs=1e-12)

    def test_oscillatory(self):
        val = adaptive_simpson(math.sin, 0.0, math.pi, tol=1e-12)
        assert val == pytest.approx(2.0, abs=1e-10)

    def test_empty_interval(self):
        assert adaptive_simpson(math.exp, 1.0, 1.0) == 0.0


class TestGeodesicProfile:
    def test_round_trip_inversion(self, sphere, rng):
        prof = sc.GeodesicRadialProfile(sphere, 2.0)
        for t in rng.uniform(0.01, prof.arc_length_total, 15):
            r = prof.radius_at(float(t))
            assert abs(sc.arc_length(sphere, r) - t) <= 1e-8

    def test_total_is_arc_length_of_endpoint(self, hyperbolic):
        prof = sc.GeodesicRadialProfile(hyperbolic, 0.5)
        assert prof.arc_length_total == pytest.approx(math.log(3.0), abs=1e-10)

    def test_rejects_endpoint_outside_chart(self, hyperbolic):
        with pytest.raises(ValueError):
            sc.GeodesicRadialProfile(hyperbolic, 1.0)


class TestAlphaConcavity:
    def test_euclidean_concave(self):
        fac = sc.RadialConformalFactor.euclidean(1.0)
        prof = sc.GeodesicRadialProfile(fac, 1.0)
        assert sc.alpha_concavity_defect(prof, 101) < 0.0

    def test_hyperbolic_concave_matches_closed_form(self, hyperbolic):
        prof = sc.GeodesicRadialProfile(hyperbolic, 0.9)
        defect = sc.alpha_concavity_defect(prof, 101)
        assert defect < 0.0
        # closed-form inversion r(t) = tanh(t/2) for unit radius
        total = prof.arc_length_total
        h = total / 101
        ts = h * np.arange(1, 102)
        alpha = np.log(np.tanh(ts / 2.0))
        second = (alpha[2:] - 2 * alpha[1:-1] + alpha[:-2]) / (h * h)
        assert defect == pytest.approx(float(np.max(second)), abs=1e-6)

    def test_sphere_convex_past_equator(self, sphere):
        prof = sc.GeodesicRadialProfile(sphere, 3.0)
        assert sc.alpha_concavity_defect(prof, 101) > 0.0

    def test_sphere_concave_inside_equator(self, sphere):
        prof = sc.GeodesicRadialProfile(sphere, 0.9)
        assert sc.alpha_concavity_defect(prof, 101) < 0.0

    def test_needs_three_samples(self, sphere):
        prof = sc.GeodesicRadialProfile(sphere, 1.0)
        with pytest.raises(ValueError):
            sc.alpha_concavity_defect(prof, 2)

import math

import pytest

from cblsim import (
    SystemParams,
    ThresholdError,
    cavity_variances,
    drift_diffusion,
    mean_photon_cavity,
    mean_photon_output,
    mean_photon_output_omega0,
    output_variances,
    output_variances_direct,
    output_variances_eta0,
    output_variances_omega0,
    quad_moments_steady,
    quad_moments_transient,
    squeezing_percent,
    steady_observables,
)
from cblsim.analytic import QuadMoments, output_variances_eta0_variant
from conftest import random_below_threshold

# empty cavity driven by biased noise of intensity 0.4: M = sqrt(0.56)
M04 = 0.7483314773547883
EMPTY_PLUS = 2.2966629547095766   # 2(M + N)
EMPTY_MINUS = 0.6966629547095766  # 2(M - N)

HEADLINE = SystemParams(A=10.0, kappa=0.2, eta=0.25, omega=0.0, N=0.4)
EMPTY = SystemParams(A=0.0, kappa=0.2, eta=0.0, omega=0.0, N=0.4)


class TestTransientMoments:
    def test_initial_vacuum(self):
        moments = quad_moments_transient(HEADLINE, 0.0)
        assert moments.plus == 0.0
        assert moments.minus == 0.0

    def test_empty_cavity_saturation(self):
        moments = quad_moments_transient(EMPTY, 400.0)
        assert moments.plus == pytest.approx(EMPTY_PLUS, abs=1e-12)
        assert moments.minus == pytest.approx(EMPTY_MINUS, abs=1e-12)

    def test_exponential_form(self, rng):
        factor = -math.expm1(-3.0)  # 1 - e^-3
        for _ in range(25):
            params = random_below_threshold(rng)
            rates = drift_diffusion(params)
            steady = quad_moments_steady(params)
            at_plus_scale = quad_moments_transient(params, 3.0 / rates.lambda_minus)
            assert at_plus_scale.plus == pytest.approx(steady.plus * factor, rel=1e-12)
            at_minus_scale = quad_moments_transient(params, 3.0 / rates.lambda_plus)
            assert at_minus_scale.minus == pytest.approx(steady.minus * factor, rel=1e-12)

    def test_above_threshold_rejected(self):
        bad = SystemParams(A=10.0, kappa=0.2, eta=-0.1, omega=0.0, N=0.0)
        with pytest.raises(ThresholdError):
            quad_moments_transient(bad, 1.0)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            quad_moments_transient(HEADLINE, -1.0)


class TestSteadyMoments:
    def test_vacuum_in_vacuum_out(self):
        params = SystemParams(A=0.0, kappa=0.2, eta=0.0, omega=0.0, N=0.0)
        moments = quad_moments_steady(params)
        assert moments.plus == 0.0
        assert moments.minus == 0.0

    def test_empty_cavity_equilibrates_to_input(self):
        moments = quad_moments_steady(EMPTY)
        assert moments.plus == pytest.approx(EMPTY_PLUS, rel=1e-14)
        assert moments.minus == pytest.approx(EMPTY_MINUS, rel=1e-14)

    def test_matches_drift_diffusion_route(self, rng):
        for _ in range(500):
            params = random_below_threshold(rng)
            rates = drift_diffusion(params)
            moments = quad_moments_steady(params)
            assert moments.plus == pytest.approx(
                rates.diff_plus / rates.lambda_minus, rel=1e-12, abs=1e-12
            )
            assert moments.minus == pytest.approx(
                rates.diff_minus / rates.lambda_plus, rel=1e-12, abs=1e-12
            )

    def test_threshold_error(self):
        with pytest.raises(ThresholdError):
            quad_moments_steady(SystemParams(A=10.0, kappa=0.2, eta=-0.1, omega=0.0, N=0.0))


class TestCavityVariances:
    def test_vacuum(self):
        assert cavity_variances(QuadMoments(0.0, 0.0)) == (1.0, 1.0)

    def test_empty_cavity_case(self):
        var = cavity_variances(QuadMoments(EMPTY_PLUS, EMPTY_MINUS))
        assert var[0] == pytest.approx(3.2966629547095766, rel=1e-14)
        assert var[1] == pytest.approx(0.3033370452904234, rel=1e-14)

    def test_fifty_percent_squeezing(self):
        assert cavity_variances(QuadMoments(2.0, 0.5))[1] == 0.5


class TestOutputVariances:
    def test_empty_cavity_passthrough(self):
        # with no atoms the output is the reflected biased input itself
        for N in (0.0, 0.1, 0.4, 2.0):
            params = SystemParams(A=0.0, kappa=0.2, eta=0.0, omega=0.0, N=N)
            M = math.sqrt(N * (N + 1.0))
            var = output_variances(params, cavity_variances(quad_moments_steady(params)))
            assert var[0] == pytest.approx(1 + 2 * N + 2 * M, rel=1e-13, abs=1e-13)
            assert var[1] == pytest.approx(1 + 2 * N - 2 * M, rel=1e-13, abs=1e-13)

    def test_headline_squeezing_point(self):
        var = output_variances(HEADLINE, cavity_variances(quad_moments_steady(HEADLINE)))
        assert var[1] == pytest.approx(0.27068512093897153, rel=1e-12)
        assert abs(squeezing_percent(var[1]) - 71.0) < 3.0

    def test_second_prose_point(self):
        params = SystemParams(A=10.0, kappa=0.2, eta=0.22, omega=0.0, N=0.1)
        var = output_variances(params, cavity_variances(quad_moments_steady(params)))
        assert var[1] == pytest.approx(0.45870139102480477, rel=1e-12)
        assert abs(squeezing_percent(var[1]) - 53.0) < 3.0

    def test_direct_route_agrees(self, rng):
        for _ in range(500):
            params = random_below_threshold(rng)
            composed = output_variances(params, cavity_variances(quad_moments_steady(params)))
            direct = output_variances_direct(params)
            assert direct[0] == pytest.approx(composed[0], rel=1e-12)
            assert direct[1] == pytest.approx(composed[1], rel=1e-12)


class TestUndrivenSpecialCase:
    def test_agrees_with_general_path(self, rng):
        count = 0
        while count < 200:
            params = random_below_threshold(rng)
            params = SystemParams(A=params.A, kappa=params.kappa, eta=params.eta, omega=0.0, N=params.N)
            if not drift_diffusion(params).below_threshold:
                continue
            count += 1
            special = output_variances_omega0(params)
            general = output_variances_direct(params)
            assert special[0] == pytest.approx(general[0], rel=1e-12)
            assert special[1] == pytest.approx(general[1], rel=1e-12)

    def test_headline_value(self):
        var = output_variances_omega0(HEADLINE)
        assert var[1] == pytest.approx(0.27068512093897153, rel=1e-12)

    def test_no_coherence_no_bias_means_no_squeezing(self):
        # eta = 1 kills both the initial coherence and the gain correlations
        for A in (0.5, 5.0, 50.0):
            params = SystemParams(A=A, kappa=0.2, eta=1.0, omega=0.0, N=0.0)
            var = output_variances_omega0(params)
            assert var[1] == pytest.approx(1.0, abs=1e-12)

    def test_threshold_error(self):
        with pytest.raises(ThresholdError):
            output_variances_omega0(SystemParams(A=10.0, kappa=0.2, eta=-0.1, omega=0.0, N=0.0))

    def test_wrong_omega_rejected(self):
        with pytest.raises(ValueError):
            output_variances_omega0(SystemParams(A=1.0, kappa=0.2, eta=0.0, omega=0.5, N=0.0))


class TestBalancedSuperpositionSpecialCase:
    def test_matches_general_by_construction(self):
        params = SystemParams(A=10.0, kappa=0.2, eta=0.0, omega=0.14, N=0.4)
        assert output_variances_eta0(params) == output_variances_direct(params)

    def test_variant_form_agrees_when_undriven(self):
        params = SystemParams(A=10.0, kappa=0.2, eta=0.0, omega=0.0, N=0.4)
        variant = output_variances_eta0_variant(params)
        general = output_variances_direct(params)
        assert variant[0] == pytest.approx(general[0], rel=1e-12)
        assert variant[1] == pytest.approx(general[1], rel=1e-12)

    def test_variant_form_breaks_when_driven(self):
        params = SystemParams(A=10.0, kappa=0.2, eta=0.0, omega=0.14, N=0.4)
        variant = output_variances_eta0_variant(params)
        general = output_variances_direct(params)
        assert abs(variant[1] - general[1]) > 1e-9

    def test_driven_optimum_region(self):
        # minimum over the drive of the output minus variance, balanced atoms
        best_w, best_var = None, math.inf
        w = 0.0
        while w <= 2.0:
            params = SystemParams(A=10.0, kappa=0.2, eta=0.0, omega=w, N=0.4)
            if drift_diffusion(params).below_threshold:
                var = output_variances_eta0(params)[1]
                if var < best_var:
                    best_w, best_var = w, var
            w = round(w + 0.005, 10)
        assert 0.25 <= best_var <= 0.33
        assert 0.03 <= best_w <= 0.30


class TestMeanPhotonNumbers:
    def test_vacuum(self):
        assert mean_photon_cavity(QuadMoments(0.0, 0.0)) == 0.0

    def test_empty_cavity_holds_reservoir_intensity(self):
        moments = quad_moments_steady(EMPTY)
        assert mean_photon_cavity(moments) == pytest.approx(0.4, rel=1e-13)
        # kappa n_cav + N(1 - kappa) = N again
        assert mean_photon_output(EMPTY, moments) == pytest.approx(0.4, rel=1e-13)

    def test_symmetric_moments_carry_no_photons(self):
        assert mean_photon_cavity(QuadMoments(0.7, 0.7)) == 0.0

    def test_dark_point(self):
        params = SystemParams(A=10.0, kappa=0.2, eta=1.0, omega=0.0, N=0.0)
        moments = quad_moments_steady(params)
        assert abs(mean_photon_output(params, moments)) < 1e-14

    def test_bottom_level_with_bias(self):
        params = SystemParams(A=10.0, kappa=0.2, eta=1.0, omega=0.0, N=0.4)
        value = mean_photon_output(params, quad_moments_steady(params))
        assert value == pytest.approx(0.3215686274509804, rel=1e-12)
        assert mean_photon_output_omega0(params) == pytest.approx(value, rel=1e-12)

    def test_undriven_route_agrees(self, rng):
        count = 0
        while count < 200:
            params = random_below_threshold(rng)
            params = SystemParams(A=params.A, kappa=params.kappa, eta=params.eta, omega=0.0, N=params.N)
            if not drift_diffusion(params).below_threshold:
                continue
            count += 1
            general = mean_photon_output(params, quad_moments_steady(params))
            assert mean_photon_output_omega0(params) == pytest.approx(general, rel=1e-12, abs=1e-12)

    def test_nonnegative_below_threshold(self, rng):
        for _ in range(300):
            params = random_below_threshold(rng)
            moments = quad_moments_steady(params)
            assert mean_photon_cavity(moments) >= -1e-12
            assert mean_photon_output(params, moments) >= -1e-12


class TestSqueezingPercent:
    def test_vacuum_is_zero(self):
        assert squeezing_percent(1.0) == 0.0

    def test_prose_values(self):
        assert squeezing_percent(0.29) == pytest.approx(71.0, rel=1e-12)
        assert squeezing_percent(0.5) == pytest.approx(50.0, rel=1e-12)

    def test_excess_noise_is_negative(self):
        assert squeezing_percent(1.5) == pytest.approx(-50.0, rel=1e-12)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            squeezing_percent(-0.01)


class TestSteadyObservables:
    def test_heisenberg_products(self, rng):
        for _ in range(500):
            obs = steady_observables(random_below_threshold(rng))
            assert obs.var_plus_cav * obs.var_minus_cav >= 1.0 - 1e-9
            assert obs.var_plus_out * obs.var_minus_out >= 1.0 - 1e-9

    def test_empty_cavity_same_squeezing_inside_and_out(self):
        for N in (0.1, 0.4, 1.5):
            params = SystemParams(A=0.0, kappa=0.2, eta=0.0, omega=0.0, N=N)
            obs = steady_observables(params)
            assert obs.var_minus_cav == pytest.approx(obs.var_minus_out, rel=1e-12)
            assert obs.var_plus_cav == pytest.approx(obs.var_plus_out, rel=1e-12)

    def test_no_squeezing_without_coherence_drive_or_bias(self):
        for eta in (-1.0, 1.0):
            params = SystemParams(A=0.15, kappa=0.2, eta=eta, omega=0.0, N=0.0)
            obs = steady_observables(params)
            assert obs.var_minus_cav >= 1.0 - 1e-12
            assert obs.var_minus_out >= 1.0 - 1e-12

    def test_near_threshold_tagged(self):
        # empty-cavity rates are exactly kappa, far from threshold
        assert not steady_observables(EMPTY).near_threshold
        params = SystemParams(A=10.0, kappa=0.2, eta=-0.019999999999, omega=0.0, N=0.0)
        obs = steady_observables(params)
        assert drift_diffusion(params).lambda_minus < 1e-9
        assert obs.near_threshold

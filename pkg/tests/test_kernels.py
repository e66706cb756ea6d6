import math

import numpy as np
import pytest
from scipy import integrate

from reservelearn.kernels import (
    SQRT_2_OVER_PI,
    SQRT_2PI,
    GaussianKernel,
    KernelError,
    KernelSchedule,
    gaussian_kernel,
    l1_distance_to_heaviside,
    schedule_kernel,
)


class TestGaussianKernel:
    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(KernelError):
            gaussian_kernel(0.0)
        with pytest.raises(KernelError):
            gaussian_kernel(-0.1)

    @pytest.mark.parametrize("sigma", [0.03, 0.1, 0.3, 1.0])
    def test_density_normalised(self, sigma):
        k = gaussian_kernel(sigma)
        val, _ = integrate.quad(lambda x: float(k.density(x)), -10 * sigma, 10 * sigma,
                                epsabs=1e-12)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_density_peak_value(self):
        k = gaussian_kernel(1.0)
        assert k.density(0.0) == pytest.approx(1.0 / SQRT_2PI, abs=1e-15)
        assert k.sup_norm == pytest.approx(1.0 / SQRT_2PI, abs=1e-15)

    def test_cdf_midpoint_and_symmetry(self):
        k = gaussian_kernel(0.2)
        assert k.cdf(0.0) == pytest.approx(0.5, abs=1e-15)
        xs = np.linspace(-1, 1, 101)
        assert np.allclose(k.cdf(xs) + k.cdf(-xs), 1.0, atol=1e-14)

    def test_cdf_matches_integrated_density(self):
        k = gaussian_kernel(0.3)
        for x in (-0.5, -0.1, 0.2, 0.7):
            val, _ = integrate.quad(lambda u: float(k.density(u)), -10 * 0.3, x, epsabs=1e-12)
            assert k.cdf(x) == pytest.approx(val, abs=1e-9)

    @pytest.mark.parametrize("sigma", [0.05, 0.5, 2.0])
    def test_closed_form_summaries_match_quadrature(self, sigma):
        k = gaussian_kernel(sigma)
        assert k.l1_to_heaviside == pytest.approx(sigma * SQRT_2_OVER_PI, abs=1e-15)
        assert l1_distance_to_heaviside(k) == pytest.approx(k.l1_to_heaviside, abs=1e-8)

    def test_scale_is_sigma(self):
        assert gaussian_kernel(0.07).scale == 0.07


class TestL1Identity:
    def test_cdf_gap_equals_first_moment(self):
        # l1_distance_to_heaviside cross-checks both integral forms internally
        rng = np.random.default_rng(5)
        for sigma in rng.uniform(0.02, 3.0, 20):
            l1_distance_to_heaviside(gaussian_kernel(float(sigma)))


class TestKernelSchedule:
    def test_fixed_width_when_exponent_zero(self):
        s = KernelSchedule(0.4, 0.0)
        assert s.sigma_at(1) == 0.4
        assert s.sigma_at(10**6) == 0.4

    def test_power_law_decay(self):
        s = KernelSchedule(1.0, 0.5)
        assert s.sigma_at(1) == pytest.approx(1.0)
        assert s.sigma_at(100) == pytest.approx(0.1)
        assert s.sigma_at(10**4) == pytest.approx(0.01)

    def test_kernel_at_returns_scheduled_width(self):
        s = KernelSchedule(2.0, 0.5)
        k = schedule_kernel(s, 4)
        assert isinstance(k, GaussianKernel)
        assert k.sigma == pytest.approx(1.0)

    def test_steps_are_one_based(self):
        with pytest.raises(ValueError):
            KernelSchedule(1.0, 0.5).sigma_at(0)

    def test_rejects_bad_parameters(self):
        with pytest.raises(KernelError):
            KernelSchedule(0.0, 0.5)
        with pytest.raises(KernelError):
            KernelSchedule(1.0, -0.1)

    def test_derived_exponents(self):
        s = KernelSchedule(0.5, 0.25)
        assert s.alpha1 == 0.25
        assert s.alpha_inf == 0.25
        assert s.nu1 == pytest.approx(0.5 * SQRT_2_OVER_PI)
        assert s.nu_inf == pytest.approx(1.0 / (SQRT_2PI * 0.5))

    def test_summary_decay_tracks_exponents(self):
        s = KernelSchedule(1.0, 0.5)
        for t in (10, 1000):
            k = s.kernel_at(t)
            assert k.l1_to_heaviside == pytest.approx(s.nu1 * t**-s.alpha1, rel=1e-12)
            assert k.sup_norm == pytest.approx(s.nu_inf * t**s.alpha_inf, rel=1e-12)


class TestFeasibility:
    def test_optimal_schedule_is_feasible(self):
        assert KernelSchedule(1.0, 0.5).feasible_with_step(1.0)

    def test_decaying_too_fast_is_infeasible(self):
        # width ~ 1/t makes the squared-step sup-norm series diverge
        assert not KernelSchedule(1.0, 1.0).feasible_with_step(1.0)

    def test_constant_width_with_slow_step_is_infeasible(self):
        # fixed kernel plus alpha = 1 violates the summable-bias condition
        assert not KernelSchedule(1.0, 0.0).feasible_with_step(1.0)

    def test_step_exponent_above_one_is_infeasible(self):
        assert not KernelSchedule(1.0, 0.5).feasible_with_step(1.1)

    def test_boundary_cases(self):
        assert KernelSchedule(1.0, 0.3).feasible_with_step(0.9)
        assert not KernelSchedule(1.0, 0.1).feasible_with_step(0.9)

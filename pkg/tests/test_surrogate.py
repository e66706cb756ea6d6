import numpy as np
import pytest
from scipy import integrate

from reservelearn.distributions import (
    Kumaraswamy,
    Uniform,
    monopoly_price_oracle,
    monopoly_revenue,
)
from reservelearn.kernels import gaussian_kernel
from reservelearn.surrogate import (
    bias_bound,
    convolved_expected_revenue,
    convolved_gradient,
    convolved_payoff,
    convolved_revenue_curve,
    gradient_second_moment,
    instantaneous_revenue,
    second_moment_bound,
    smoothed_price_oracle,
    surrogate_bias,
)


class TestInstantaneousRevenue:
    def test_reserve_at_most_bid(self):
        assert instantaneous_revenue(0.3, 0.7) == 0.3

    def test_reserve_above_bid(self):
        assert instantaneous_revenue(0.8, 0.7) == 0.0

    def test_tie_pays(self):
        assert instantaneous_revenue(0.5, 0.5) == 0.5

    def test_vectorised(self):
        out = instantaneous_revenue(np.array([0.2, 0.9]), np.array([0.5, 0.5]))
        assert np.array_equal(out, [0.2, 0.0])


class TestConvolvedGradient:
    def test_zero_bid(self):
        # with b = 0 the two cdf terms cancel and the density term vanishes
        assert convolved_gradient(gaussian_kernel(0.1), 0.5, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_frozen_value_at_tie(self):
        # K(7) - K(0) - 0.7 k(0) for sigma = 0.1
        g = convolved_gradient(gaussian_kernel(0.1), 0.7, 0.7)
        assert g == pytest.approx(-2.292595962810029, abs=1e-9)

    def test_sharp_kernel_limit_below_bid(self):
        # far from the discontinuity the smoothed gradient approaches 1
        g = convolved_gradient(gaussian_kernel(1e-3), 0.3, 0.9)
        assert g == pytest.approx(1.0, abs=1e-12)

    def test_sharp_kernel_limit_above_bid(self):
        g = convolved_gradient(gaussian_kernel(1e-3), 0.9, 0.3)
        assert g == pytest.approx(0.0, abs=1e-12)

    def test_matches_payoff_derivative(self):
        kernel = gaussian_kernel(0.15)
        rng = np.random.default_rng(2)
        h = 1e-6
        for _ in range(300):
            r = rng.uniform(-0.2, 1.2)
            b = rng.uniform(0.0, 1.0)
            fd = (convolved_payoff(kernel, r + h, b) - convolved_payoff(kernel, r - h, b)) / (2 * h)
            assert convolved_gradient(kernel, r, b) == pytest.approx(fd, abs=1e-6)

    def test_unbiased_for_expected_revenue_gradient(self):
        # E_b grad p_k(r, b) equals the gradient of the smoothed expected revenue
        dist = Kumaraswamy(1, 0.4)
        kernel = gaussian_kernel(0.1)
        h = 1e-5
        for r in (0.2, 0.5, 0.71, 0.9):
            expected, err = integrate.quad(
                lambda b: float(convolved_gradient(kernel, r, b)) * float(dist.pdf(b)),
                0.0, 1.0, epsabs=1e-11, limit=200,
            )
            assert err < 1e-8
            fd = (
                convolved_expected_revenue(dist, kernel, r + h)
                - convolved_expected_revenue(dist, kernel, r - h)
            ) / (2 * h)
            assert expected == pytest.approx(fd, abs=1e-5)


class TestConvolvedPayoff:
    def test_zero_bid(self):
        assert convolved_payoff(gaussian_kernel(0.1), 0.4, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_sharp_kernel_recovers_raw_payoff(self):
        k = gaussian_kernel(1e-4)
        assert convolved_payoff(k, 0.5, 0.9) == pytest.approx(0.5, abs=1e-9)
        assert convolved_payoff(k, 0.9, 0.5) == pytest.approx(0.0, abs=1e-9)

    def test_closed_form_matches_quadrature(self):
        kernel = gaussian_kernel(0.2)
        rng = np.random.default_rng(9)
        for _ in range(50):
            r = rng.uniform(0.0, 1.0)
            b = rng.uniform(0.1, 1.0)
            quad_val, err = integrate.quad(
                lambda tau: tau * float(kernel.density(r - tau)), 0.0, b, epsabs=1e-12
            )
            assert err < 1e-8
            assert convolved_payoff(kernel, r, b) == pytest.approx(quad_val, abs=1e-8)


class TestSmoothedExpectedRevenue:
    def test_sharp_kernel_recovers_true_revenue(self):
        dist = Kumaraswamy(1, 0.4)
        for r in (0.3, 0.5, 0.71):
            smoothed = convolved_expected_revenue(dist, gaussian_kernel(1e-4), r)
            assert smoothed == pytest.approx(monopoly_revenue(dist, r), abs=1e-6)

    def test_curve_matches_pointwise_quadrature(self):
        dist = Kumaraswamy(1, 0.4)
        kernel = gaussian_kernel(0.1)
        grid = np.linspace(0.1, 0.9, 9)
        curve = convolved_revenue_curve(dist, kernel, grid)
        # tolerance reflects the Simpson rule's slow convergence near the
        # upper support edge, where the revenue derivative is singular
        for r, v in zip(grid, curve):
            assert v == pytest.approx(convolved_expected_revenue(dist, kernel, r), abs=1e-5)

    def test_monte_carlo_agreement(self):
        dist = Kumaraswamy(1, 4)
        kernel = gaussian_kernel(0.1)
        rng = np.random.default_rng(17)
        bids = dist.sample(rng, 400_000)
        for r in (0.15, 0.2, 0.4):
            vals = convolved_payoff(kernel, r, bids)
            mc = float(np.mean(vals))
            se = float(np.std(vals) / np.sqrt(bids.size))
            assert abs(mc - convolved_expected_revenue(dist, kernel, r)) < 4 * se + 1e-6


class TestSurrogateBias:
    def test_tiny_width_bias_vanishes(self):
        _, bias = surrogate_bias(Kumaraswamy(1, 0.4), gaussian_kernel(1e-4))
        assert bias < 1e-6

    def test_bias_nonnegative_and_bounded(self):
        dist = Kumaraswamy(1, 0.4)
        for sigma in (0.3, 0.1, 0.03):
            _, bias = surrogate_bias(dist, gaussian_kernel(sigma))
            assert 0.0 <= bias <= bias_bound(dist, gaussian_kernel(sigma))

    def test_smoothed_argmax_moves_toward_symmetry(self):
        # heavy smoothing pulls the argmax away from a skewed optimum
        dist = Kumaraswamy(1, 4)
        r_star, _ = monopoly_price_oracle(dist)
        r_k, _ = smoothed_price_oracle(dist, gaussian_kernel(0.3))
        assert abs(r_k - r_star) > 0.01

    def test_uniform_is_symmetric_so_bias_is_zero(self):
        # the uniform revenue parabola is symmetric about its peak, so
        # Gaussian smoothing does not move the argmax at all
        r_k, bias = surrogate_bias(Uniform(), gaussian_kernel(0.1))
        assert r_k == pytest.approx(0.5, abs=1e-5)
        assert bias < 1e-8


class TestSecondMoment:
    def test_nonnegative_and_bounded(self):
        dist = Kumaraswamy(1, 0.4)
        grid = np.linspace(0.05, 0.95, 19)
        for sigma in (0.3, 0.1):
            kernel = gaussian_kernel(sigma)
            v = gradient_second_moment(dist, kernel, grid)
            assert 0.0 <= v <= second_moment_bound(dist, kernel)

    def test_grows_as_width_shrinks(self):
        dist = Kumaraswamy(1, 0.4)
        grid = np.linspace(0.05, 0.95, 19)
        v_wide = gradient_second_moment(dist, gaussian_kernel(0.3), grid)
        v_narrow = gradient_second_moment(dist, gaussian_kernel(0.03), grid)
        assert v_narrow > v_wide

    def test_bound_scales_with_sup_norm(self):
        dist = Kumaraswamy(1, 1)
        b1 = second_moment_bound(dist, gaussian_kernel(0.1))
        b2 = second_moment_bound(dist, gaussian_kernel(0.05))
        assert b2 > b1

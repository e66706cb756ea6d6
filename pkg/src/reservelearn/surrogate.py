"""Smoothed instantaneous payoff, its closed-form gradient, and quadrature oracles.

The raw payoff r * 1{r <= b} is discontinuous in the reserve, so its
derivative is useless as a stochastic gradient. Convolving with a kernel
yields a surrogate whose gradient has the closed form

    K(r) - K(r - b) - b * k(r - b)

computable in O(1) from the kernel density and cdf. The quadrature routines
here are oracles for tests and verification reports, never part of the
learner hot loop. The bias/second-moment estimators quantify what the
smoothing costs and check it against the analytic upper bounds.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate, optimize

from .distributions import BidDistribution, grad_sup_norm, monopoly_price_oracle, monopoly_revenue
from .kernels import GaussianKernel, Kernel


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


def instantaneous_revenue(r, b):
    """Realized payoff of reserve r against bid b: r if r <= b else 0."""
    r_arr = np.asarray(r, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    out = np.where(r_arr <= b_arr, r_arr, 0.0)
    return out if out.ndim else float(out)


def convolved_gradient(kernel: Kernel, r, b):
    """Closed-form gradient of the smoothed payoff; O(1) per evaluation."""
    r_arr = np.asarray(r, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    out = kernel.cdf(r_arr) - kernel.cdf(r_arr - b_arr) - b_arr * kernel.density(r_arr - b_arr)
    return out if np.ndim(out) else float(out)


def convolved_payoff(kernel: Kernel, r, b):
    """Smoothed payoff: integral of tau * k(r - tau) for tau in [0, b].

    Gaussian kernels get the closed form
    r * (K(r) - K(r-b)) + sigma^2 * (k(r) - k(r-b)); other kernels fall back
    to adaptive quadrature.
    """
    if isinstance(kernel, GaussianKernel):
        r_arr = np.asarray(r, dtype=float)
        b_arr = np.asarray(b, dtype=float)
        s2 = kernel.sigma * kernel.sigma
        out = r_arr * (kernel.cdf(r_arr) - kernel.cdf(r_arr - b_arr)) + s2 * (
            kernel.density(r_arr) - kernel.density(r_arr - b_arr)
        )
        return out if out.ndim else float(out)
    val, err = integrate.quad(
        lambda tau: tau * float(kernel.density(r - tau)), 0.0, float(b), epsabs=1e-12
    )
    if err > 1e-8:
        raise QuadratureError("smoothed payoff quadrature did not converge")
    return val


def convolved_expected_revenue(dist: BidDistribution, kernel: Kernel, r: float) -> float:
    """Smoothed expected revenue at reserve r, by adaptive quadrature.

    Integrates revenue(tau) * k(r - tau) over the bid support (the revenue
    vanishes outside it). Oracle path only.
    """
    bmax = dist.support_max

    def integrand(tau):
        return tau * (1.0 - dist.cdf_scalar(tau)) * float(kernel.density(r - tau))

    # flag the kernel's narrow mass region so adaptive quadrature cannot miss it
    w = kernel.scale
    breaks = sorted({x for x in (r - 5 * w, r - w, r, r + w, r + 5 * w) if 0.0 < x < bmax})
    val, err = integrate.quad(integrand, 0.0, bmax, epsabs=1e-9, limit=200,
                              points=breaks or None)
    if err > 1e-6:
        raise QuadratureError("smoothed revenue quadrature did not converge")
    return val


def convolved_revenue_curve(dist: BidDistribution, kernel: Kernel, r_grid, n_tau: int = 4001):
    """Smoothed expected revenue on a grid of reserves, via Simpson weights.

    Much cheaper than per-point adaptive quadrature; accurate enough for
    argmax location and gradient sign-change counting.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    tau = np.linspace(0.0, dist.support_max, n_tau)
    rev = tau * (1.0 - dist.cdf(tau))
    h = tau[1] - tau[0]
    w = np.full(n_tau, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    w *= h / 3.0
    weighted = w * rev
    out = np.empty_like(r_grid)
    chunk = 256
    for i in range(0, r_grid.size, chunk):
        rs = r_grid[i : i + chunk]
        out[i : i + chunk] = kernel.density(rs[:, None] - tau[None, :]) @ weighted
    return out


def smoothed_price_oracle(dist: BidDistribution, kernel: Kernel, tol: float = 1e-7):
    """Argmax of the smoothed expected revenue over a padded search interval."""
    pad = 0.5
    grid = np.linspace(-pad, dist.support_max + pad, 4001)
    curve = convolved_revenue_curve(dist, kernel, grid)
    i = int(np.argmax(curve))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = optimize.minimize_scalar(
        lambda r: -convolved_expected_revenue(dist, kernel, r),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": tol / 10.0},
    )
    return float(res.x), -float(res.fun)


def surrogate_bias(dist: BidDistribution, kernel: Kernel):
    """Optimal smoothed reserve and the revenue lost by playing it.

    Returns ``(r_k_star, bias)`` where the bias is the gap between the true
    revenue at the true optimum and at the smoothed optimum. The smoothed
    argmax is clamped into the bid support before evaluating the true
    revenue, which is only defined there.
    """
    r_star, pi_star = monopoly_price_oracle(dist)
    r_k_star, _ = smoothed_price_oracle(dist, kernel)
    r_eval = min(max(r_k_star, 0.0), dist.support_max)
    bias = abs(pi_star - monopoly_revenue(dist, r_eval))
    return r_k_star, bias


def gradient_second_moment(dist: BidDistribution, kernel: Kernel, r_grid) -> float:
    """Worst-case second moment of the smoothed-payoff gradient over a grid.

    For each reserve, integrates |grad|^2 against the bid density by
    adaptive quadrature and returns the grid maximum.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    bmax = dist.support_max
    best = 0.0
    for r in r_grid:
        def integrand(b):
            g = float(convolved_gradient(kernel, r, b))
            return g * g * float(dist.pdf(b))

        val, err = integrate.quad(integrand, 0.0, bmax, epsabs=1e-9, limit=200)
        if err > 1e-5:
            raise QuadratureError("second-moment quadrature did not converge")
        best = max(best, val)
    return best


def bias_bound(dist: BidDistribution, kernel: Kernel, grad_norm: float | None = None) -> float:
    """Analytic upper bound on the smoothing bias: 2 * ||grad rev||_inf * L1 gap."""
    if grad_norm is None:
        grad_norm = grad_sup_norm(dist)
    return 2.0 * grad_norm * kernel.l1_to_heaviside


def second_moment_bound(dist: BidDistribution, kernel: Kernel, grad_norm: float | None = None) -> float:
    """Analytic upper bound on the gradient second moment."""
    if grad_norm is None:
        grad_norm = grad_sup_norm(dist)
    return 1.0 + dist.support_max * (1.0 + grad_norm) * kernel.sup_norm

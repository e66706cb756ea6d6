"""Smoothing kernels and their time-decay schedules.

A kernel is a positive, continuously differentiable, normalised density used
to smooth the discontinuous instantaneous payoff. Two scalar summaries drive
the bias/variance trade-off: the sup-norm of the density and the L1 distance
between the kernel cdf and the Heaviside step, the latter equal to the
absolute first moment of the density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr

SQRT_2 = math.sqrt(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


class KernelError(ValueError):
    """Invalid kernel construction or non-convergent kernel quadrature."""


class Kernel:
    """Abstract smoothing kernel: density, cdf, and scalar summaries."""

    def density(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    @property
    def sup_norm(self) -> float:
        raise NotImplementedError

    @property
    def l1_to_heaviside(self) -> float:
        raise NotImplementedError

    @property
    def scale(self) -> float:
        """Characteristic width, used to truncate quadrature domains."""
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianKernel(Kernel):
    """Zero-mean Gaussian density with width sigma."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise KernelError("sigma must be positive")

    def density(self, x):
        s = self.sigma
        x = np.asarray(x, dtype=float)
        out = np.exp(-(x * x) / (2.0 * s * s)) / (SQRT_2PI * s)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = ndtr(x / self.sigma)
        return out if np.ndim(out) else float(out)

    @property
    def sup_norm(self) -> float:
        return 1.0 / (SQRT_2PI * self.sigma)

    @property
    def l1_to_heaviside(self) -> float:
        return self.sigma * SQRT_2_OVER_PI

    @property
    def scale(self) -> float:
        return self.sigma


def gaussian_kernel(sigma: float) -> GaussianKernel:
    """Construct a Gaussian kernel; rejects nonpositive widths."""
    return GaussianKernel(sigma)


def l1_distance_to_heaviside(kernel: Kernel, tol: float = 1e-10) -> float:
    """Adaptive quadrature of the cdf-to-step L1 gap.

    Computes both integral forms (|K - step| and |r| k(r)) and checks they
    agree to 1e-8 before returning the first; disagreement indicates a
    kernel whose density and cdf are inconsistent.
    """
    L = 10.0 * kernel.scale
    left, el = integrate.quad(lambda r: float(kernel.cdf(r)), -L, 0.0, epsabs=tol)
    right, er = integrate.quad(lambda r: 1.0 - float(kernel.cdf(r)), 0.0, L, epsabs=tol)
    via_cdf = left + right
    mneg, en = integrate.quad(lambda r: -r * float(kernel.density(r)), -L, 0.0, epsabs=tol)
    mpos, ep = integrate.quad(lambda r: r * float(kernel.density(r)), 0.0, L, epsabs=tol)
    mom = mneg + mpos
    if max(el, er, en, ep) > 1e-8:
        raise KernelError("kernel quadrature did not converge")
    if abs(via_cdf - mom) > 1e-8:
        raise KernelError(
            f"cdf-gap and first-moment integrals disagree: {via_cdf} vs {mom}"
        )
    return via_cdf


@dataclass(frozen=True)
class KernelSchedule:
    """Power-law width decay sigma_t = sigma0 * t^(-alpha_sigma).

    ``alpha_sigma = 0`` is the fixed-kernel case. For Gaussians the derived
    decay exponents of the cdf-gap and of the sup-norm both equal
    ``alpha_sigma``, with prefactors determined by ``sigma0``.
    """

    sigma0: float
    alpha_sigma: float = 0.0

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise KernelError("sigma0 must be positive")
        if self.alpha_sigma < 0:
            raise KernelError("alpha_sigma must be nonnegative")

    def sigma_at(self, t: int) -> float:
        if t < 1:
            raise ValueError("steps are 1-based")
        return self.sigma0 * t ** (-self.alpha_sigma) if self.alpha_sigma else self.sigma0

    def kernel_at(self, t: int) -> GaussianKernel:
        return GaussianKernel(self.sigma_at(t))

    @property
    def alpha1(self) -> float:
        """Decay exponent of the cdf-to-step L1 gap."""
        return self.alpha_sigma

    @property
    def nu1(self) -> float:
        return self.sigma0 * SQRT_2_OVER_PI

    @property
    def alpha_inf(self) -> float:
        """Growth exponent of the density sup-norm."""
        return self.alpha_sigma

    @property
    def nu_inf(self) -> float:
        return 1.0 / (SQRT_2PI * self.sigma0)

    def feasible_with_step(self, alpha: float) -> bool:
        """Almost-sure convergence conditions for a step exponent alpha.

        Requires divergent step mass (alpha <= 1), summable step-times-bias
        (alpha + alpha1 > 1), and summable squared-step-times-sup-norm
        (2 alpha - alpha_inf > 1).
        """
        return (
            alpha <= 1.0
            and alpha + self.alpha1 > 1.0
            and 2.0 * alpha - self.alpha_inf > 1.0
        )


def schedule_kernel(schedule: KernelSchedule, t: int) -> GaussianKernel:
    """Kernel in effect at step t >= 1 under a width schedule."""
    return schedule.kernel_at(t)

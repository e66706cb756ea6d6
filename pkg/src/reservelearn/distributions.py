"""Parametric bid distributions and their auction-theoretic functionals.

Each family exposes an exact analytic cdf/pdf/inverse-cdf so that sampling
never touches quadrature. The revenue functionals (expected revenue at a
reserve, its gradient, virtual value, hazard rate) are defined on top of any
distribution, together with numerical validators for the regularity
assumptions the learners rely on and a brute-force oracle for the optimal
reserve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize


class DomainError(ValueError):
    """Evaluation point outside the valid domain of a functional."""


class ValidationError(ValueError):
    """A distribution or constants object failed its numerical sanity checks."""


class BidDistribution:
    """Base class for bid laws on [0, support_max] with analytic cdf/pdf.

    Subclasses implement ``_cdf``, ``_pdf``, ``_inverse_cdf`` on the support
    (vectorised); edge handling and clamping live here.
    """

    support_max: float

    # -- analytic pieces, defined on the (open) support ----------------------
    def _cdf(self, x):
        raise NotImplementedError

    def _pdf(self, x):
        raise NotImplementedError

    def _inverse_cdf(self, u):
        raise NotImplementedError

    def _pdf_edge_ok(self, edge: float) -> bool:
        """Whether the pdf is finite at the given support edge."""
        return True

    # -- public surface ------------------------------------------------------
    def cdf(self, x):
        """Cdf with clamp semantics: 0 below the support, 1 above it."""
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, 0.0, self.support_max)
        out = np.where(x < 0.0, 0.0, np.where(x > self.support_max, 1.0, self._cdf(xc)))
        return out if out.ndim else float(out)

    def cdf_scalar(self, x: float) -> float:
        """Scalar fast path used in simulation hot loops."""
        if x <= 0.0:
            return 0.0
        if x >= self.support_max:
            return 1.0
        return self._cdf_scalar(x)

    def _cdf_scalar(self, x: float) -> float:
        return float(self._cdf(x))

    def pdf(self, x):
        """Density; raises DomainError outside [0, b_max] or at singular edges."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > self.support_max):
            raise DomainError("pdf evaluated outside [0, support_max]")
        if not self._pdf_edge_ok(0.0) and np.any(x == 0.0):
            raise DomainError("pdf is singular at the lower support edge")
        if not self._pdf_edge_ok(self.support_max) and np.any(x == self.support_max):
            raise DomainError("pdf is singular at the upper support edge")
        out = self._pdf(x)
        return out if np.ndim(out) else float(out)

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0.0) or np.any(u > 1.0):
            raise DomainError("inverse_cdf argument outside [0, 1]")
        out = self._inverse_cdf(u)
        return out if np.ndim(out) else float(out)

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-cdf sampling; deterministic given the generator state."""
        u = rng.random(size)
        return self._inverse_cdf(np.asarray(u, dtype=float)) if size is not None else float(
            self._inverse_cdf(u)
        )


@dataclass(frozen=True)
class Kumaraswamy(BidDistribution):
    """Kumaraswamy(a, b) on [0, 1]: cdf 1 - (1 - x^a)^b."""

    a: float
    b: float
    support_max: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValidationError("Kumaraswamy shape parameters must be positive")
        if self.support_max != 1.0:
            raise ValidationError("Kumaraswamy support is [0, 1]")

    def _cdf(self, x):
        return 1.0 - (1.0 - x**self.a) ** self.b

    def _cdf_scalar(self, x: float) -> float:
        return 1.0 - (1.0 - x**self.a) ** self.b

    def _pdf(self, x):
        return self.a * self.b * x ** (self.a - 1.0) * (1.0 - x**self.a) ** (self.b - 1.0)

    def _pdf_edge_ok(self, edge: float) -> bool:
        if edge == 0.0:
            return self.a >= 1.0
        return self.b >= 1.0

    def _inverse_cdf(self, u):
        return (1.0 - (1.0 - u) ** (1.0 / self.b)) ** (1.0 / self.a)


@dataclass(frozen=True)
class Uniform(BidDistribution):
    """Uniform(0, b_max)."""

    support_max: float = 1.0

    def __post_init__(self):
        if not self.support_max > 0:
            raise ValidationError("Uniform support_max must be positive")

    def _cdf(self, x):
        return x / self.support_max

    def _cdf_scalar(self, x: float) -> float:
        return x / self.support_max

    def _pdf(self, x):
        return np.full_like(np.asarray(x, dtype=float), 1.0 / self.support_max)

    def _inverse_cdf(self, u):
        return u * self.support_max


@dataclass(frozen=True)
class TruncatedExponential(BidDistribution):
    """Exponential(rate) conditioned on [0, b_max]."""

    rate: float
    support_max: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0 and self.support_max > 0):
            raise ValidationError("TruncatedExponential needs rate > 0 and support_max > 0")

    @property
    def _mass(self) -> float:
        return 1.0 - math.exp(-self.rate * self.support_max)

    def _cdf(self, x):
        return (1.0 - np.exp(-self.rate * x)) / self._mass

    def _cdf_scalar(self, x: float) -> float:
        return (1.0 - math.exp(-self.rate * x)) / self._mass

    def _pdf(self, x):
        return self.rate * np.exp(-self.rate * np.asarray(x, dtype=float)) / self._mass

    def _inverse_cdf(self, u):
        return -np.log1p(-u * self._mass) / self.rate


# ---------------------------------------------------------------------------
# Revenue functionals
# ---------------------------------------------------------------------------

def monopoly_revenue(dist: BidDistribution, r):
    """Expected per-auction revenue r * (1 - F(r)) at reserve r in [0, b_max]."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0) or np.any(r_arr > dist.support_max):
        raise DomainError("reserve outside [0, support_max]")
    out = r_arr * (1.0 - dist.cdf(r_arr))
    return out if out.ndim else float(out)


def grad_monopoly_revenue(dist: BidDistribution, r):
    """Slope of the expected revenue: 1 - F(r) - r f(r), interior points only."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0) or np.any(r_arr >= dist.support_max):
        # edge pdfs may be singular; the gradient is an interior quantity
        raise DomainError("gradient defined on the open support only")
    out = 1.0 - dist.cdf(r_arr) - r_arr * dist.pdf(r_arr)
    return out if out.ndim else float(out)


def virtual_value(dist: BidDistribution, x):
    """x - (1 - F(x)) / f(x) on the open support."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0.0) or np.any(x_arr >= dist.support_max):
        raise DomainError("virtual value defined on the open support only")
    fx = dist.pdf(x_arr)
    if np.any(fx <= 0.0):
        raise DomainError("virtual value undefined where the pdf vanishes")
    out = x_arr - (1.0 - dist.cdf(x_arr)) / fx
    return out if out.ndim else float(out)


def hazard_rate(dist: BidDistribution, x):
    """f(x) / (1 - F(x)) on [0, support_max)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or np.any(x_arr >= dist.support_max):
        raise DomainError("hazard rate defined on [0, support_max)")
    Fx = dist.cdf(x_arr)
    if np.any(Fx >= 1.0):
        raise DomainError("hazard rate undefined where F = 1")
    out = np.asarray(dist.pdf(x_arr)) / (1.0 - Fx)
    return out if np.ndim(out) else float(out)


def monopoly_price_oracle(dist: BidDistribution, tol: float = 1e-7):
    """Ground-truth optimal reserve by grid search plus bounded refinement.

    Returns ``(r_star, revenue_at_r_star)``. The grid has 1e5 points; the
    refinement narrows to ``tol``, which dominates every tolerance used in
    the experiment suite.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    bmax = dist.support_max
    grid = np.linspace(0.0, bmax, 100_001)
    vals = grid * (1.0 - dist.cdf(grid))
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    res = optimize.minimize_scalar(
        lambda r: -(r * (1.0 - dist.cdf(r))),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": tol / 10.0},
    )
    r_star = float(res.x)
    return r_star, monopoly_revenue(dist, r_star)


def grad_sup_norm(dist: BidDistribution, n: int = 100_000) -> float:
    """Grid max of |d revenue / d reserve| over the open support.

    For families whose pdf diverges at an edge this is a (grid-resolution
    dependent) finite stand-in for an infinite sup; it is only used inside
    upper bounds, which it keeps valid.
    """
    grid = np.linspace(0.0, dist.support_max, n + 2)[1:-1]
    return float(np.max(np.abs(grad_monopoly_revenue(dist, grid))))


# ---------------------------------------------------------------------------
# Validators
# ---------------------------------------------------------------------------

def validate_distribution(dist: BidDistribution, grid_size: int = 10_000) -> None:
    """Numerically check positivity, regularity and hazard monotonicity.

    Raises ValidationError with a description of the first failed predicate.
    """
    bmax = dist.support_max
    if float(dist.cdf(0.0)) != 0.0 or float(dist.cdf(bmax)) != 1.0:
        raise ValidationError("cdf must be 0 at the lower edge and 1 at the upper edge")
    grid = np.linspace(0.0, bmax, grid_size + 2)
    c = dist.cdf(grid)
    if np.any(np.diff(c) < 0):
        raise ValidationError("cdf must be nondecreasing")
    interior = grid[1:-1]
    f = dist.pdf(interior)
    if np.any(f <= 0.0):
        raise ValidationError("pdf must be positive on the open support")
    total, _ = integrate.quad(lambda x: float(dist.pdf(x)), 0.0, bmax, limit=200)
    if abs(total - 1.0) > 1e-8:
        raise ValidationError(f"pdf integrates to {total}, not 1")
    psi = virtual_value(dist, interior)
    if np.any(np.diff(psi) < -1e-12):
        raise ValidationError("virtual value must be increasing (regularity)")
    lam = hazard_rate(dist, interior)
    if np.any(np.diff(lam) < -1e-12):
        raise ValidationError("hazard rate must be nondecreasing")


@dataclass(frozen=True)
class ProblemConstants:
    """Curvature modulus, revenue floor and projection interval.

    These are prior knowledge of the seller; ``validate`` checks them on a
    grid against a concrete distribution rather than estimating them.
    """

    mu: float
    c: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.mu < 0:
            raise ValidationError("mu must be nonnegative")
        if not (0.0 <= self.lo < self.hi):
            raise ValidationError("need 0 <= lo < hi")

    def validate(self, dist: BidDistribution, grid_size: int = 10_000) -> None:
        if self.hi > dist.support_max:
            raise ValidationError("projection interval exceeds the bid support")
        grid = np.linspace(self.lo, self.hi, grid_size)
        rev = monopoly_revenue(dist, grid)
        if np.min(rev) < self.c - 1e-12:
            raise ValidationError(
                f"revenue floor violated: min revenue {np.min(rev):.6g} < c = {self.c}"
            )
        r_star, _ = monopoly_price_oracle(dist)
        if not (self.lo <= r_star <= self.hi):
            raise ValidationError("optimal reserve lies outside the projection interval")
        # hazard-rate slope must dominate mu on the interior grid
        interior = np.linspace(self.lo, min(self.hi, dist.support_max * (1 - 1e-9)), grid_size)
        interior = interior[(interior > 0) & (interior < dist.support_max)]
        lam = hazard_rate(dist, interior)
        slopes = np.diff(lam) / np.diff(interior)
        if self.mu > 0 and np.min(slopes) < self.mu - 1e-9:
            raise ValidationError(
                f"hazard slope {np.min(slopes):.6g} below the declared modulus {self.mu}"
            )

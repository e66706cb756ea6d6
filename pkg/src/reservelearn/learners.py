"""Online reserve-price learners with a uniform observe-bid interface.

Two first-order learners run in constant time and memory per bid: one with a
fixed smoothing kernel and one whose kernel width and step size decay with
t. Two ERM baselines are included for comparison: an exact one over the full
sorted bid history and a discretised one on a grid refined at doubling
times. All learners clamp the reserve into a projection interval after each
update.
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .distributions import ProblemConstants
from .kernels import SQRT_2, SQRT_2PI, KernelSchedule

__all__ = [
    "StepSchedule",
    "ConvOGA",
    "VConvOGA",
    "ERM",
    "DiscreteERM",
    "project",
    "warn_if_step_too_large",
]


def project(r: float, lo: float, hi: float) -> float:
    """Clamp a reserve into [lo, hi]; non-expansive."""
    if lo > hi:
        raise ValueError("projection interval is empty")
    return min(hi, max(lo, r))


@dataclass(frozen=True)
class StepSchedule:
    """Power-law step size nu * t^(-alpha); alpha = 0 gives a constant step."""

    nu: float
    alpha: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be positive")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")

    def gamma_at(self, t: int) -> float:
        return self.nu * t ** (-self.alpha) if self.alpha else self.nu


def warn_if_step_too_large(step: StepSchedule, constants: ProblemConstants) -> None:
    """Warn when the step prefactor exceeds the rate-guarantee ceiling 1/(2 c mu)."""
    ceiling = 1.0 / (2.0 * constants.c * constants.mu)
    if step.nu > ceiling:
        warnings.warn(
            f"step prefactor nu={step.nu:.4g} exceeds 1/(2 c mu)={ceiling:.4g}; "
            "finite-time rate guarantees may not apply",
            stacklevel=2,
        )


def _gaussian_conv_grad(sigma: float, r: float, b: float) -> float:
    """Scalar smoothed-payoff gradient K(r) - K(r-b) - b k(r-b), via math.erf."""
    inv = 1.0 / (sigma * SQRT_2)
    d = r - b
    cdf_r = 0.5 * (1.0 + math.erf(r * inv))
    cdf_d = 0.5 * (1.0 + math.erf(d * inv))
    dens_d = math.exp(-(d * d) / (2.0 * sigma * sigma)) / (sigma * SQRT_2PI)
    return cdf_r - cdf_d - b * dens_d


class _Learner:
    """Common surface: reserve, step counter, update(bid), state_bytes()."""

    reserve: float
    t: int

    def update(self, bid: float) -> None:
        raise NotImplementedError

    def prefill(self, bids) -> None:
        """Bulk warm-up used by benchmarks; semantics match repeated update."""
        for b in bids:
            self.update(float(b))

    def state_bytes(self) -> bytes:
        raise NotImplementedError


class ConvOGA(_Learner):
    """Projected gradient ascent on the fixed-kernel smoothed payoff.

    State is four floats regardless of how many bids were seen.
    """

    def __init__(self, sigma: float, step: StepSchedule, lo: float, hi: float,
                 r0: float | None = None):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        if lo > hi:
            raise ValueError("projection interval is empty")
        self.sigma = sigma
        self.step = step
        self.lo = lo
        self.hi = hi
        self.t = 0
        self.reserve = project(0.5 * (lo + hi) if r0 is None else r0, lo, hi)

    def update(self, bid: float) -> None:
        self.t += 1
        gamma = self.step.gamma_at(self.t)
        g = _gaussian_conv_grad(self.sigma, self.reserve, bid)
        r = self.reserve + gamma * g
        self.reserve = self.hi if r > self.hi else (self.lo if r < self.lo else r)

    def state_bytes(self) -> bytes:
        return struct.pack("<5d", self.reserve, float(self.t), self.sigma,
                           self.step.nu, self.step.alpha)


class VConvOGA(_Learner):
    """Gradient ascent with kernel width and step size decaying in t.

    The kernel at step t is rebuilt from the schedule; nothing is cached, so
    the state stays constant-size.
    """

    def __init__(self, kernel_schedule: KernelSchedule, step: StepSchedule,
                 lo: float, hi: float, r0: float | None = None):
        if lo > hi:
            raise ValueError("projection interval is empty")
        self.kernel_schedule = kernel_schedule
        self.step = step
        self.lo = lo
        self.hi = hi
        self.t = 0
        self.reserve = project(0.5 * (lo + hi) if r0 is None else r0, lo, hi)

    def update(self, bid: float) -> None:
        self.t += 1
        t = self.t
        sched = self.kernel_schedule
        sigma = sched.sigma0 * t ** (-sched.alpha_sigma) if sched.alpha_sigma else sched.sigma0
        gamma = self.step.gamma_at(t)
        g = _gaussian_conv_grad(sigma, self.reserve, bid)
        r = self.reserve + gamma * g
        self.reserve = self.hi if r > self.hi else (self.lo if r < self.lo else r)

    def state_bytes(self) -> bytes:
        return struct.pack(
            "<6d", self.reserve, float(self.t), self.kernel_schedule.sigma0,
            self.kernel_schedule.alpha_sigma, self.step.nu, self.step.alpha,
        )


class ERM(_Learner):
    """Exact empirical-revenue maximiser over the full bid history.

    Keeps all bids sorted; after each insertion the reserve is the observed
    bid maximising r * #{b_i >= r} / t, ties broken toward the smaller bid.
    Linear memory and linear update by design: it is the batch baseline.
    """

    def __init__(self, lo: float = 0.0, hi: float = 1.0, r0: float | None = None):
        self.lo = lo
        self.hi = hi
        self.t = 0
        self.reserve = project(0.5 * (lo + hi) if r0 is None else r0, lo, hi)
        self._buf = np.empty(16, dtype=float)
        self._n = 0

    def _insert(self, bid: float) -> None:
        if self._n == self._buf.size:
            grown = np.empty(self._buf.size * 2, dtype=float)
            grown[: self._n] = self._buf[: self._n]
            self._buf = grown
        i = int(np.searchsorted(self._buf[: self._n], bid))
        self._buf[i + 1 : self._n + 1] = self._buf[i : self._n]
        self._buf[i] = bid
        self._n += 1

    def _recompute(self) -> None:
        b = self._buf[: self._n]
        counts = np.arange(self._n, 0, -1, dtype=float)
        best = int(np.argmax(b * counts))
        self.reserve = project(float(b[best]), self.lo, self.hi)

    def update(self, bid: float) -> None:
        self.t += 1
        self._insert(bid)
        self._recompute()

    def prefill(self, bids) -> None:
        bids = np.asarray(bids, dtype=float)
        merged = np.sort(np.concatenate([self._buf[: self._n], bids]))
        self._buf = merged
        self._n = merged.size
        self.t += bids.size
        self._recompute()

    def state_bytes(self) -> bytes:
        return self._buf[: self._n].tobytes()


class DiscreteERM(_Learner):
    """ERM on a regular grid whose resolution tracks the square root of t.

    Bids are bucketed; at doubling times the grid is refined to ceil(sqrt(t))
    cells, splitting existing bucket mass proportionally across overlapping
    new cells. The reserve is the grid edge maximising
    edge * (mass in cells at or above it) / t, ties toward the smaller edge.
    """

    def __init__(self, support_max: float = 1.0, lo: float = 0.0, hi: float = 1.0,
                 r0: float | None = None):
        self.support_max = support_max
        self.lo = lo
        self.hi = hi
        self.t = 0
        self.reserve = project(0.5 * (lo + hi) if r0 is None else r0, lo, hi)
        self._cells = 1
        self._edges = np.linspace(0.0, support_max, 2)
        self._counts = np.zeros(1, dtype=float)

    def _regrid(self, cells: int) -> None:
        new_edges = np.linspace(0.0, self.support_max, cells + 1)
        new_counts = np.zeros(cells, dtype=float)
        widths = np.diff(self._edges)
        for j in range(self._counts.size):
            if self._counts[j] == 0.0:
                continue
            a, b = self._edges[j], self._edges[j + 1]
            overlap_lo = np.maximum(new_edges[:-1], a)
            overlap_hi = np.minimum(new_edges[1:], b)
            frac = np.clip(overlap_hi - overlap_lo, 0.0, None) / widths[j]
            new_counts += self._counts[j] * frac
        self._cells = cells
        self._edges = new_edges
        self._counts = new_counts

    def update(self, bid: float) -> None:
        self.t += 1
        if self.t & (self.t - 1) == 0:  # power of two
            cells = math.ceil(math.sqrt(self.t))
            if cells != self._cells:
                self._regrid(cells)
        j = min(int(np.searchsorted(self._edges, bid, side="right")) - 1, self._cells - 1)
        j = max(j, 0)
        self._counts[j] += 1.0
        self._recompute()

    def prefill(self, bids) -> None:
        for b in bids:
            self.t += 1
            if self.t & (self.t - 1) == 0:
                cells = math.ceil(math.sqrt(self.t))
                if cells != self._cells:
                    self._regrid(cells)
            j = min(int(np.searchsorted(self._edges, b, side="right")) - 1, self._cells - 1)
            self._counts[max(j, 0)] += 1.0
        self._recompute()

    def _recompute(self) -> None:
        tail = np.concatenate([np.cumsum(self._counts[::-1])[::-1], [0.0]])
        rev = self._edges * tail / max(self.t, 1)
        best = int(np.argmax(rev))
        self.reserve = project(float(self._edges[best]), self.lo, self.hi)

    def state_bytes(self) -> bytes:
        return self._counts.tobytes() + self._edges.tobytes()

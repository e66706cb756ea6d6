"""Seeded experiment harness: bid streams, metrics, aggregation, benchmarks.

A stream is a piecewise-stationary sequence of (distribution, length)
phases. For each seed the harness draws bids phase by phase, records the
acting reserve's metrics before the learner sees the bid (the seller moves
simultaneously with the bidder), then feeds the bid to the learner. Oracles
for the per-phase optimal reserve are cached once per phase.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import BidDistribution, monopoly_price_oracle, validate_distribution
from .learners import _Learner

RECORD_FIELDS = ("t", "phase_id", "reserve", "bid", "instant_revenue", "expected_gap", "sq_error")


@dataclass(frozen=True)
class Phase:
    dist: BidDistribution
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("phase length must be >= 1")


@dataclass(frozen=True)
class StreamSpec:
    """Ordered phases; switch count is len(phases) - 1."""

    phases: tuple[Phase, ...]

    def __post_init__(self):
        if not self.phases:
            raise ValueError("stream needs at least one phase")

    @property
    def total(self) -> int:
        return sum(p.length for p in self.phases)

    @property
    def switches(self) -> int:
        return len(self.phases) - 1

    def validate(self) -> None:
        for p in self.phases:
            validate_distribution(p.dist)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a stream, a learner factory, seeds, and a record policy.

    ``record_stride`` of 0 selects the default policy: every step up to 1000
    then roughly 100 log-spaced points per decade.
    """

    stream: StreamSpec
    make_learner: Callable[[], _Learner]
    seeds: tuple[int, ...]
    record_stride: int = 0

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("need at least one seed")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.record_stride < 0:
            raise ValueError("record_stride must be >= 0")


def record_times(total: int, stride: int = 0) -> np.ndarray:
    """Steps at which trajectory rows are emitted."""
    if stride > 0:
        ts = np.arange(stride, total + 1, stride)
        if ts.size == 0 or ts[-1] != total:
            ts = np.append(ts, total)
        if ts[0] != 1:
            ts = np.insert(ts, 0, 1)
        return ts.astype(np.int64)
    dense = np.arange(1, min(total, 1000) + 1)
    if total <= 1000:
        return dense.astype(np.int64)
    sparse = np.unique(
        np.round(np.geomspace(1000, total, max(2, int(100 * np.log10(total / 1000)) + 1))).astype(np.int64)
    )
    return np.unique(np.concatenate([dense, sparse, [total]])).astype(np.int64)


def _phase_oracles(stream: StreamSpec):
    out = []
    for p in stream.phases:
        r_star, pi_star = monopoly_price_oracle(p.dist)
        out.append((r_star, pi_star))
    return out


def _run_seed(config: ExperimentConfig, seed: int):
    """Simulate one seed; returns (records dict, total expected-gap regret)."""
    rng = np.random.default_rng(seed)
    learner = config.make_learner()
    stream = config.stream
    oracles = _phase_oracles(stream)
    when = record_times(stream.total, config.record_stride)
    n_rec = when.size
    rec = {name: np.empty(n_rec, dtype=float) for name in RECORD_FIELDS}
    rec["t"] = when.astype(float)
    next_idx = 0
    regret = 0.0
    t = 0
    for phase_id, phase in enumerate(stream.phases):
        dist = phase.dist
        r_star, pi_star = oracles[phase_id]
        bids = dist.sample(rng, phase.length)
        cdf_scalar = dist.cdf_scalar
        for b in bids:
            t += 1
            r = learner.reserve
            gap = pi_star - r * (1.0 - cdf_scalar(r))
            regret += gap
            if next_idx < n_rec and when[next_idx] == t:
                rec["phase_id"][next_idx] = phase_id
                rec["reserve"][next_idx] = r
                rec["bid"][next_idx] = b
                rec["instant_revenue"][next_idx] = r if r <= b else 0.0
                rec["expected_gap"][next_idx] = gap
                rec["sq_error"][next_idx] = (r - r_star) ** 2
                next_idx += 1
            learner.update(b)
    return rec, regret


def run_experiment(config: ExperimentConfig, jobs: int = 1):
    """Run every seed; returns a list of (seed, records, total_regret).

    Results are sorted by seed and independent of ``jobs``, so parallel and
    serial runs produce identical output.
    """
    seeds = sorted(config.seeds)
    if jobs <= 1:
        results = [(s, *_run_seed(config, s)) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(s, pool.submit(_run_seed, config, s)) for s in seeds]
            results = [(s, *f.result()) for s, f in futures]
    return results


def dynamic_regret(records: dict, stream: StreamSpec) -> float:
    """Cumulative expected revenue gap; requires a complete step-1 trajectory."""
    t = records["t"]
    if t.size != stream.total or t[0] != 1 or t[-1] != stream.total:
        raise ValueError("dynamic regret needs records for every step 1..T")
    return float(np.sum(records["expected_gap"]))


def aggregate(results):
    """Pointwise mean and 10/90 quantile curves per metric across seeds.

    ``results`` is the output of run_experiment. Returns
    {metric: (t, mean, q10, q90)}; raises if seeds recorded different steps.
    """
    if not results:
        raise ValueError("nothing to aggregate")
    t0 = results[0][1]["t"]
    for _, rec, _ in results:
        if rec["t"].size != t0.size or np.any(rec["t"] != t0):
            raise ValueError("inconsistent record strides across seeds")
    out = {}
    for metric in ("reserve", "instant_revenue", "expected_gap", "sq_error"):
        stacked = np.stack([rec[metric] for _, rec, _ in results])
        out[metric] = (
            t0.copy(),
            stacked.mean(axis=0),
            np.quantile(stacked, 0.1, axis=0),
            np.quantile(stacked, 0.9, axis=0),
        )
    return out


def fit_loglog_slope(t, y, t_lo: float, t_hi: float, per_decade: int = 100) -> float:
    """Least-squares slope of log y against log t over a step window.

    Points are resampled onto a log-uniform grid (about ``per_decade`` per
    decade) before fitting so that densely recorded early steps do not
    dominate the regression.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = (t >= t_lo) & (t <= t_hi) & (y > 0)
    if mask.sum() < 2:
        raise ValueError("not enough points in the fit window")
    lt = np.log(t[mask])
    ly = np.log(y[mask])
    decades = (lt[-1] - lt[0]) / np.log(10.0)
    n_targets = max(2, int(per_decade * decades) + 1)
    targets = np.linspace(lt[0], lt[-1], n_targets)
    idx = np.unique(np.clip(np.searchsorted(lt, targets), 0, lt.size - 1))
    return float(np.polyfit(lt[idx], ly[idx], 1)[0])


def update_cost_bench(make_learner: Callable[[], _Learner], name: str,
                      checkpoints=(10**3, 10**6), batch: int = 10_000,
                      seed: int = 0):
    """Per-update wall time and serialized state size at given step counts.

    Warms the learner to each checkpoint on synthetic uniform bids (bulk
    path), then times a batch of genuine updates. Learners with
    superconstant update cost get a smaller batch so the benchmark finishes
    at desk scale.
    """
    rng = np.random.default_rng(seed)
    rows = []
    learner = make_learner()
    done = 0
    for target in sorted(checkpoints):
        warm = target - done
        if warm < 0:
            raise ValueError("checkpoints too close together for the batch size")
        if warm:
            learner.prefill(rng.random(warm))
        state_size = len(learner.state_bytes())
        n_batch = batch if _is_constant_update(learner) else max(batch // 100, 100)
        timed = rng.random(n_batch)
        start = time.perf_counter()
        for b in timed:
            learner.update(b)
        elapsed = time.perf_counter() - start
        done = target + n_batch
        rows.append({
            "learner": name,
            "t": target,
            "ns_per_update": elapsed / n_batch * 1e9,
            "state_bytes": state_size,
        })
    return rows


def _is_constant_update(learner: _Learner) -> bool:
    from .learners import ERM, DiscreteERM

    return not isinstance(learner, (ERM, DiscreteERM))

"""Command-line entry point for experiments, verification reports and benchmarks.

Subcommands::

    run-stationary   single-phase experiment, per-seed + aggregate CSVs
    run-tracking     multi-phase experiment, CSVs + dynamic-regret summary
    verify-bounds    bias/second-moment bound report + concavity check
    verify-gradients finite-difference and unbiasedness checks
    bench-update     per-update time and state size at two step counts
    oracle           optimal reserve, its revenue, and constants validation

Every CSV is written atomically (temp file then rename) and the effective
config is echoed into the output directory so runs can be reproduced.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from . import config as cfgmod
from .distributions import monopoly_price_oracle, validate_distribution
from .kernels import GaussianKernel
from .simulator import aggregate, fit_loglog_slope, run_experiment, update_cost_bench
from .surrogate import (
    bias_bound,
    convolved_expected_revenue,
    convolved_gradient,
    convolved_payoff,
    convolved_revenue_curve,
    gradient_second_moment,
    second_moment_bound,
    surrogate_bias,
)

TRAJECTORY_HEADER = "seed,t,phase_id,reserve,bid,instant_revenue,expected_gap,sq_error"
AGGREGATE_HEADER = "t,metric,mean,q10,q90"
BENCH_HEADER = "learner,t,ns_per_update,state_bytes"
BOUNDS_HEADER = "sigma,B_k,bound_B,V_k,bound_V,pass"


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trajectories_csv(path: str, results) -> None:
    lines = [TRAJECTORY_HEADER]
    for seed, rec, _ in results:
        n = rec["t"].size
        for i in range(n):
            lines.append(",".join([
                str(seed),
                str(int(rec["t"][i])),
                str(int(rec["phase_id"][i])),
                _fmt(float(rec["reserve"][i])),
                _fmt(float(rec["bid"][i])),
                _fmt(float(rec["instant_revenue"][i])),
                _fmt(float(rec["expected_gap"][i])),
                _fmt(float(rec["sq_error"][i])),
            ]))
    atomic_write(path, "\n".join(lines) + "\n")


def write_aggregate_csv(path: str, agg) -> None:
    lines = [AGGREGATE_HEADER]
    for metric in sorted(agg):
        t, mean, q10, q90 = agg[metric]
        for i in range(t.size):
            lines.append(",".join([
                str(int(t[i])), metric, _fmt(float(mean[i])),
                _fmt(float(q10[i])), _fmt(float(q90[i])),
            ]))
    atomic_write(path, "\n".join(lines) + "\n")


def _out_dir(args) -> str:
    out = os.environ.get("RESERVELEARN_OUT_DIR") or args.out_dir
    os.makedirs(out, exist_ok=True)
    return out


def _load(args) -> dict:
    cfg = cfgmod.load_config(args.config, args.set or ())
    if args.seeds is not None:
        cfg["seeds"] = args.seeds
    if args.seed_base is not None:
        cfg["seed_base"] = args.seed_base
    return cfg


def _echo_config(out: str, cfg: dict) -> None:
    atomic_write(os.path.join(out, "config.txt"), cfgmod.render_config(cfg))


def cmd_run_stationary(args) -> int:
    cfg = _load(args)
    experiment = cfgmod.build_experiment(cfg)
    if len(experiment.stream.phases) != 1:
        print("run-stationary needs a single-phase stream; use run-tracking", file=sys.stderr)
        return 2
    experiment.stream.validate()
    out = _out_dir(args)
    _echo_config(out, cfg)
    results = run_experiment(experiment, jobs=args.jobs)
    write_trajectories_csv(os.path.join(out, "trajectories.csv"), results)
    agg = aggregate(results)
    write_aggregate_csv(os.path.join(out, "aggregate.csv"), agg)
    total = experiment.stream.total
    t_lo = float(cfg.get("fit.t_lo", max(total / 100.0, 10.0)))
    t_hi = float(cfg.get("fit.t_hi", total))
    t, mean, _, _ = agg["sq_error"]
    slope = fit_loglog_slope(t, mean, t_lo, t_hi)
    summary = f"sq_error loglog slope over [{t_lo:g}, {t_hi:g}]: {slope:.4f}\n"
    atomic_write(os.path.join(out, "summary.txt"), summary)
    print(summary, end="")
    return 0


def cmd_run_tracking(args) -> int:
    cfg = _load(args)
    experiment = cfgmod.build_experiment(cfg)
    if len(experiment.stream.phases) < 2:
        print("run-tracking needs at least two phases; use run-stationary", file=sys.stderr)
        return 2
    factory = experiment.make_learner
    if factory.variant == "v_conv_oga" and factory.alpha_sigma > 0 and not args.allow_decaying_kernel:
        print(
            "tracking with a decaying kernel freezes adaptation; use conv_oga or "
            "kernel.alpha_sigma = 0, or pass --allow-decaying-kernel to override",
            file=sys.stderr,
        )
        return 2
    experiment.stream.validate()
    out = _out_dir(args)
    _echo_config(out, cfg)
    results = run_experiment(experiment, jobs=args.jobs)
    write_trajectories_csv(os.path.join(out, "trajectories.csv"), results)
    write_aggregate_csv(os.path.join(out, "aggregate.csv"), aggregate(results))
    regrets = np.array([regret for _, _, regret in results])
    summary = (
        f"dynamic regret estimate over T={experiment.stream.total}: "
        f"mean {regrets.mean():.6g} (std {regrets.std():.3g}, {regrets.size} seeds)\n"
    )
    atomic_write(os.path.join(out, "summary.txt"), summary)
    print(summary, end="")
    return 0


def cmd_verify_bounds(args) -> int:
    cfg = _load(args)
    stream = cfgmod.build_stream(cfg)
    dist = stream.phases[0].dist
    out = _out_dir(args)
    _echo_config(out, cfg)
    sigmas = (1.0, 0.3, 0.1, 0.03)
    from .distributions import grad_sup_norm

    grad_norm = grad_sup_norm(dist)
    r_grid = np.linspace(0.0, dist.support_max, 21)
    lines = [BOUNDS_HEADER]
    ok = True
    for sigma in sigmas:
        kernel = GaussianKernel(sigma)
        _, b_k = surrogate_bias(dist, kernel)
        v_k = gradient_second_moment(dist, kernel, r_grid)
        b_bound = bias_bound(dist, kernel, grad_norm)
        v_bound = second_moment_bound(dist, kernel, grad_norm)
        row_ok = b_k <= b_bound + 1e-12 and v_k <= v_bound + 1e-12
        ok = ok and row_ok
        lines.append(",".join([
            _fmt(sigma), _fmt(b_k), _fmt(b_bound), _fmt(v_k), _fmt(v_bound),
            "true" if row_ok else "false",
        ]))
        # concavity preservation: one sign change of the numerical gradient
        grid = np.linspace(-0.5, dist.support_max + 0.5, 10_000)
        curve = convolved_revenue_curve(dist, kernel, grid)
        signs = np.sign(np.diff(curve))
        changes = int(np.sum(np.abs(np.diff(signs[signs != 0])) > 0))
        if changes != 1:
            ok = False
            print(f"concavity check failed at sigma={sigma}: {changes} sign changes",
                  file=sys.stderr)
    atomic_write(os.path.join(out, "bounds.csv"), "\n".join(lines) + "\n")
    print(f"bounds report written; {'all rows pass' if ok else 'FAILURES present'}")
    return 0 if ok else 1


def cmd_verify_gradients(args) -> int:
    cfg = _load(args)
    stream = cfgmod.build_stream(cfg)
    dist = stream.phases[0].dist
    out = _out_dir(args)
    _echo_config(out, cfg)
    rng = np.random.default_rng(int(cfg.get("seed_base", 0)))
    n = 1000
    sigmas = 10.0 ** rng.uniform(-2, 0, n)
    rs = rng.uniform(-0.5, dist.support_max + 0.5, n)
    bs = rng.uniform(0.0, dist.support_max, n)
    max_err = 0.0
    lines = ["sigma,r,b,closed_form,central_diff,abs_err"]
    for sigma, r, b in zip(sigmas, rs, bs):
        kernel = GaussianKernel(sigma)
        g = convolved_gradient(kernel, r, b)
        # step scales with the kernel width so the third-derivative
        # truncation term stays below the tolerance at every sigma
        h = 1e-3 * sigma**1.5
        fd = (convolved_payoff(kernel, r + h, b) - convolved_payoff(kernel, r - h, b)) / (2 * h)
        err = abs(g - fd)
        max_err = max(max_err, err)
        lines.append(",".join([_fmt(float(sigma)), _fmt(float(r)), _fmt(float(b)),
                               _fmt(float(g)), _fmt(float(fd)), _fmt(float(err))]))
    atomic_write(os.path.join(out, "gradients.csv"), "\n".join(lines) + "\n")
    ok = max_err < 1e-6
    # unbiasedness: Monte Carlo mean of the stochastic gradient vs the
    # quadrature gradient of the smoothed expected revenue
    kernel = GaussianKernel(0.1)
    bids = dist.sample(rng, 200_000)
    for r in np.linspace(0.1, dist.support_max * 0.9, 5):
        grads = convolved_gradient(kernel, r, bids)
        mc, se = grads.mean(), grads.std(ddof=1) / np.sqrt(bids.size)
        hq = 1e-4
        truth = (
            convolved_expected_revenue(dist, kernel, r + hq)
            - convolved_expected_revenue(dist, kernel, r - hq)
        ) / (2 * hq)
        if abs(mc - truth) > 4 * se + 1e-6:
            ok = False
            print(f"unbiasedness check failed at r={r:.3f}: mc={mc:.6f} truth={truth:.6f}",
                  file=sys.stderr)
    print(f"max finite-difference error {max_err:.3e}; {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_bench_update(args) -> int:
    cfg = _load(args)
    stream = cfgmod.build_stream(cfg)
    factory = cfgmod.build_learner_factory(cfg, stream)
    out = _out_dir(args)
    _echo_config(out, cfg)
    rows = update_cost_bench(factory, factory.variant)
    lines = [BENCH_HEADER]
    for row in rows:
        lines.append(",".join([
            row["learner"], str(row["t"]), _fmt(float(row["ns_per_update"])),
            str(row["state_bytes"]),
        ]))
    atomic_write(os.path.join(out, "bench.csv"), "\n".join(lines) + "\n")
    for row in rows:
        print(f"{row['learner']} t={row['t']}: {row['ns_per_update']:.0f} ns/update, "
              f"{row['state_bytes']} state bytes")
    return 0


def cmd_oracle(args) -> int:
    cfg = _load(args)
    stream = cfgmod.build_stream(cfg)
    dist = stream.phases[0].dist
    validate_distribution(dist)
    r_star, pi_star = monopoly_price_oracle(dist)
    print(f"optimal reserve: {r_star:.7f}")
    print(f"revenue at optimum: {pi_star:.7f}")
    constants = cfgmod.build_constants(cfg)
    if constants is not None:
        constants.validate(dist)
        print(f"constants mu={constants.mu} c={constants.c} validated on "
              f"[{constants.lo}, {constants.hi}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reservelearn")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="path to the experiment config")
        p.add_argument("--out-dir", default="out", help="output directory for CSVs")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key")
        p.add_argument("--seeds", type=int, default=None, help="number of seeds")
        p.add_argument("--seed-base", type=int, default=None, help="first seed value")
        p.add_argument("--jobs", type=int, default=1, help="parallel seed workers")

    p = sub.add_parser("run-stationary", help="single-phase convergence experiment")
    common(p)
    p.set_defaults(func=cmd_run_stationary)

    p = sub.add_parser("run-tracking", help="multi-phase tracking experiment")
    common(p)
    p.add_argument("--allow-decaying-kernel", action="store_true",
                   help="permit a decaying-kernel learner in tracking mode")
    p.set_defaults(func=cmd_run_tracking)

    p = sub.add_parser("verify-bounds", help="bias/second-moment bound report")
    common(p)
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("verify-gradients", help="gradient and unbiasedness checks")
    common(p)
    p.set_defaults(func=cmd_verify_gradients)

    p = sub.add_parser("bench-update", help="update-cost benchmark")
    common(p)
    p.set_defaults(func=cmd_bench_update)

    p = sub.add_parser("oracle", help="optimal reserve for a distribution")
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Convergence of the decaying-kernel learner on a fixed bid distribution.

Runs the width-and-step decaying gradient learner against an exact and a
gridded empirical-maximizer baseline, then fits log-log slopes of the mean
squared reserve error and of the expected revenue gap.
"""

import numpy as np

from reservelearn import (
    ERM,
    DiscreteERM,
    ExperimentConfig,
    KernelSchedule,
    Kumaraswamy,
    Phase,
    StepSchedule,
    StreamSpec,
    VConvOGA,
    aggregate,
    fit_loglog_slope,
    run_experiment,
)

TOTAL = 20_000
SEEDS = tuple(range(20))


def make_gradient_learner():
    # width ~ 1/sqrt(t), step ~ 25/t, reserves kept off the support edges
    return VConvOGA(KernelSchedule(1.0, 0.5), StepSchedule(25.0, 1.0), 0.05, 0.95)


def run(name, factory):
    config = ExperimentConfig(
        stream=StreamSpec((Phase(Kumaraswamy(1, 0.4), TOTAL),)),
        make_learner=factory,
        seeds=SEEDS,
    )
    agg = aggregate(run_experiment(config))
    t, mse, _, _ = agg["sq_error"]
    _, gap, _, _ = agg["expected_gap"]
    mse_slope = fit_loglog_slope(t, mse, TOTAL / 100, TOTAL)
    gap_slope = fit_loglog_slope(t, gap, TOTAL / 100, TOTAL)
    print(f"{name:>14}: terminal mse {mse[-1]:.2e}, mse slope {mse_slope:+.2f}, "
          f"gap slope {gap_slope:+.2f}")


def main():
    print(f"Kumaraswamy(1, 0.4) stream, T = {TOTAL}, {len(SEEDS)} seeds")
    print("optimal reserve 1/1.4 = 0.7143\n")
    run("gradient", make_gradient_learner)
    run("exact ERM", ERM)
    run("gridded ERM", DiscreteERM)
    print("\nthe gradient learner tracks the theoretical ~t^(-1/2) mean")
    print("squared error; the batch baselines converge faster per step but")
    print("pay linear (or root-t) memory and superconstant update cost.")


if __name__ == "__main__":
    main()

"""Regenerate the shipped sample CSVs from the simulation package.

This is the producer side of the CSV contract; the plotting scripts never
import the simulation package themselves. Run from the repository root::

    python3 plots/make_samples.py
"""

import os

import numpy as np

from reservelearn import (
    ERM,
    ConvOGA,
    ExperimentConfig,
    GaussianKernel,
    KernelSchedule,
    Kumaraswamy,
    Phase,
    StepSchedule,
    StreamSpec,
    VConvOGA,
    aggregate,
    convolved_revenue_curve,
    monopoly_revenue,
    run_experiment,
)
from reservelearn.cli import write_aggregate_csv, write_trajectories_csv

SAMPLES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "samples")


def gradient_learner():
    return VConvOGA(KernelSchedule(1.0, 0.5), StepSchedule(25.0, 1.0), 0.05, 0.95)


def stationary_aggregates():
    stream = StreamSpec((Phase(Kumaraswamy(1, 0.4), 2000),))
    for name, factory in (("gradient_aggregate", gradient_learner), ("erm_aggregate", ERM)):
        config = ExperimentConfig(stream=stream, make_learner=factory,
                                  seeds=tuple(range(10)))
        agg = aggregate(run_experiment(config))
        write_aggregate_csv(os.path.join(SAMPLES, f"{name}.csv"), agg)


class _ConstStep:
    def __call__(self):
        return ConvOGA(0.1, StepSchedule(0.03, 0.0), 0.05, 0.95)


def tracking_trajectories():
    stream = StreamSpec((
        Phase(Kumaraswamy(1, 4), 300),
        Phase(Kumaraswamy(1, 0.4), 300),
        Phase(Kumaraswamy(1, 1), 300),
    ))
    config = ExperimentConfig(stream=stream, make_learner=_ConstStep(),
                              seeds=tuple(range(8)), record_stride=1)
    write_trajectories_csv(os.path.join(SAMPLES, "tracking_trajectories.csv"),
                           run_experiment(config))


def revenue_curves():
    dist = Kumaraswamy(1, 0.4)
    kernel = GaussianKernel(0.1)
    r = np.linspace(0.0, 1.0, 401)
    rev = np.asarray(monopoly_revenue(dist, r))
    smooth = convolved_revenue_curve(dist, kernel, r)
    with open(os.path.join(SAMPLES, "revenue_curves.csv"), "w") as fh:
        fh.write("r,revenue,smoothed_revenue\n")
        for row in zip(r, rev, smooth):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def main():
    os.makedirs(SAMPLES, exist_ok=True)
    stationary_aggregates()
    tracking_trajectories()
    revenue_curves()
    print(f"samples written to {SAMPLES}")


if __name__ == "__main__":
    main()

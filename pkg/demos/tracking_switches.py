"""Tracking abrupt distribution shifts with a constant step size.

Three phases with very different optimal reserves; a constant-step
fixed-kernel learner re-converges after each switch, and a larger step
shortens the transient at the price of a noisier plateau.
"""

import numpy as np

from reservelearn import (
    ConvOGA,
    ExperimentConfig,
    Kumaraswamy,
    Phase,
    StepSchedule,
    StreamSpec,
    aggregate,
    monopoly_price_oracle,
    run_experiment,
)

LENGTH = 2000
PHASES = (Kumaraswamy(1, 4), Kumaraswamy(1, 0.4), Kumaraswamy(1, 1))


class ConstStep:
    def __init__(self, gamma):
        self.gamma = gamma

    def __call__(self):
        return ConvOGA(0.1, StepSchedule(self.gamma, 0.0), 0.05, 0.95)


def main():
    stream = StreamSpec(tuple(Phase(d, LENGTH) for d in PHASES))
    r_stars = [monopoly_price_oracle(p.dist)[0] for p in stream.phases]
    print("optimal reserves by phase:", [round(r, 3) for r in r_stars])

    for gamma in (0.02, 0.06):
        config = ExperimentConfig(
            stream=stream,
            make_learner=ConstStep(gamma),
            seeds=tuple(range(20)),
            record_stride=1,
        )
        results = run_experiment(config)
        agg = aggregate(results)
        _, mean, _, _ = agg["reserve"]
        regret = np.mean([reg for _, _, reg in results])
        print(f"\ngamma = {gamma}: mean dynamic regret {regret:.1f}")
        for k in range(3):
            start, end = k * LENGTH, (k + 1) * LENGTH
            plateau = mean[start + 3 * LENGTH // 4 : end].mean()
            dev = np.abs(mean[start:end] - r_stars[k])
            settled = int(np.argmax(dev < 0.05)) if np.any(dev < 0.05) else -1
            print(f"  phase {k}: plateau reserve {plateau:.3f} "
                  f"(target {r_stars[k]:.3f}), within 0.05 after {settled} steps")
    print("\na constant step never fully converges, which is exactly what")
    print("lets it chase a moving optimum; tripling the step roughly")
    print("triples the adaptation speed.")


if __name__ == "__main__":
    main()

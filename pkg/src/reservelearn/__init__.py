"""Online learning of monopoly reserve prices in repeated lazy second-price auctions.

The library provides parametric bid distributions with their auction-theoretic
functionals, Gaussian smoothing kernels, the smoothed instantaneous-payoff
surrogate with closed-form gradients, constant-memory online gradient-ascent
learners together with ERM baselines, and a seeded simulation harness.
"""

from .distributions import (
    BidDistribution,
    Kumaraswamy,
    ProblemConstants,
    TruncatedExponential,
    Uniform,
    grad_monopoly_revenue,
    grad_sup_norm,
    hazard_rate,
    monopoly_price_oracle,
    monopoly_revenue,
    validate_distribution,
    virtual_value,
)
from .kernels import (
    GaussianKernel,
    Kernel,
    KernelSchedule,
    gaussian_kernel,
    l1_distance_to_heaviside,
    schedule_kernel,
)
from .learners import (
    ERM,
    ConvOGA,
    DiscreteERM,
    StepSchedule,
    VConvOGA,
    project,
)
from .simulator import (
    ExperimentConfig,
    Phase,
    StreamSpec,
    aggregate,
    dynamic_regret,
    fit_loglog_slope,
    run_experiment,
    update_cost_bench,
)
from .surrogate import (
    bias_bound,
    convolved_expected_revenue,
    convolved_gradient,
    convolved_payoff,
    convolved_revenue_curve,
    gradient_second_moment,
    instantaneous_revenue,
    second_moment_bound,
    surrogate_bias,
)

__version__ = "0.1.0"

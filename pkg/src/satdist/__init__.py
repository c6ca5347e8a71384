"""Learn a product distribution close to the uniform distribution on the
satisfying assignments of a Boolean function, with exact verification by
enumeration at small n."""

from .boolfn import (
    CNF,
    LTF,
    BooleanFunction,
    SatisfyingSet,
    TruthTable,
    enumerate_satisfying,
    evaluate,
    parse_function,
    sample_satisfying,
    serialize_function,
)
from .errors import (
    DimensionError,
    EnumerationLimitError,
    NumericError,
    ParseError,
    SamplingError,
    SatDistError,
    SupportError,
    UnsatisfiableError,
)
from .experiment import ExperimentConfig, LearnReport, num_trials, run_experiment
from .membership import ConfusionRecord, MembershipRule, classify, estimate_b, evaluate_classifier
from .metrics import (
    RiskDecomposition,
    empirical_risk,
    entropy,
    exact_kl,
    l1_distance,
    pinsker_bound,
    risk_decomposition,
)
from .model import (
    DistributionTable,
    SurrogateSpec,
    WeightVector,
    exact_distribution,
    log_prob,
    loss,
    subgradient_logloss,
    surrogate,
)
from .sgd import SgdConfig, SgdTrace, iteration_budget, run_sgd, run_sgd_logloss, step_size

__version__ = "0.1.0"

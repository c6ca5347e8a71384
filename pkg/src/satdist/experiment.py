"""End-to-end learning experiment with repeated independent SGD trials.

Pipeline: load f -> draw k satisfying assignments -> first 80% train, last
20% validation -> ceil(ln(1/delta)) SGD trials on the training sample, each
with its own random stream -> keep the trial with the lowest validation
log-loss -> exact KL / l1 against the uniform distribution on f^{-1}(1) when
n <= 20 -> JSON report plus one CSV trace per trial.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import rng as streams
from .boolfn import (
    AUTO_ENUM_DIM,
    BooleanFunction,
    enumerate_satisfying,
    load_function,
    sample_satisfying,
)
from .errors import NumericError, UnsatisfiableError
from .membership import MembershipRule, estimate_b, evaluate_classifier
from .metrics import best_in_ball, empirical_risk, exact_kl, l1_distance, pinsker_bound
from .model import DistributionTable, SurrogateSpec, exact_distribution, logloss_lipschitz
from .sgd import SgdConfig, SgdTrace, run_sgd_logloss

SCHEMA = "satdist-report/1"
TRAIN_FRACTION = 0.8
MIN_SAMPLES = 5
_PINSKER_SLACK = 1e-12


def num_trials(delta: float) -> int:
    """max(1, ceil(ln(1/delta))) independent repetitions."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    return max(1, math.ceil(math.log(1.0 / delta)))


@dataclass(frozen=True)
class ExperimentConfig:
    function_path: Optional[str]
    fmt: str = "dimacs-cnf"
    epsilon: float = 0.1
    delta: float = 0.05
    samples: int = 1000
    seed: int = 0
    radius: float = 1.0
    rho: Optional[float] = None  # default: 2 sqrt(n), the log-loss gradient bound
    surrogate: str = "softplus"
    eps1: Optional[float] = None  # default: epsilon
    out: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        num_trials(self.delta)
        if self.samples < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} samples for the train/validation split")
        if not self.radius > 0 or (self.rho is not None and not self.rho > 0):
            raise ValueError("radius and rho must be positive")
        if self.eps1 is not None and self.eps1 < 0:
            raise ValueError("eps1 must be non-negative")
        SurrogateSpec(self.surrogate)

    def echo(self) -> dict:
        """Config fields that determine the result (output location and workers excluded)."""
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        return d


@dataclass
class TrialResult:
    trial: int
    wbar: list
    train_risk: float
    validation_risk: float
    steps: int
    b: float
    kl: Optional[float] = None
    l1: Optional[float] = None
    pinsker: Optional[float] = None
    excess_kl: Optional[float] = None
    confusion: Optional[dict] = None


@dataclass
class LearnReport:
    config: dict
    n: int
    radius: float
    rho: float
    T: int
    eta: float
    num_trials: int
    total_steps: int
    num_samples_train: int
    num_samples_validation: int
    num_satisfying: Optional[int]
    exact_metrics: bool
    surrogate: str
    eps1: float
    trials: list
    selected: int
    timing: dict = field(default_factory=dict)
    traces: list = field(default_factory=list, repr=False)

    @property
    def best(self) -> TrialResult:
        return self.trials[self.selected]

    def to_dict(self) -> dict:
        d = {"schema": SCHEMA}
        d.update(asdict(self))
        d.pop("traces")
        d["selected_trial"] = d.pop("selected")
        d["timing"] = d.pop("timing")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def write(self, out_dir) -> Path:
        """Write report.json, wbar.txt (selected weights) and trace_<i>.csv."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json())
        (out / "wbar.txt").write_text("".join(f"{v!r}\n" for v in self.best.wbar))
        for i, trace in enumerate(self.traces):
            trace.to_csv(out / f"trace_{i}.csv")
        return out / "report.json"


def run_experiment(cfg: ExperimentConfig, f: Optional[BooleanFunction] = None) -> LearnReport:
    """Run the full pipeline; ``f`` overrides loading ``cfg.function_path``."""
    clock = time.perf_counter
    timing = {}
    start = clock()

    if f is None:
        f = load_function(cfg.function_path, cfg.fmt)
    n = f.n
    if f.is_trivially_unsatisfiable():
        raise UnsatisfiableError("function has no satisfying assignment")
    exact = n <= AUTO_ENUM_DIM
    support = enumerate_satisfying(f) if exact else None
    if support is not None and len(support) == 0:
        raise UnsatisfiableError("function has no satisfying assignment")

    X = sample_satisfying(f, streams.stream(cfg.seed, *streams.DATA), size=cfg.samples,
                          support=support)
    n_train = int(TRAIN_FRACTION * cfg.samples)
    train, val = X[:n_train], X[n_train:]
    timing["sample"] = clock() - start

    rho = cfg.rho if cfg.rho is not None else logloss_lipschitz(n)
    sgd_cfg = SgdConfig.from_budget(cfg.radius, rho, cfg.epsilon, seed=cfg.seed)
    trials = num_trials(cfg.delta)

    def one_trial(i: int) -> SgdTrace:
        return run_sgd_logloss(train, sgd_cfg, rng=streams.trial_stream(cfg.seed, i))

    t = clock()
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            traces = list(pool.map(one_trial, range(trials)))
    else:
        traces = [one_trial(i) for i in range(trials)]
    timing["sgd"] = clock() - t

    t = clock()
    g = SurrogateSpec(cfg.surrogate)
    eps1 = cfg.eps1 if cfg.eps1 is not None else cfg.epsilon
    target = DistributionTable.uniform_over(support.indices, n) if exact else None
    best_kl = None
    if exact:
        best = best_in_ball(target, cfg.radius)
        best_kl = exact_kl(target, exact_distribution(best.w, n))

    results = []
    for i, trace in enumerate(traces):
        wbar = trace.wbar
        res = TrialResult(
            trial=i,
            wbar=wbar.tolist(),
            train_risk=empirical_risk(wbar, train),
            validation_risk=empirical_risk(wbar, val),
            steps=trace.steps,
            b=estimate_b(g, wbar, target if exact else train),
        )
        if exact:
            Pw = exact_distribution(wbar, n)
            res.kl = exact_kl(target, Pw)
            res.l1 = l1_distance(target, Pw)
            res.pinsker = pinsker_bound(res.kl)
            res.excess_kl = res.kl - best_kl
            if res.l1 > res.pinsker + _PINSKER_SLACK:
                raise NumericError(f"trial {i}: l1 {res.l1} exceeds Pinsker bound {res.pinsker}")
            rule = MembershipRule(g, wbar, res.b, eps1)
            res.confusion = evaluate_classifier(rule, f).to_dict()
        results.append(res)
    timing["metrics"] = clock() - t

    selected = int(np.argmin([r.validation_risk for r in results]))
    timing["total"] = clock() - start
    return LearnReport(
        config=cfg.echo(),
        n=n,
        radius=cfg.radius,
        rho=rho,
        T=sgd_cfg.T,
        eta=sgd_cfg.eta,
        num_trials=trials,
        total_steps=sum(tr.steps for tr in traces),
        num_samples_train=len(train),
        num_samples_validation=len(val),
        num_satisfying=len(support) if exact else None,
        exact_metrics=exact,
        surrogate=g.kind,
        eps1=eps1,
        trials=results,
        selected=selected,
        timing=timing,
        traces=traces,
    )

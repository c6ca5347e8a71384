import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satdist.boolfn import conjunction, constant, cube, enumerate_satisfying, random_ltf
from satdist.errors import DimensionError, EnumerationLimitError
from satdist.experiment import ExperimentConfig, run_experiment
from satdist.membership import (
    ConfusionRecord,
    MembershipRule,
    accepts,
    classify,
    estimate_b,
    evaluate_classifier,
)
from satdist.model import DistributionTable, SurrogateSpec, exact_distribution, sample_model

SOFTPLUS = SurrogateSpec("softplus")


def test_b_at_zero_weights_is_ln2(rng):
    assert estimate_b(SOFTPLUS, np.zeros(3), DistributionTable.uniform(3)) == pytest.approx(
        math.log(2), abs=1e-15)
    S = cube(3)[rng.integers(8, size=10)]
    assert estimate_b(SOFTPLUS, np.zeros(3), S) == pytest.approx(math.log(2), abs=1e-15)


def test_b_point_mass():
    w = np.array([0.4, -0.7])
    P = DistributionTable.point_mass(1, 2)  # x = (-1, +1)
    expected = math.log1p(math.exp(-0.4 - 0.7))
    assert estimate_b(SOFTPLUS, w, P) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("kind", ["softplus", "pseudo-huber", "logistic"])
def test_b_exact_vs_monte_carlo(kind, rng):
    g = SurrogateSpec(kind)
    n = 6
    w_model = rng.normal(size=n)
    wbar = rng.normal(size=n) * 0.4
    exact = estimate_b(g, wbar, exact_distribution(w_model))
    S = sample_model(w_model, rng, size=100_000)
    values = g.value(S @ wbar)
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(estimate_b(g, wbar, S) - exact) <= 3 * se


def test_b_empty_and_mismatch():
    with pytest.raises(ValueError):
        estimate_b(SOFTPLUS, np.zeros(2), np.empty((0, 2), dtype=np.int8))
    with pytest.raises(DimensionError):
        estimate_b(SOFTPLUS, np.zeros(3), DistributionTable.uniform(2))


def test_classify_huge_tolerance_accepts_everything(rng):
    rule = MembershipRule(SOFTPLUS, rng.normal(size=4), 0.3, 1e9)
    assert all(classify(rule, x) for x in cube(4))


def test_classify_boundary_inclusive():
    w = np.array([0.5, 0.25])
    x = np.array([1, -1])
    b = float(SOFTPLUS.value(x @ w))
    assert classify(MembershipRule(SOFTPLUS, w, b, 0.0), x)
    assert not classify(MembershipRule(SOFTPLUS, w, b + 1e-9, 0.0), x)


def test_classify_dimension():
    rule = MembershipRule(SOFTPLUS, np.zeros(2), 0.0, 1.0)
    with pytest.raises(DimensionError):
        classify(rule, (1, 1, 1))


def test_rule_validation():
    with pytest.raises(ValueError):
        MembershipRule(SOFTPLUS, np.zeros(2), 0.0, -1.0)
    with pytest.raises(ValueError):
        MembershipRule(SOFTPLUS, np.zeros(2), float("inf"), 1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.floats(0, 2), st.floats(0, 2))
def test_accept_set_monotone_in_tolerance(seed, e1, e2):
    rng = np.random.default_rng(seed)
    w = rng.normal(size=5)
    b = float(rng.uniform(0, 2))
    lo, hi = sorted((e1, e2))
    small = accepts(MembershipRule(SOFTPLUS, w, b, lo), cube(5))
    large = accepts(MembershipRule(SOFTPLUS, w, b, hi), cube(5))
    assert np.all(large[small])


def test_classify_matches_vectorized(rng):
    rule = MembershipRule(SurrogateSpec("logistic"), rng.normal(size=4), 0.7, 0.2)
    X = cube(4)
    assert [classify(rule, x) for x in X] == list(accepts(rule, X))


def test_constant_true_always_accept():
    rule = MembershipRule(SOFTPLUS, np.zeros(3), 0.0, 1e9)
    rec = evaluate_classifier(rule, constant(3))
    assert (rec.tp, rec.fp, rec.tn, rec.fn) == (8, 0, 0, 0)
    assert rec.precision == 1.0 and rec.recall == 1.0


def test_undefined_precision():
    rule = MembershipRule(SOFTPLUS, np.zeros(2), 100.0, 0.0)
    rec = evaluate_classifier(rule, constant(2))
    assert rec.precision is None and rec.recall == 0.0
    assert rec.to_dict()["precision"] is None


def test_confusion_against_brute_force(rng):
    f = random_ltf(6, rng)
    rule = MembershipRule(SOFTPLUS, rng.normal(size=6) * 0.3, 0.7, 0.15)
    rec = evaluate_classifier(rule, f)
    sat = {tuple(x) for x in enumerate_satisfying(f)}
    tp = fp = tn = fn = 0
    for x in cube(6):
        acc, truth = classify(rule, x), tuple(x) in sat
        tp += acc and truth
        fp += acc and not truth
        tn += (not acc) and (not truth)
        fn += (not acc) and truth
    assert rec == ConfusionRecord(tp, fp, tn, fn)


def test_evaluate_limits():
    rule = MembershipRule(SOFTPLUS, np.zeros(21), 0.0, 1.0)
    with pytest.raises(EnumerationLimitError):
        evaluate_classifier(rule, conjunction(21))
    with pytest.raises(DimensionError):
        evaluate_classifier(MembershipRule(SOFTPLUS, np.zeros(2), 0.0, 1.0), constant(3))


def test_and_pipeline_confusion_counts():
    cfg = ExperimentConfig(None, epsilon=0.3, delta=0.3, samples=50, seed=5)
    report = run_experiment(cfg, f=conjunction(2))
    rec = report.best.confusion
    assert rec["tp"] + rec["fp"] + rec["tn"] + rec["fn"] == 4


def test_random_ltf_pipeline_count_conservation():
    f = random_ltf(8, np.random.default_rng(3))
    cfg = ExperimentConfig(None, epsilon=0.5, delta=0.3, samples=200, seed=1)
    report = run_experiment(cfg, f=f)
    for trial in report.trials:
        c = trial.confusion
        assert c["tp"] + c["fp"] + c["tn"] + c["fn"] == 256

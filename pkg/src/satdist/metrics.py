"""Exact divergences between distribution tables, and the log-loss risk.

For the log-loss l(w, x) = -log P_w(x), the risk under a target P splits as

    E_P[l(w, x)] = KL(P || P_w) + H(P),

so minimizing risk over w minimizes KL.  Everything here is in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionError, SupportError
from .model import DistributionTable, WeightVector, exact_distribution, log_partition, loss


@dataclass(frozen=True)
class RiskDecomposition:
    risk: float
    kl: float
    entropy: float

    @property
    def residual(self) -> float:
        return self.risk - (self.kl + self.entropy)


def _same_n(P: DistributionTable, Q: DistributionTable) -> None:
    if P.n != Q.n:
        raise DimensionError(f"tables have dimensions {P.n} and {Q.n}")


def exact_kl(P: DistributionTable, Q: DistributionTable) -> float:
    """KL(P || Q) = sum_{P(x)>0} P(x) log(P(x)/Q(x)).

    Raises SupportError (carrying the first offending index) when P puts
    mass where Q has none.
    """
    _same_n(P, Q)
    p, q = P.probs, Q.probs
    mask = p > 0
    bad = np.flatnonzero(mask & (q <= 0))
    if bad.size:
        raise SupportError(bad[0])
    terms = p[mask] * (np.log(p[mask]) - np.log(q[mask]))
    # clip the tiny negative values that rounding produces when P == Q
    return max(0.0, float(terms.sum()))


def l1_distance(P: DistributionTable, Q: DistributionTable) -> float:
    """sum_x |P(x) - Q(x)|, which lies in [0, 2] (twice the total variation)."""
    _same_n(P, Q)
    return float(np.abs(P.probs - Q.probs).sum())


def entropy(P: DistributionTable) -> float:
    """Shannon entropy with 0 log(1/0) = 0."""
    p = P.probs[P.probs > 0]
    return max(0.0, float(-(p * np.log(p)).sum()))


def risk_decomposition(P: DistributionTable, w) -> RiskDecomposition:
    """Split the expected log-loss of w under P into KL and entropy."""
    w = np.asarray(w, dtype=float)
    if w.size != P.n:
        raise DimensionError(f"weights have length {w.size}, table n={P.n}")
    # E_P[-log P_w(x)] = log Z(w) - <w, E_P[x]>
    risk = log_partition(w) - float(P.mean() @ w)
    return RiskDecomposition(risk, exact_kl(P, exact_distribution(w, P.n)), entropy(P))


def empirical_risk(w, samples) -> float:
    """Mean log-loss of w over the rows of ``samples``."""
    S = np.asarray(samples)
    if S.ndim == 1:
        S = S[None, :]
    if S.shape[0] == 0:
        raise ValueError("empirical risk of an empty sample")
    return float(np.mean(loss(w, S)))


def pinsker_bound(kl: float) -> float:
    """sqrt(2 KL): an upper bound on the l1 distance of the same pair."""
    if kl < 0:
        raise ValueError(f"KL must be non-negative, got {kl!r}")
    return math.sqrt(2.0 * kl)


# ---------------------------------------------------------------------------
# Best-in-ball comparator for targets the family cannot represent
# ---------------------------------------------------------------------------


def best_in_ball(P: DistributionTable, radius: float) -> WeightVector:
    """Exact risk minimizer over ||w|| <= radius.

    The risk is sum_i log(2 cosh w_i) - <w, m> with m = E_P[x], so the KKT
    conditions decouple: tanh(w_i) + lam * w_i = m_i with lam >= 0 chosen so
    that ||w|| = radius whenever the unconstrained optimum artanh(m) lies
    outside the ball.
    """
    m = np.clip(P.mean(), -1.0, 1.0)

    def solve(lam):
        if lam == 0:
            return np.arctanh(m)
        # tanh(t) + lam*t is increasing; the root has the sign of m_i and |t| <= |m_i|/lam
        out = np.zeros_like(m)
        for i, mi in enumerate(m):
            if mi != 0:
                root = brentq(lambda t: math.tanh(t) + lam * t - abs(mi), 0.0, abs(mi) / lam,
                              xtol=1e-14, rtol=1e-14)
                out[i] = math.copysign(root, mi)
        return out

    if np.all(np.abs(m) < 1):
        w = solve(0.0)
        if np.linalg.norm(w) <= radius:
            return WeightVector(w, radius)

    def gap(log_lam):
        return np.linalg.norm(solve(math.exp(log_lam))) - radius

    lo = hi = 0.0
    while gap(lo) <= 0:
        lo -= 1.0
    while gap(hi) > 0:
        hi += 1.0
    log_lam = brentq(gap, lo, hi, xtol=1e-13, rtol=1e-14)
    return WeightVector.projected(solve(math.exp(log_lam)), radius)


def excess_risk(P: DistributionTable, w, radius: float) -> float:
    """Risk of w minus the best risk attainable in the ball."""
    best = best_in_ball(P, radius)
    return risk_decomposition(P, w).risk - risk_decomposition(P, best.w).risk

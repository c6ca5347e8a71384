"""Projected, averaged stochastic subgradient descent on a Euclidean ball.

Starting from w_1 = 0, each step draws x, takes v_t in the subdifferential
of the loss at (w_t, x), moves w <- w - eta * v_t and rescales back into
the ball of the given radius.  The output is the plain average of the T
iterates w_1..w_T (the starting zero included).

For a convex loss that is rho-Lipschitz in w, T >= (radius*rho/epsilon)^2
steps with eta = radius / (rho * sqrt(T)) give an expected excess risk of
at most epsilon.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numba
import numpy as np

from .errors import DimensionError, NumericError
from .model import project_to_ball

Oracle = Callable[[np.ndarray, np.ndarray], np.ndarray]
Sampler = Callable[[np.random.Generator], np.ndarray]

# relative slack absorbing float noise in B^2 rho^2 / eps^2 before the ceiling
_CEIL_SLACK = 1e-12


def _positive(**kwargs):
    for name, value in kwargs.items():
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{name} must be positive and finite, got {value!r}")


def iteration_budget(radius: float, rho: float, epsilon: float) -> int:
    """Smallest integer T >= radius^2 rho^2 / epsilon^2."""
    _positive(radius=radius, rho=rho, epsilon=epsilon)
    ratio = (radius * rho / epsilon) ** 2
    return max(1, math.ceil(ratio * (1 - _CEIL_SLACK)))


def step_size(radius: float, rho: float, T: int) -> float:
    """Constant step radius / (rho * sqrt(T))."""
    _positive(radius=radius, rho=rho, T=T)
    return radius / (rho * math.sqrt(T))


@dataclass(frozen=True)
class SgdConfig:
    radius: float
    rho: float
    epsilon: float
    T: int
    eta: float
    seed: int = 0

    def __post_init__(self):
        _positive(radius=self.radius, rho=self.rho, epsilon=self.epsilon, eta=self.eta)
        if int(self.T) != self.T or self.T < 1:
            raise ValueError(f"T must be a positive integer, got {self.T!r}")

    @classmethod
    def from_budget(cls, radius: float, rho: float, epsilon: float, seed: int = 0) -> "SgdConfig":
        """Derive (T, eta) from the accuracy target."""
        T = iteration_budget(radius, rho, epsilon)
        return cls(radius, rho, epsilon, T, step_size(radius, rho, T), seed)


@dataclass
class SgdTrace:
    wbar: np.ndarray
    norms: np.ndarray
    steps: int
    risk_estimates: Optional[np.ndarray] = None
    iterates: Optional[np.ndarray] = None

    def to_csv(self, path) -> None:
        """Columns t, risk_estimate, iterate_norm (t starts at 1)."""
        risks = self.risk_estimates
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "risk_estimate", "iterate_norm"])
            for t, norm in enumerate(self.norms.tolist()):
                risk = "" if risks is None else repr(float(risks[t]))
                writer.writerow([t + 1, risk, repr(norm)])


def run_sgd(
    oracle: Oracle,
    sampler: Sampler,
    config: SgdConfig,
    *,
    rng: Optional[np.random.Generator] = None,
    risk: Optional[Callable[[np.ndarray, np.ndarray], float]] = None,
    keep_iterates: bool = False,
) -> SgdTrace:
    """Run projected averaged SGD.

    ``sampler(rng)`` returns one assignment; ``oracle(w, x)`` returns a
    subgradient of the loss at w.  If ``risk`` is given, ``risk(w_t, x_t)``
    is recorded each step as a one-sample risk estimate.  ``rng`` defaults
    to ``np.random.default_rng(config.seed)``.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    T, eta, radius = int(config.T), config.eta, config.radius

    x = np.asarray(sampler(rng))
    n = x.shape[-1]
    w = np.zeros(n)
    total = np.zeros(n)
    norms = np.empty(T)
    risks = np.empty(T) if risk is not None else None
    iterates = np.empty((T, n)) if keep_iterates else None

    for t in range(T):
        if t:
            x = np.asarray(sampler(rng))
        total += w
        norms[t] = np.linalg.norm(w)
        if keep_iterates:
            iterates[t] = w
        if risks is not None:
            risks[t] = risk(w, x)
        v = np.asarray(oracle(w, x), dtype=float)
        if v.shape != w.shape:
            raise DimensionError(f"oracle returned shape {v.shape}, expected {w.shape}")
        if not np.all(np.isfinite(v)):
            raise NumericError(f"non-finite subgradient at step {t + 1}")
        w = project_to_ball(w - eta * v, radius)

    return SgdTrace(total / T, norms, T, risks, iterates)


def run_sgd_logloss(
    samples: np.ndarray,
    config: SgdConfig,
    *,
    rng: Optional[np.random.Generator] = None,
    record_risk: bool = True,
) -> SgdTrace:
    """Compiled fast path: log-loss SGD drawing uniformly from ``samples``.

    Equivalent to :func:`run_sgd` with the oracle tanh(w) - x and a sampler
    that picks row ``idx[t]`` of ``samples``, where ``idx`` is drawn up front
    as ``rng.integers(len(samples), size=T)``.  Each step costs O(n).
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    X = np.ascontiguousarray(samples, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("samples must be a non-empty (k, n) array")
    idx = rng.integers(X.shape[0], size=int(config.T))
    wbar, norms, risks, bad = _logloss_kernel(X, idx, config.eta, config.radius, record_risk)
    if bad:
        raise NumericError(f"non-finite subgradient at step {bad}")
    return SgdTrace(wbar, norms, int(config.T), risks if record_risk else None)


@numba.njit(cache=True, nogil=True)
def _logloss_kernel(X, idx, eta, radius, record_risk):
    T = idx.shape[0]
    n = X.shape[1]
    w = np.zeros(n)
    total = np.zeros(n)
    norms = np.empty(T)
    risks = np.empty(T if record_risk else 0)
    for t in range(T):
        x = X[idx[t]]
        sq = 0.0
        for i in range(n):
            total[i] += w[i]
            sq += w[i] * w[i]
        norms[t] = math.sqrt(sq)
        if record_risk:
            r = 0.0
            for i in range(n):
                a = abs(w[i])
                r += a + math.log1p(math.exp(-2.0 * a)) - w[i] * x[i]
            risks[t] = r
        sq = 0.0
        for i in range(n):
            v = math.tanh(w[i]) - x[i]
            if not math.isfinite(v):
                return total / T, norms, risks, t + 1
            w[i] -= eta * v
            sq += w[i] * w[i]
        if sq > radius * radius:
            scale = radius / math.sqrt(sq)
            for i in range(n):
                w[i] *= scale
    return total / T, norms, risks, 0

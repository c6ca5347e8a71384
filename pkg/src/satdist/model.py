"""Independent-bit exponential family on {-1,+1}^n and surrogate losses.

The model is

    P_w(x) = exp(<w, x>) / Z(w),   log Z(w) = sum_i log(2 cosh w_i),

so each bit is an independent ±1 variable with P(x_i = +1) = e^{w_i} / (2 cosh w_i).
The log-loss -log P_w(x) is convex in w with gradient tanh(w) - x.
All logarithms are natural.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit, log_expit

from .boolfn import MAX_ENUM_DIM, as_assignment, indices_to_points, iter_cube_blocks
from .errors import DimensionError, EnumerationLimitError

_NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Parameter vector w with ||w||_2 <= radius."""

    w: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        w = np.array(self.w, dtype=float).ravel()
        w.setflags(write=False)
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.linalg.norm(w) > self.radius * (1 + _NORM_TOL) + _NORM_TOL:
            raise ValueError(f"||w|| = {np.linalg.norm(w):.6g} exceeds radius {self.radius}")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "radius", float(self.radius))

    @classmethod
    def zeros(cls, n: int, radius: float = 1.0) -> "WeightVector":
        return cls(np.zeros(n), radius)

    @classmethod
    def projected(cls, w, radius: float = 1.0) -> "WeightVector":
        return cls(project_to_ball(np.asarray(w, dtype=float), radius), radius)

    @property
    def n(self) -> int:
        return self.w.size

    def __array__(self, dtype=None, copy=None):
        return self.w if dtype is None else self.w.astype(dtype)

    def save(self, path) -> None:
        """One real per line (repr precision, round-trips exactly)."""
        Path(path).write_text("".join(f"{v!r}\n" for v in self.w.tolist()))

    @classmethod
    def load(cls, path, radius: float | None = None) -> "WeightVector":
        values = [float(tok) for tok in Path(path).read_text().split()]
        w = np.array(values)
        if radius is None:
            radius = max(1.0, float(np.linalg.norm(w)))
        return cls(w, radius)


def project_to_ball(w: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto {||w|| <= radius} by rescaling."""
    norm = np.linalg.norm(w)
    if norm > radius:
        return w * (radius / norm)
    return w


def _weights(w) -> np.ndarray:
    return np.asarray(w, dtype=float)


def _check(w: np.ndarray, x: np.ndarray) -> None:
    if x.shape[-1] != w.shape[-1]:
        raise DimensionError(f"weights have length {w.shape[-1]}, assignment {x.shape[-1]}")


def log_cosh2(w) -> np.ndarray:
    """Elementwise log(2 cosh w), stable for large |w|."""
    a = np.abs(w)
    return a + np.log1p(np.exp(-2.0 * a))


def log_partition(w) -> float:
    return float(np.sum(log_cosh2(_weights(w))))


def log_prob(w, x):
    """log P_w(x) in nats; ``x`` may be one assignment or rows of assignments."""
    w = _weights(w)
    x = as_assignment(x)
    _check(w, x)
    return x @ w - log_partition(w)


def loss(w, x):
    """Log-loss -log P_w(x)."""
    return -log_prob(w, x)


def subgradient_logloss(w, x) -> np.ndarray:
    """Gradient of the log-loss in w: tanh(w) - x."""
    w = _weights(w)
    x = as_assignment(x)
    _check(w, x)
    return np.tanh(w) - x


def marginals(w) -> np.ndarray:
    """P_w(x_i = +1) for each coordinate."""
    return expit(2.0 * _weights(w))


def logloss_lipschitz(n: int) -> float:
    """Bound on ||tanh(w) - x||_2 over the cube: 2 sqrt(n)."""
    return 2.0 * math.sqrt(n)


def sample_model(w, rng: np.random.Generator, size=None) -> np.ndarray:
    """Draw from P_w (independent bits)."""
    p = marginals(w)
    shape = p.shape if size is None else (int(size), p.size)
    return np.where(rng.random(shape) < p, 1, -1).astype(np.int8)


# ---------------------------------------------------------------------------
# Surrogates g(<w, x>)
# ---------------------------------------------------------------------------

SURROGATES = ("softplus", "pseudo-huber", "logistic")
_ALIASES = {"phuber": "pseudo-huber", "pseudo_huber": "pseudo-huber"}
_PHUBER_C = 5.0


@dataclass(frozen=True)
class SurrogateSpec:
    """Convex scalar loss g with Lipschitz constant ``lipschitz``.

    softplus:      g(t) = log(1 + e^t)
    pseudo-huber:  g(t) = sqrt(t^2 + 5)
    logistic:      g(t) = log(1 + e^{-t})
    """

    kind: str = "softplus"
    lipschitz: float = 1.0

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in SURROGATES:
            raise ValueError(f"unsupported surrogate {self.kind!r}; choose from {SURROGATES}")
        object.__setattr__(self, "kind", kind)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "softplus":
            return -log_expit(-t)
        if self.kind == "pseudo-huber":
            return np.sqrt(t * t + _PHUBER_C)
        return -log_expit(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "softplus":
            return expit(t)
        if self.kind == "pseudo-huber":
            return t / np.sqrt(t * t + _PHUBER_C)
        return -expit(-t)


def surrogate(g: SurrogateSpec, w, x):
    """Return ``(g(<w,x>), g'(<w,x>) * x)``; vectorized over rows of ``x``."""
    w = _weights(w)
    x = as_assignment(x)
    _check(w, x)
    t = x @ w
    value = g.value(t)
    grad = np.asarray(g.derivative(t))[..., None] * x
    return value, grad


# ---------------------------------------------------------------------------
# Exact tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """Probability vector over the 2**n cube points in index order."""

    probs: np.ndarray
    n: int

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.shape != (1 << self.n,):
            raise DimensionError(f"table has shape {p.shape}, expected ({1 << self.n},)")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite and non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(cls, weights, n: int) -> "DistributionTable":
        """Normalize non-negative ``weights`` into a table."""
        p = np.asarray(weights, dtype=float)
        return cls(p / p.sum(), n)

    @classmethod
    def uniform(cls, n: int) -> "DistributionTable":
        return cls(np.full(1 << n, 1.0 / (1 << n)), n)

    @classmethod
    def uniform_over(cls, indices, n: int) -> "DistributionTable":
        """Uniform on the given cube indices (e.g. a satisfying set)."""
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if idx.size == 0:
            raise ValueError("uniform_over needs a non-empty support")
        p = np.zeros(1 << n)
        p[idx] = 1.0 / idx.size
        return cls(p, n)

    @classmethod
    def point_mass(cls, index: int, n: int) -> "DistributionTable":
        p = np.zeros(1 << n)
        p[index] = 1.0
        return cls(p, n)

    def points(self) -> np.ndarray:
        return indices_to_points(np.arange(1 << self.n), self.n)

    def mean(self) -> np.ndarray:
        """E_P[x], the sufficient statistic for the model family."""
        return self.probs @ self.points()

    def to_csv(self, path) -> None:
        """Columns index, bits, prob; ``bits`` spells x_1..x_n as '+'/'-'."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "bits", "prob"])
            for idx, X in iter_cube_blocks(self.n):
                for i, row in zip(idx.tolist(), X):
                    bits = "".join("+" if v > 0 else "-" for v in row)
                    writer.writerow([i, bits, repr(float(self.probs[i]))])


def exact_distribution(w, n: int | None = None) -> DistributionTable:
    """Materialize P_w over the whole cube (n <= 24)."""
    w = _weights(w)
    if n is None:
        n = w.size
    if n != w.size:
        raise DimensionError(f"weights have length {w.size}, n={n}")
    if n > MAX_ENUM_DIM:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration limit {MAX_ENUM_DIM}")
    logz = log_partition(w)
    probs = np.empty(1 << n)
    for idx, X in iter_cube_blocks(n):
        probs[idx] = np.exp(X @ w - logz)
    # float rounding can leave the sum a few ulps off 1
    return DistributionTable(probs / probs.sum(), n)


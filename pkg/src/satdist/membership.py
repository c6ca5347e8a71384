"""Level-set membership test built from a learned weight vector.

Given w̄ and a convex surrogate g, the level b is the mean of g(<w̄, x>) over
satisfying assignments.  A candidate x̄ is declared satisfying when
|g(<w̄, x̄>) - b| <= eps1.  Nothing guarantees this separates f^{-1}(1) from
its complement; :func:`evaluate_classifier` only measures how well it does.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .boolfn import AUTO_ENUM_DIM, BooleanFunction, _check_enum, as_assignment, iter_cube_blocks
from .errors import DimensionError
from .model import DistributionTable, SurrogateSpec


@dataclass(frozen=True, eq=False)
class MembershipRule:
    g: SurrogateSpec
    wbar: np.ndarray
    b: float
    eps1: float

    def __post_init__(self):
        if not self.eps1 >= 0:
            raise ValueError("eps1 must be non-negative")
        if not math.isfinite(self.b):
            raise ValueError("level b must be finite")
        object.__setattr__(self, "wbar", np.asarray(self.wbar, dtype=float))

    def scores(self, X) -> np.ndarray:
        return self.g.value(np.asarray(X) @ self.wbar)


def estimate_b(g: SurrogateSpec, wbar, source) -> float:
    """Mean of g(<wbar, x>): exact under a DistributionTable, else over sample rows."""
    wbar = np.asarray(wbar, dtype=float)
    if isinstance(source, DistributionTable):
        if source.n != wbar.size:
            raise DimensionError(f"weights have length {wbar.size}, table n={source.n}")
        return float(source.probs @ g.value(source.points() @ wbar))
    S = as_assignment(source, wbar.size)
    if S.ndim == 1:
        S = S[None, :]
    if S.shape[0] == 0:
        raise ValueError("cannot estimate b from an empty sample")
    return float(np.mean(g.value(S @ wbar)))


def classify(rule: MembershipRule, xbar) -> bool:
    """Accept iff |g(<w̄, x̄>) - b| <= eps1 (boundary inclusive)."""
    x = as_assignment(xbar, rule.wbar.size)
    if x.ndim != 1:
        raise DimensionError("classify takes a single assignment")
    return bool(abs(float(rule.g.value(x @ rule.wbar)) - rule.b) <= rule.eps1)


def accepts(rule: MembershipRule, X) -> np.ndarray:
    """Vectorized :func:`classify` over rows."""
    return np.abs(rule.scores(X) - rule.b) <= rule.eps1


@dataclass(frozen=True)
class ConfusionRecord:
    """Counts with accept = predicted positive and f(x) = +1 = actual positive.

    precision and recall are None when their denominator is zero.
    """

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def precision(self) -> Optional[float]:
        denom = self.tp + self.fp
        return self.tp / denom if denom else None

    @property
    def recall(self) -> Optional[float]:
        denom = self.tp + self.fn
        return self.tp / denom if denom else None

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionRecord") -> "ConfusionRecord":
        return ConfusionRecord(self.tp + other.tp, self.fp + other.fp,
                               self.tn + other.tn, self.fn + other.fn)

    def to_dict(self) -> dict:
        return {**asdict(self), "precision": self.precision, "recall": self.recall}


def evaluate_classifier(rule: MembershipRule, f: BooleanFunction) -> ConfusionRecord:
    """Exhaustive confusion counts of ``rule`` against f over the cube (n <= 20)."""
    if rule.wbar.size != f.n:
        raise DimensionError(f"rule has dimension {rule.wbar.size}, function n={f.n}")
    _check_enum(f.n, AUTO_ENUM_DIM)
    record = ConfusionRecord(0, 0, 0, 0)
    for _, X in iter_cube_blocks(f.n):
        pred = accepts(rule, X)
        truth = f.evaluate(X) > 0
        record = record + ConfusionRecord(
            int(np.sum(pred & truth)), int(np.sum(pred & ~truth)),
            int(np.sum(~pred & ~truth)), int(np.sum(~pred & truth)),
        )
    return record

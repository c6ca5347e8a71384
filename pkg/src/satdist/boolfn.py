"""Boolean functions on the hypercube {-1,+1}^n.

Assignments are int8 numpy vectors with entries in {-1, +1}.  Points of the
cube are indexed lexicographically with -1 < +1 and x_1 as the most
significant position::

    index(x) = sum_i [x_i == +1] * 2**(n-1-i)

so index 0 is (-1,...,-1) and index 2**n - 1 is (+1,...,+1).  Every exact
table in the package (truth tables, distribution tables) uses this order.

Three representations are supported: :class:`TruthTable`, :class:`CNF`
(DIMACS literal convention) and :class:`LTF` (satisfied iff <w,x> >= theta).
"""

from __future__ import annotations

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import (
    DimensionError,
    EnumerationLimitError,
    ParseError,
    SamplingError,
    UnsatisfiableError,
)

MAX_ENUM_DIM = 24
AUTO_ENUM_DIM = 20
DENSITY_FLOOR = 2.0 ** -20
MAX_REJECTIONS = 2 ** 24

_CHUNK = 1 << 16

FORMATS = {
    "dimacs-cnf": "dimacs-cnf",
    "dimacs": "dimacs-cnf",
    "cnf": "dimacs-cnf",
    "truthtable-hex": "truthtable-hex",
    "tt-hex": "truthtable-hex",
    "ltf-text": "ltf-text",
    "ltf": "ltf-text",
}


# ---------------------------------------------------------------------------
# Assignments and cube indexing
# ---------------------------------------------------------------------------


def as_assignment(x, n: Optional[int] = None) -> np.ndarray:
    """Validate ``x`` as a point (or a stack of points) of {-1,+1}^n."""
    arr = np.asarray(x)
    if arr.ndim not in (1, 2):
        raise DimensionError(f"assignment must be 1-D or 2-D, got shape {arr.shape}")
    if n is not None and arr.shape[-1] != n:
        raise DimensionError(f"assignment has length {arr.shape[-1]}, expected {n}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("assignment entries must be exactly -1 or +1")
    return arr.astype(np.int8, copy=False)


def indices_to_points(idx, n: int) -> np.ndarray:
    """Map cube indices to their ±1 assignments (rows)."""
    idx = np.asarray(idx, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (idx[..., None] >> shifts) & 1
    return (2 * bits - 1).astype(np.int8)


def points_to_indices(x) -> np.ndarray:
    arr = np.asarray(x)
    n = arr.shape[-1]
    weights = np.left_shift(np.int64(1), np.arange(n - 1, -1, -1, dtype=np.int64))
    return ((arr > 0).astype(np.int64) * weights).sum(axis=-1)


def index_of(x) -> int:
    """Cube index of a single assignment."""
    return int(points_to_indices(as_assignment(x)))


def cube(n: int) -> np.ndarray:
    """All 2**n assignments as a (2**n, n) int8 array in index order."""
    _check_enum(n)
    return indices_to_points(np.arange(1 << n), n)


def iter_cube_blocks(n: int, chunk: int = _CHUNK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(indices, points)`` blocks covering the cube in index order."""
    _check_enum(n)
    total = 1 << n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield idx, indices_to_points(idx, n)


def _check_enum(n: int, limit: int = MAX_ENUM_DIM) -> None:
    if n < 0:
        raise DimensionError("dimension must be non-negative")
    if n > limit:
        raise EnumerationLimitError(f"n={n} exceeds the enumeration limit {limit}")


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


class BooleanFunction(ABC):
    """A predicate f: {-1,+1}^n -> {-1,+1}; +1 means satisfied."""

    n: int

    @abstractmethod
    def _satisfied(self, X: np.ndarray) -> np.ndarray:
        """Boolean mask of satisfied rows of a validated (m, n) int8 array."""

    def evaluate(self, x) -> np.ndarray:
        """Evaluate on one point (returns an int) or on rows of a 2-D array."""
        arr = as_assignment(x, self.n)
        X = arr[None, :] if arr.ndim == 1 else arr
        out = np.where(self._satisfied(X), 1, -1).astype(np.int8)
        return int(out[0]) if arr.ndim == 1 else out

    def __call__(self, x) -> int:
        return self.evaluate(x)

    def truth_table(self) -> np.ndarray:
        """Boolean vector of length 2**n, True where f(x) = +1."""
        _check_enum(self.n)
        table = np.empty(1 << self.n, dtype=bool)
        for idx, X in iter_cube_blocks(self.n):
            table[idx] = self._satisfied(X)
        return table

    def to_truth_table(self) -> "TruthTable":
        return TruthTable(self.truth_table(), self.n)

    def is_trivially_unsatisfiable(self) -> bool:
        """Cheap syntactic unsatisfiability check (never a false positive)."""
        return False


@dataclass(frozen=True, eq=False)
class TruthTable(BooleanFunction):
    table: np.ndarray
    n: int

    def __post_init__(self):
        table = np.asarray(self.table).astype(bool)
        if table.ndim != 1 or table.size != 1 << self.n:
            raise ParseError(f"truth table has {table.size} entries, expected 2**{self.n}")
        object.__setattr__(self, "table", table)

    def _satisfied(self, X):
        return self.table[points_to_indices(X)]

    def truth_table(self):
        return self.table.copy()

    def is_trivially_unsatisfiable(self):
        return not self.table.any()


@dataclass(frozen=True, eq=False)
class CNF(BooleanFunction):
    clauses: tuple
    n: int

    def __post_init__(self):
        clauses = tuple(tuple(int(lit) for lit in clause) for clause in self.clauses)
        for clause in clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ParseError(f"literal {lit} out of range for n={self.n}")
        object.__setattr__(self, "clauses", clauses)

    def _satisfied(self, X):
        sat = np.ones(X.shape[0], dtype=bool)
        for clause in self.clauses:
            hit = np.zeros(X.shape[0], dtype=bool)
            for lit in clause:
                hit |= X[:, abs(lit) - 1] == (1 if lit > 0 else -1)
            sat &= hit
        return sat

    def is_trivially_unsatisfiable(self):
        return any(len(c) == 0 for c in self.clauses)


@dataclass(frozen=True, eq=False)
class LTF(BooleanFunction):
    """Linear threshold function; ties <w,x> == theta count as satisfied."""

    weights: np.ndarray
    threshold: float
    n: int = -1

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        if self.n not in (-1, w.size):
            raise DimensionError(f"LTF has {w.size} weights, expected {self.n}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "threshold", float(self.threshold))
        object.__setattr__(self, "n", w.size)

    def _satisfied(self, X):
        return X @ self.weights >= self.threshold

    def is_trivially_unsatisfiable(self):
        return np.abs(self.weights).sum() < self.threshold


def evaluate(f: BooleanFunction, x) -> int:
    """f(x) in {-1, +1} for a single assignment."""
    arr = as_assignment(x, f.n)
    if arr.ndim != 1:
        raise DimensionError("evaluate takes a single assignment; use f.evaluate for batches")
    return f.evaluate(arr)


def constant(n: int, value: bool = True) -> TruthTable:
    return TruthTable(np.full(1 << n, value, dtype=bool), n)


def conjunction(n: int, literals: Optional[Sequence[int]] = None) -> CNF:
    """AND of the given signed literals (default: all positive x_1..x_n)."""
    if literals is None:
        literals = range(1, n + 1)
    return CNF(tuple((lit,) for lit in literals), n)


# ---------------------------------------------------------------------------
# Satisfying assignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SatisfyingSet:
    """The satisfying assignments of f, rows in increasing cube index."""

    assignments: np.ndarray
    n: int

    @property
    def indices(self) -> np.ndarray:
        return points_to_indices(self.assignments)

    def __len__(self):
        return self.assignments.shape[0]

    def __iter__(self):
        return iter(self.assignments)

    def __contains__(self, x):
        idx = index_of(x)
        pos = np.searchsorted(self.indices, idx)
        return bool(pos < len(self) and self.indices[pos] == idx)


def enumerate_satisfying(f: BooleanFunction) -> SatisfyingSet:
    """Exhaustively list f^{-1}(1).  Raises EnumerationLimitError for n > 24."""
    _check_enum(f.n)
    found = []
    for _, X in iter_cube_blocks(f.n):
        found.append(X[f._satisfied(X)])
    rows = np.concatenate(found) if found else np.empty((0, f.n), dtype=np.int8)
    return SatisfyingSet(rows, f.n)


def sample_satisfying(
    f: BooleanFunction,
    rng: np.random.Generator,
    size: Optional[int] = None,
    *,
    method: str = "auto",
    support: Optional[SatisfyingSet] = None,
    max_attempts: int = MAX_REJECTIONS,
) -> np.ndarray:
    """Draw uniformly from f^{-1}(1).

    ``method="enumerate"`` picks uniformly from the enumerated satisfying
    set (exact).  ``method="rejection"`` draws uniform cube points until one
    satisfies f; a single draw may use at most ``max_attempts`` proposals,
    which bounds the latency for densities down to about 2**-20.  ``"auto"``
    enumerates when ``support`` is given or n <= 20.

    Returns one assignment when ``size`` is None, else a (size, n) array.
    """
    if f.is_trivially_unsatisfiable():
        raise UnsatisfiableError("function has no satisfying assignment")
    count = 1 if size is None else int(size)
    if method == "auto":
        method = "enumerate" if support is not None or f.n <= AUTO_ENUM_DIM else "rejection"
    if method == "enumerate":
        if support is None:
            support = enumerate_satisfying(f)
        if len(support) == 0:
            raise UnsatisfiableError("function has no satisfying assignment")
        out = support.assignments[rng.integers(len(support), size=count)]
    elif method == "rejection":
        out = _rejection(f, rng, count, max_attempts)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    return out[0] if size is None else out


def _rejection(f, rng, count, max_attempts):
    accepted = []
    have = 0
    tried = 0
    budget = max_attempts * count
    batch = 1024
    while have < count:
        if tried >= budget or (have == 0 and tried >= max_attempts):
            raise SamplingError(
                f"rejection sampling accepted {have}/{count} after {tried} proposals; "
                "density below floor, use enumeration"
            )
        batch = min(batch, budget - tried, _CHUNK)
        X = (2 * rng.integers(0, 2, size=(batch, f.n), dtype=np.int8) - 1).astype(np.int8)
        tried += batch
        hits = X[f._satisfied(X)]
        accepted.append(hits)
        have += hits.shape[0]
        batch = min(batch * 2, _CHUNK)
    # proposals are i.i.d., so the first `count` accepted rows are i.i.d. uniform on f^{-1}(1)
    return np.concatenate(accepted)[:count]


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------


def parse_function(text: str, fmt: str, n: Optional[int] = None) -> BooleanFunction:
    """Parse ``text`` in one of the formats dimacs-cnf, truthtable-hex, ltf-text.

    ``n`` is only needed for truth tables with fewer than 4 entries (n < 2);
    otherwise the dimension comes from the text itself.
    """
    try:
        kind = FORMATS[fmt]
    except KeyError:
        raise ParseError(f"unknown format {fmt!r}") from None
    if kind == "dimacs-cnf":
        return _parse_dimacs(text)
    if kind == "truthtable-hex":
        return _parse_hex(text, n)
    return _parse_ltf(text)


def serialize_function(f: BooleanFunction, fmt: str) -> str:
    """Inverse of :func:`parse_function`.

    Any representation can be written as truthtable-hex; dimacs-cnf and
    ltf-text require a CNF or LTF respectively.
    """
    kind = FORMATS.get(fmt)
    if kind == "truthtable-hex":
        return _hex_from_table(f.truth_table(), f.n)
    if kind == "dimacs-cnf":
        if not isinstance(f, CNF):
            raise TypeError("dimacs-cnf serialization needs a CNF")
        lines = [f"p cnf {f.n} {len(f.clauses)}"]
        lines += [" ".join([str(lit) for lit in clause] + ["0"]) for clause in f.clauses]
        return "\n".join(lines) + "\n"
    if kind == "ltf-text":
        if not isinstance(f, LTF):
            raise TypeError("ltf-text serialization needs an LTF")
        return " ".join(repr(float(v)) for v in f.weights) + f" ; {f.threshold!r}\n"
    raise ParseError(f"unknown format {fmt!r}")


def load_function(path, fmt: str) -> BooleanFunction:
    with open(path) as fh:
        return parse_function(fh.read(), fmt)


def _parse_dimacs(text: str) -> CNF:
    n = m = None
    clauses = []
    current = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or m < 0:
                raise ParseError(f"line {lineno}: negative counts in header")
            continue
        if n is None:
            raise ParseError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > n:
                raise ParseError(f"line {lineno}: literal {lit} out of range 1..{n}")
            else:
                current.append(lit)
    if n is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    return CNF(tuple(clauses), n)


def _parse_hex(text: str, n: Optional[int]) -> TruthTable:
    digits = re.sub(r"[\s_]", "", text)
    if digits[:2].lower() == "0x":
        digits = digits[2:]
    if not digits or not re.fullmatch(r"[0-9a-fA-F]+", digits):
        raise ParseError("truth table must be a non-empty hex string")
    if n is None:
        nbits = 4 * len(digits)
        if nbits & (nbits - 1):
            raise ParseError(f"truth table length {nbits} is not a power of two")
        n = nbits.bit_length() - 1
    elif len(digits) != max(1, (1 << n) // 4):
        raise ParseError(f"expected {max(1, (1 << n) // 4)} hex digits for n={n}, got {len(digits)}")
    _check_enum(n)
    value = int(digits, 16)
    size = 1 << n
    if value >> size:
        raise ParseError(f"truth table value exceeds 2**{size}")
    raw = np.frombuffer(value.to_bytes(max(1, (size + 7) // 8), "little"), dtype=np.uint8)
    table = np.unpackbits(raw, bitorder="little")[:size].astype(bool)
    return TruthTable(table, n)


def _hex_from_table(table: np.ndarray, n: int) -> str:
    size = 1 << n
    packed = np.packbits(np.asarray(table, dtype=np.uint8), bitorder="little")
    value = int.from_bytes(packed.tobytes(), "little")
    width = max(1, size // 4)
    return format(value, f"0{width}x")


def _parse_ltf(text: str) -> LTF:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) != 1 or lines[0].count(";") != 1:
        raise ParseError("ltf-text must be one line 'w1 ... wn ; theta'")
    lhs, rhs = lines[0].split(";")
    try:
        weights = [float(tok) for tok in lhs.split()]
        theta = float(rhs)
    except ValueError as exc:
        raise ParseError(f"bad number in ltf-text: {exc}") from None
    if not weights:
        raise ParseError("ltf-text has no weights")
    if not all(math.isfinite(v) for v in weights + [theta]):
        raise ParseError("ltf-text values must be finite")
    return LTF(np.array(weights), theta)


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_cnf(n: int, num_clauses: int, width: int, rng: np.random.Generator) -> CNF:
    """Uniform random ``width``-CNF with distinct variables per clause."""
    if not 1 <= width <= n:
        raise ValueError("clause width must lie in [1, n]")
    clauses = []
    for _ in range(num_clauses):
        var = rng.choice(n, size=width, replace=False) + 1
        sign = rng.choice([-1, 1], size=width)
        clauses.append(tuple(int(v) for v in sorted(var * sign, key=abs)))
    return CNF(tuple(clauses), n)


def random_ltf(n: int, rng: np.random.Generator, threshold: Optional[float] = None) -> LTF:
    """Gaussian weights; the threshold defaults to a uniform draw in [-|w|_1/2, |w|_1/2]."""
    w = np.round(rng.standard_normal(n), 6)
    if threshold is None:
        half = 0.5 * np.abs(w).sum()
        threshold = round(float(rng.uniform(-half, half)), 6)
    return LTF(w, threshold)

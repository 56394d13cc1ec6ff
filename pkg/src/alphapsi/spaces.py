"""Metric spaces, partial orders and two-set partitions.

Finite spaces carry an explicit distance matrix and use point indices
``0..n-1``; every universally quantified hypothesis is decidable on them.
Interval spaces are closed subsets of the real line with ``|x - y|``.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ._checks import CheckResult, PointOutsideSpace

# slack for triangle / symmetry checks on float matrices
METRIC_TOL = 1e-12


class FiniteSpace:
    is_finite = True

    def __init__(self, dist, labels=None):
        dist = np.array(dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] == 0:
            raise ValueError("distance matrix must be square and non-empty")
        dist.setflags(write=False)
        self.dist = dist
        n = dist.shape[0]
        self.labels = tuple(str(s) for s in labels) if labels is not None else tuple(
            f"p{i}" for i in range(n)
        )
        if len(self.labels) != n:
            raise ValueError("one label per point required")

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    @property
    def points(self) -> range:
        return range(self.size)

    def contains(self, x) -> bool:
        return isinstance(x, (int, np.integer)) and 0 <= x < self.size

    def require(self, *xs):
        for x in xs:
            arr = np.asarray(x)
            if arr.dtype.kind not in "iu" or np.any(arr < 0) or np.any(arr >= self.size):
                raise PointOutsideSpace(f"{x!r} is not a point of a {self.size}-point space")

    def d(self, x, y):
        return self.dist[x, y]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __repr__(self):
        return f"FiniteSpace(size={self.size})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteSpace)
            and self.labels == other.labels
            and np.array_equal(self.dist, other.dist)
        )

    __hash__ = None


class IntervalSpace:
    """Closed interval ``[lo, hi]`` of the real line; ends may be infinite."""

    is_finite = False

    def __init__(self, lo: float = -math.inf, hi: float = math.inf):
        self.lo = float(lo)
        self.hi = float(hi)

    def contains(self, x) -> bool:
        return bool(np.isfinite(x) and self.lo <= x <= self.hi)

    def require(self, *xs):
        for x in xs:
            arr = np.asarray(x, dtype=float)
            if not np.all(np.isfinite(arr)) or np.any(arr < self.lo) or np.any(arr > self.hi):
                raise PointOutsideSpace(f"{x!r} lies outside [{self.lo}, {self.hi}]")

    def d(self, x, y):
        return np.abs(np.subtract(x, y))

    def sampling_box(self, span: float = 10.0) -> tuple[float, float]:
        """Bounded window for sampling: the interval itself, or ``span`` wide at an infinite end."""
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return (-span / 2, span / 2)
        if math.isinf(lo):
            return (hi - span, hi)
        if math.isinf(hi):
            return (lo, lo + span)
        return (lo, hi)

    def __repr__(self):
        return f"IntervalSpace({self.lo}, {self.hi})"

    def __eq__(self, other):
        return isinstance(other, IntervalSpace) and (self.lo, self.hi) == (other.lo, other.hi)

    __hash__ = None


def validate_space(s) -> CheckResult:
    """Check metric axioms (finite, exhaustively over all triples) or interval bounds."""
    name = "space"
    if not s.is_finite:
        if math.isnan(s.lo) or math.isnan(s.hi) or not s.lo < s.hi:
            return CheckResult(name, False, "interval needs lo < hi", witness=(s.lo, s.hi))
        return CheckResult(name, True)

    d = s.dist
    n = s.size
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        i, j = map(int, np.argwhere((d < 0) | ~np.isfinite(d))[0])
        return CheckResult(name, False, "negative or non-finite distance", witness=(i, j))
    if np.any(np.diag(d) != 0):
        i = int(np.flatnonzero(np.diag(d))[0])
        return CheckResult(name, False, "nonzero diagonal", witness=(i, i))
    asym = np.abs(d - d.T) > METRIC_TOL
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        return CheckResult(name, False, "asymmetric", witness=(i, j))
    off = ~np.eye(n, dtype=bool)
    if np.any((d == 0) & off):
        i, j = map(int, np.argwhere((d == 0) & off)[0])
        return CheckResult(name, False, "distinct points at distance 0", witness=(i, j))
    # via[i, j, k] = d(i, j) + d(j, k) must dominate d(i, k)
    via = d[:, :, None] + d[None, :, :]
    excess = d[:, None, :] - via
    bad = excess > METRIC_TOL
    if bad.any():
        i, j, k = map(int, np.argwhere(bad)[0])
        return CheckResult(
            name, False, "triangle inequality", witness=(i, j, k), magnitude=float(excess[i, j, k])
        )
    return CheckResult(name, True, checked=n**3)


def distance(s, x, y) -> float:
    s.require(x, y)
    return float(s.d(x, y))


def random_finite_space(n: int, rng: np.random.Generator) -> FiniteSpace:
    """``n`` random points of the unit square under the Euclidean metric."""
    if n < 1:
        raise ValueError("need at least one point")
    while True:
        pts = rng.random((n, 2))
        dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
        if n == 1 or dist[~np.eye(n, dtype=bool)].min() > 1e-9:
            return FiniteSpace(dist)


def line_space(positions, labels=None) -> FiniteSpace:
    """Finite subset of the real line with the absolute-difference metric."""
    pos = np.asarray(positions, dtype=float)
    return FiniteSpace(np.abs(pos[:, None] - pos[None, :]), labels)


class PartialOrder:
    """Order relation: a boolean matrix on a finite space, or a predicate on the line."""

    def __init__(self, matrix=None, predicate: Callable | None = None, name: str = "matrix"):
        if (matrix is None) == (predicate is None):
            raise ValueError("give exactly one of matrix or predicate")
        self.matrix = None if matrix is None else np.array(matrix, dtype=bool)
        self.predicate = predicate
        self.name = name

    @classmethod
    def standard(cls) -> "PartialOrder":
        return cls(predicate=np.less_equal, name="standard-leq")

    @classmethod
    def from_matrix(cls, leq) -> "PartialOrder":
        return cls(matrix=leq)

    @classmethod
    def from_covers(cls, n: int, covers) -> "PartialOrder":
        """Reflexive-transitive closure of the ``(lower, upper)`` cover pairs."""
        rel = np.eye(n, dtype=bool)
        for a, b in covers:
            rel[a, b] = True
        for k in range(n):
            rel |= rel[:, k : k + 1] & rel[k : k + 1, :]
        return cls(matrix=rel)

    @property
    def is_finite(self) -> bool:
        return self.matrix is not None

    def leq(self, x, y):
        if self.matrix is not None:
            return self.matrix[x, y]
        return self.predicate(x, y)

    def comparable(self, x, y):
        return np.logical_or(self.leq(x, y), self.leq(y, x))

    def validate(self) -> CheckResult:
        """Reflexivity, antisymmetry, transitivity; exhaustive on matrices."""
        name = "partial_order"
        if self.matrix is None:
            return CheckResult(name, True, "predicate order taken as declared")
        m = self.matrix
        n = m.shape[0]
        if not np.all(np.diag(m)):
            i = int(np.flatnonzero(~np.diag(m))[0])
            return CheckResult(name, False, "not reflexive", witness=(i, i))
        anti = m & m.T & ~np.eye(n, dtype=bool)
        if anti.any():
            return CheckResult(name, False, "not antisymmetric", witness=tuple(map(int, np.argwhere(anti)[0])))
        trans = m[:, :, None] & m[None, :, :] & ~m[:, None, :]
        if trans.any():
            return CheckResult(name, False, "not transitive", witness=tuple(map(int, np.argwhere(trans)[0])))
        return CheckResult(name, True, checked=n**3)

    def __eq__(self, other):
        if not isinstance(other, PartialOrder):
            return NotImplemented
        if self.matrix is not None:
            return other.matrix is not None and np.array_equal(self.matrix, other.matrix)
        return other.matrix is None and self.name == other.name

    __hash__ = None


class CyclicPartition:
    """Two closed sets ``A1``, ``A2`` with ``Y = A1 u A2``.

    Finite partitions hold index sets; interval partitions hold closed
    bounded intervals ``(lo, hi)``.
    """

    def __init__(self, a1, a2):
        if isinstance(a1, (set, frozenset)) or isinstance(a2, (set, frozenset)):
            self.a1, self.a2 = frozenset(int(i) for i in a1), frozenset(int(i) for i in a2)
            self.is_finite = True
        else:
            self.a1 = (float(a1[0]), float(a1[1]))
            self.a2 = (float(a2[0]), float(a2[1]))
            self.is_finite = False

    @classmethod
    def finite(cls, a1, a2) -> "CyclicPartition":
        return cls(frozenset(a1), frozenset(a2))

    @classmethod
    def interval(cls, a1, a2) -> "CyclicPartition":
        return cls(tuple(a1), tuple(a2))

    def _member(self, part, x):
        if self.is_finite:
            return np.isin(x, sorted(part))
        lo, hi = part
        return np.logical_and(np.greater_equal(x, lo), np.less_equal(x, hi))

    def in_a1(self, x):
        return self._member(self.a1, x)

    def in_a2(self, x):
        return self._member(self.a2, x)

    def validate(self, space=None) -> CheckResult:
        name = "partition"
        if self.is_finite:
            if not self.a1 or not self.a2:
                return CheckResult(name, False, "empty part")
            if space is not None and not all(space.contains(i) for i in self.a1 | self.a2):
                return CheckResult(name, False, "index outside space")
            return CheckResult(name, True)
        for part in (self.a1, self.a2):
            lo, hi = part
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                return CheckResult(name, False, "parts must be closed bounded intervals", witness=part)
            if space is not None and not (space.contains(lo) and space.contains(hi)):
                return CheckResult(name, False, "part leaves the space", witness=part)
        return CheckResult(name, True)

    def __eq__(self, other):
        return (
            isinstance(other, CyclicPartition)
            and (self.a1, self.a2, self.is_finite) == (other.a1, other.a2, other.is_finite)
        )

    __hash__ = None

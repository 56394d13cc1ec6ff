"""Reductions of ordered, cyclic and classical contractions to an ``(alpha, psi)`` pair.

Each adapter builds the ``alpha`` that turns a more familiar hypothesis into
the generalized contractive condition, so the checks in :mod:`alphapsi.pair`
and the oracle in :mod:`alphapsi.oracle` apply unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from ._checks import CheckResult, NotFinite
from .comparison import ComparisonFunction
from .pair import (
    DEFAULT_RANDOM_PAIRS,
    DEFAULT_SLACK,
    AlphaFunction,
    ComparableAlpha,
    ConstantAlpha,
    CrossAlpha,
    MappingPair,
    MatrixAlpha,
    _M,
    _pairs,
    _pt,
    check_contractive,
)
from .spaces import CyclicPartition, PartialOrder

# membership slack for the g-images of the two cyclic parts
CYCLIC_TOL = 1e-12


class CoefficientOutOfRange(ValueError):
    """A corollary coefficient violates its admissible range."""


# ------------------------------------------------------------------ order


def alpha_from_order(order: PartialOrder) -> AlphaFunction:
    """``alpha(x, y) = 1`` when ``x`` and ``y`` are comparable, else 0."""
    if order.is_finite:
        m = order.matrix
        return MatrixAlpha((m | m.T).astype(float))
    return ComparableAlpha(order)


def check_g_nondecreasing(p: MappingPair, order: PartialOrder, pairs=None) -> CheckResult:
    """``g x <= g y`` implies ``f x <= f y`` on every sampled pair."""
    xs, ys = _pairs(p, pairs)
    bad = np.atleast_1d(order.leq(p.g(xs), p.g(ys)) & ~order.leq(p.f(xs), p.f(ys)))
    name = "g_nondecreasing"
    if bad.any():
        i = int(np.argmax(bad))
        return CheckResult(name, False, "g x <= g y but not f x <= f y",
                           witness=(_pt(xs[i]), _pt(ys[i])), checked=bad.size)
    return CheckResult(name, True, checked=bad.size)


def check_g_regular(p: MappingPair, order: PartialOrder) -> CheckResult:
    """Finite g-regularity, decided on the graph of nondecreasing steps in ``g(X)``.

    In a finite metric space a convergent sequence is eventually constant,
    so a nondecreasing sequence converging to ``gz`` ends in a run of
    ``gz <= gz`` steps. The check therefore looks at every cycle of the step
    graph that a convergent chain can end in and asks for a node below its
    limit; for a reflexive antisymmetric order those cycles are the
    self-loops and the condition always holds.
    """
    name = "g_regular"
    if not p.space.is_finite:
        raise NotFinite("g-regularity on an interval is a declared assumption")
    if not order.is_finite:
        raise NotFinite("g-regularity needs an order matrix")
    rng_vals = sorted(p.g.image())
    # a chain settling at gz needs the step gz <= gz, and its tail is then below gz
    limits = [gz for gz in rng_vals if order.leq(gz, gz)]
    return CheckResult(name, True, "eventually constant chains sit below their limit",
                       checked=len(limits))


# ----------------------------------------------------------------- cyclic


def _g_images(partition: CyclicPartition, g):
    if partition.is_finite:
        return frozenset(g(i) for i in partition.a1), frozenset(g(i) for i in partition.a2)
    return g.image(*partition.a1), g.image(*partition.a2)


def alpha_from_cyclic(partition: CyclicPartition, g) -> AlphaFunction:
    """``alpha = 1`` on ``(g(A1) x g(A2)) u (g(A2) x g(A1))``, else 0."""
    s1, s2 = _g_images(partition, g)
    if partition.is_finite:
        n = len(g)
        in1 = np.isin(np.arange(n), sorted(s1))
        in2 = np.isin(np.arange(n), sorted(s2))
        m = np.outer(in1, in2) | np.outer(in2, in1)
        return MatrixAlpha(m.astype(float))
    return CrossAlpha(s1, s2, tol=CYCLIC_TOL)


def _cyclic_pairs(partition: CyclicPartition, n_random: int, seed: int):
    """Pairs ``(x, y)`` in ``A1 x A2``: exhaustive for index sets, grid plus random for intervals."""
    if partition.is_finite:
        grid = np.array([(x, y) for x in sorted(partition.a1) for y in sorted(partition.a2)], dtype=int)
        return grid[:, 0], grid[:, 1]
    (l1, h1), (l2, h2) = partition.a1, partition.a2
    g1, g2 = np.linspace(l1, h1, 101), np.linspace(l2, h2, 101)
    gx, gy = np.meshgrid(g1, g2, indexing="ij")
    rng = np.random.default_rng(seed)
    xs = np.concatenate([gx.ravel(), rng.uniform(l1, h1, n_random)])
    ys = np.concatenate([gy.ravel(), rng.uniform(l2, h2, n_random)])
    return xs, ys


def check_cyclic_conditions(
    p: MappingPair,
    partition: CyclicPartition,
    psi: ComparisonFunction | None = None,
    n_samples: int = DEFAULT_RANDOM_PAIRS,
    seed: int = 0,
) -> CheckResult:
    """The cyclic-representation hypotheses, one detail entry per condition.

    ``closed``: ``g(A1)`` and ``g(A2)`` are closed. ``inclusion``:
    ``f(A1) in g(A2)`` and ``f(A2) in g(A1)``; on intervals this is decided
    by image arithmetic and cross-checked on ``n_samples`` seeded points.
    ``injective``: ``g`` is one-to-one on ``A1 u A2``. ``contractive`` (only
    when ``psi`` is given): ``d(fx, fy) <= psi(M(gx, gy))`` on ``A1 x A2``.
    """
    name = "cyclic_conditions"
    part = partition.validate(p.space)
    if not part:
        return CheckResult(name, False, part.reason, witness=part.witness)
    s1, s2 = _g_images(partition, p.g)
    details = {}

    if partition.is_finite:
        details["closed"] = CheckResult("closed", True, "finite")
    else:
        open_part = next((s for s in (s1, s2) if not s.is_closed()), None)
        details["closed"] = CheckResult(
            "closed", open_part is None,
            "" if open_part is None else f"{open_part} is not closed", witness=open_part and str(open_part),
        )

    details["inclusion"] = _check_inclusions(p, partition, s1, s2, n_samples, seed)

    if partition.is_finite:
        pts = sorted(partition.a1 | partition.a2)
        seen: dict[int, int] = {}
        clash = None
        for x in pts:
            y = p.g(x)
            if y in seen:
                clash = (seen[y], x)
                break
            seen[y] = x
        details["injective"] = CheckResult("injective", clash is None,
                                           "" if clash is None else "g identifies two points", witness=clash)
    else:
        lo = min(partition.a1[0], partition.a2[0])
        hi = max(partition.a1[1], partition.a2[1])
        ok = p.g.injective_on(lo, hi)
        details["injective"] = CheckResult("injective", ok, "" if ok else f"g not one-to-one on [{lo}, {hi}]")

    if psi is not None:
        xs, ys = _cyclic_pairs(partition, n_samples, seed)
        res = check_contractive(p, ConstantAlpha(1.0), psi, pairs=(xs, ys))
        details["contractive"] = res

    failed = [k for k, v in details.items() if not v]
    return CheckResult(name, not failed, ", ".join(failed),
                       witness=details[failed[0]].witness if failed else None, details=details)


def _check_inclusions(p, partition, s1, s2, n_samples, seed) -> CheckResult:
    name = "inclusion"
    if partition.is_finite:
        for src, target, label in ((partition.a1, s2, "f(A1) in g(A2)"), (partition.a2, s1, "f(A2) in g(A1)")):
            for x in sorted(src):
                if p.f(x) not in target:
                    return CheckResult(name, False, f"{label} fails", witness=x)
        return CheckResult(name, True, checked=len(partition.a1) + len(partition.a2))
    rng = np.random.default_rng(seed)
    checked = 0
    for (lo, hi), target, label in ((partition.a1, s2, "f(A1) in g(A2)"), (partition.a2, s1, "f(A2) in g(A1)")):
        img = p.f.image(lo, hi)
        if not img.issubset(target):
            return CheckResult(name, False, f"{label} fails: f-image {img} vs {target}")
        xs = np.concatenate([[lo, hi], rng.uniform(lo, hi, n_samples)])
        inside = np.atleast_1d(target.contains(p.f(xs), CYCLIC_TOL))
        checked += xs.size
        if not inside.all():
            i = int(np.argmin(inside))
            return CheckResult(name, False, f"{label} fails", witness=float(xs[i]), checked=checked)
    return CheckResult(name, True, checked=checked)


# ------------------------------------------------------------- corollaries


KINDS = ("Banach", "Kannan", "Chatterjea", "Ciric", "HardyRogers", "Berinde", "OrderedGeneralized", "Cyclic")


@dataclass
class CorollaryConfig:
    """A classical contraction with its coefficients.

    ``coeffs`` holds ``(lam,)`` for the one-parameter kinds and ``(A, B, C)``
    for HardyRogers. Berinde, OrderedGeneralized and Cyclic take ``psi``;
    the last two also take ``order`` or ``partition``.
    """

    kind: str
    coeffs: tuple = ()
    psi: ComparisonFunction | None = None
    order: PartialOrder | None = None
    partition: CyclicPartition | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown corollary kind {self.kind!r}")
        self.coeffs = tuple(float(c) for c in self.coeffs)
        self.validate()

    @classmethod
    def banach(cls, lam):
        return cls("Banach", (lam,))

    @classmethod
    def kannan(cls, lam):
        return cls("Kannan", (lam,))

    @classmethod
    def chatterjea(cls, lam):
        return cls("Chatterjea", (lam,))

    @classmethod
    def ciric(cls, lam):
        return cls("Ciric", (lam,))

    @classmethod
    def hardy_rogers(cls, a, b, c):
        return cls("HardyRogers", (a, b, c))

    @classmethod
    def berinde(cls, psi):
        return cls("Berinde", psi=psi)

    def validate(self):
        k, c = self.kind, self.coeffs
        if k in ("Banach", "Ciric", "Kannan", "Chatterjea"):
            if len(c) != 1:
                raise CoefficientOutOfRange(f"{k} takes one coefficient")
            upper = 0.5 if k in ("Kannan", "Chatterjea") else 1.0
            if not 0.0 < c[0] < upper:
                raise CoefficientOutOfRange(f"{k} needs lambda in (0, {upper:g}), got {c[0]:g}")
        elif k == "HardyRogers":
            if len(c) != 3:
                raise CoefficientOutOfRange("HardyRogers takes A, B, C")
            a, b, cc = c
            if min(a, b, cc) < 0:
                raise CoefficientOutOfRange("HardyRogers needs A, B, C >= 0")
            if not 0.0 < a + 2 * b + 2 * cc < 1.0:
                raise CoefficientOutOfRange(f"HardyRogers needs A + 2B + 2C in (0, 1), got {a + 2 * b + 2 * cc:g}")
        else:
            if self.psi is None:
                raise CoefficientOutOfRange(f"{k} needs a comparison function")
            if self.psi.kind == "linear" and not 0.0 < self.psi.lam < 1.0:
                raise CoefficientOutOfRange(f"{k} needs lambda in (0, 1)")
            if k == "OrderedGeneralized" and self.order is None:
                raise CoefficientOutOfRange("OrderedGeneralized needs an order")
            if k == "Cyclic" and self.partition is None:
                raise CoefficientOutOfRange("Cyclic needs a partition")

    @property
    def lambda_eff(self) -> float | None:
        """Linear rate of the generalized form; ``None`` for psi-driven kinds."""
        k, c = self.kind, self.coeffs
        if k in ("Banach", "Ciric"):
            return c[0]
        if k in ("Kannan", "Chatterjea"):
            return 2 * c[0]
        if k == "HardyRogers":
            return _hardy_rogers_rate(*c)
        return None


def _hardy_rogers_rate(a, b, c) -> float:
    # decimal arithmetic so that 0.2 + 2*0.1 + 2*0.1 gives 0.6, not 0.6000000000000001
    a, b, c = (Fraction(repr(v)) for v in (a, b, c))
    return float(a + 2 * b + 2 * c)


@dataclass
class Reduction:
    """``(alpha, psi)`` for the generalized check and the original inequality's right side."""

    alpha: AlphaFunction
    psi: ComparisonFunction
    rhs: Callable = field(repr=False)
    kind: str = ""

    def check_direct(self, p: MappingPair, pairs=None, slack: float = DEFAULT_SLACK) -> CheckResult:
        """The original inequality ``d(fx, fy) <= rhs(x, y)`` on the same samples."""
        xs, ys = _pairs(p, pairs)
        weight = self.alpha(p.g(xs), p.g(ys))
        excess = np.asarray(weight * p.d(p.f(xs), p.f(ys)) - self.rhs(p, xs, ys), dtype=float)
        name = f"direct_{self.kind}"
        excess = np.where(np.isnan(excess), np.inf, excess)
        i = int(np.argmax(excess))
        if excess[i] > slack:
            return CheckResult(name, False, f"excess {excess[i]:.3g}",
                               witness=(_pt(xs[i]), _pt(ys[i])), magnitude=float(excess[i]), checked=excess.size)
        return CheckResult(name, True, checked=excess.size, magnitude=float(excess[i]))

    def check_generalized(self, p: MappingPair, pairs=None, slack: float = DEFAULT_SLACK) -> CheckResult:
        return check_contractive(p, self.alpha, self.psi, pairs=pairs, slack=slack)

    def dominance_gap(self, p: MappingPair, pairs=None):
        """``rhs(x, y) - psi(M(gx, gy))`` per pair; nonpositive wherever the reduction is sound."""
        xs, ys = _pairs(p, pairs)
        return self.rhs(p, xs, ys) - self.psi.eval(_M(p, xs, ys))


def _terms(p, xs, ys):
    gx, gy, fx, fy = p.g(xs), p.g(ys), p.f(xs), p.f(ys)
    d = p.space.d
    return d(gx, gy), d(gx, fx) + d(gy, fy), d(gx, fy) + d(gy, fx)


def reduce_corollary(config: CorollaryConfig, g=None) -> Reduction:
    """``alpha``, ``psi = Linear(lambda_eff)`` and the direct-form right side for ``config``.

    Kannan and Chatterjea use ``lam * s <= 2 lam * (s / 2) <= 2 lam * M``;
    Hardy-Rogers bounds each of its three terms by ``M``. ``g`` is needed
    only for the Cyclic kind.

    Raises
    ------
    CoefficientOutOfRange
        If the coefficients violate the kind's admissible range.
    """
    config.validate()
    k, c = config.kind, config.coeffs
    one = ConstantAlpha(1.0)
    if k == "Banach":
        return Reduction(one, ComparisonFunction.linear(c[0]), lambda p, x, y: c[0] * _terms(p, x, y)[0], k)
    if k == "Ciric":
        return Reduction(one, ComparisonFunction.linear(c[0]), lambda p, x, y: c[0] * _M(p, x, y), k)
    if k == "Kannan":
        return Reduction(one, ComparisonFunction.linear(2 * c[0]), lambda p, x, y: c[0] * _terms(p, x, y)[1], k)
    if k == "Chatterjea":
        return Reduction(one, ComparisonFunction.linear(2 * c[0]), lambda p, x, y: c[0] * _terms(p, x, y)[2], k)
    if k == "HardyRogers":
        a, b, cc = c

        def hr(p, x, y):
            t0, t1, t2 = _terms(p, x, y)
            return a * t0 + b * t1 + cc * t2

        return Reduction(one, ComparisonFunction.linear(_hardy_rogers_rate(a, b, cc)), hr, k)
    psi = config.psi
    if k == "Berinde":
        return Reduction(one, psi, lambda p, x, y: psi.eval(_terms(p, x, y)[0]), k)
    if k == "OrderedGeneralized":
        alpha = alpha_from_order(config.order)
    else:
        if g is None:
            raise ValueError("the cyclic reduction needs g")
        alpha = alpha_from_cyclic(config.partition, g)
    return Reduction(alpha, psi, lambda p, x, y: psi.eval(_M(p, x, y)), k)


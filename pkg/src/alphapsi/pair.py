"""Mapping pairs ``(f, g)``, alpha functions and the contractive-pair checks.

All checks take a sample set ``pairs = (xs, ys)`` of parallel arrays. On a
finite space the default is every ordered pair, which makes the check
decisive; on an interval the default is :func:`sample_pairs` (a grid plus
seeded random pairs), which can refute but never prove a hypothesis.
"""
from __future__ import annotations

import numpy as np

from ._checks import CheckResult, PreimageFailure
from .comparison import ComparisonFunction
from .maps import CatalogMap, IntervalSet, TableMap, fmt_number

DEFAULT_SLACK = 1e-12
DEFAULT_STEP = 0.01
DEFAULT_RANDOM_PAIRS = 10_000
PREIMAGE_TOL = 1e-12


# ------------------------------------------------------------------ alpha


class AlphaFunction:
    """``alpha: X x X -> [0, inf)``, vectorized over parallel arrays."""

    spec = ""

    def __call__(self, x, y):
        out = self._eval(np.asarray(x), np.asarray(y))
        return float(out) if np.ndim(out) == 0 else out

    def _eval(self, x, y):
        raise NotImplementedError

    def __repr__(self):
        return f"<alpha {self.spec}>"


class ConstantAlpha(AlphaFunction):
    def __init__(self, c: float):
        if c < 0:
            raise ValueError("alpha values must be nonnegative")
        self.c = float(c)
        self.spec = f"constant {fmt_number(self.c)}"

    def _eval(self, x, y):
        return np.full(np.broadcast(x, y).shape, self.c)


class MatrixAlpha(AlphaFunction):
    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("alpha matrix must be square")
        if np.any(m < 0):
            raise ValueError("alpha values must be nonnegative")
        m.setflags(write=False)
        self.matrix = m
        self.spec = "matrix"

    def _eval(self, x, y):
        return self.matrix[x, y]


class BoxAlpha(AlphaFunction):
    """``inside`` when both arguments lie in ``[lo, hi]``, else ``outside``."""

    def __init__(self, lo, hi, inside=1.0, outside=0.0):
        if inside < 0 or outside < 0:
            raise ValueError("alpha values must be nonnegative")
        self.lo, self.hi, self.inside, self.outside = map(float, (lo, hi, inside, outside))
        self.spec = "box " + " ".join(map(fmt_number, (self.lo, self.hi, self.inside, self.outside)))

    def _eval(self, x, y):
        inx = (x >= self.lo) & (x <= self.hi)
        iny = (y >= self.lo) & (y <= self.hi)
        return np.where(inx & iny, self.inside, self.outside)


class ThresholdAlpha(AlphaFunction):
    """``above`` when ``x > y`` (``x >= y`` if not strict), else ``otherwise``."""

    def __init__(self, above, otherwise, strict=True):
        if above < 0 or otherwise < 0:
            raise ValueError("alpha values must be nonnegative")
        self.above, self.otherwise, self.strict = float(above), float(otherwise), bool(strict)
        self.spec = "threshold {} {} {}".format(
            fmt_number(self.above), fmt_number(self.otherwise), "strict" if strict else "nonstrict"
        )

    def _eval(self, x, y):
        cond = x > y if self.strict else x >= y
        return np.where(cond, self.above, self.otherwise)


class ComparableAlpha(AlphaFunction):
    """1 on comparable pairs of a partial order, 0 elsewhere."""

    def __init__(self, order):
        self.order = order
        self.spec = "from_order"

    def _eval(self, x, y):
        return np.where(self.order.comparable(x, y), 1.0, 0.0)


class CrossAlpha(AlphaFunction):
    """1 on ``(S1 x S2) u (S2 x S1)`` for two interval sets, 0 elsewhere."""

    def __init__(self, s1: IntervalSet, s2: IntervalSet, tol: float = 0.0):
        self.s1, self.s2, self.tol = s1, s2, tol
        self.spec = "from_cyclic"

    def _eval(self, x, y):
        a = self.s1.contains(x, self.tol) & self.s2.contains(y, self.tol)
        b = self.s2.contains(x, self.tol) & self.s1.contains(y, self.tol)
        return np.where(a | b, 1.0, 0.0)


# ------------------------------------------------------------------- pair


class MappingPair:
    """The pair ``(f, g)`` on a space, with a rule for choosing g-preimages.

    On a finite space ``f`` and ``g`` are :class:`TableMap` values and the
    preimage of ``y`` is the least index ``x`` with ``g(x) = y``. On an
    interval they are catalog maps and the preimage is ``g_inverse(y)``
    (defaulting to the catalog inverse of ``g``), accepted only when it lies
    in the space and maps back onto ``y``.
    """

    def __init__(self, space, f, g, g_inverse=None):
        self.space = space
        self.f = f
        self.g = g
        if space.is_finite:
            if not (isinstance(f, TableMap) and isinstance(g, TableMap)):
                raise TypeError("finite spaces need table maps")
            if len(f) != space.size or len(g) != space.size:
                raise ValueError("table length must match the space size")
            self._least_pre: dict[int, int] = {}
            for x, y in enumerate(g.values):
                self._least_pre.setdefault(y, x)
            self.g_inverse = None
        else:
            if not (isinstance(f, CatalogMap) and isinstance(g, CatalogMap)):
                raise TypeError("interval spaces need catalog maps")
            self.g_inverse = g_inverse if g_inverse is not None else g.inverse()

    def preimage(self, y):
        """Some ``x`` with ``g(x) = y``; raises :class:`PreimageFailure`."""
        if self.space.is_finite:
            try:
                return self._least_pre[int(y)]
            except KeyError:
                raise PreimageFailure(f"{y} is not in the range of g") from None
        if self.g_inverse is None:
            raise PreimageFailure("g has no declared inverse")
        x = self.g_inverse(y)
        if not self.space.contains(x):
            raise PreimageFailure(f"g-preimage {x!r} of {y!r} lies outside the space")
        if abs(self.g(x) - y) > PREIMAGE_TOL * max(1.0, abs(y)):
            raise PreimageFailure(f"g(g_inverse({y!r})) = {self.g(x)!r} != {y!r}")
        return x

    def d(self, x, y):
        return self.space.d(x, y)


def all_pairs(space):
    """Every ordered pair of a finite space as parallel index arrays."""
    n = space.size
    xs, ys = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return xs.ravel(), ys.ravel()


def sample_pairs(
    space,
    box=None,
    step: float = DEFAULT_STEP,
    n_random: int = DEFAULT_RANDOM_PAIRS,
    seed: int = 0,
):
    """Grid pairs over ``box`` (step ``step``) followed by seeded uniform pairs.

    ``box`` defaults to the space's sampling window. Finite spaces return
    :func:`all_pairs` and ignore the other arguments.
    """
    if space.is_finite:
        return all_pairs(space)
    lo, hi = box if box is not None else space.sampling_box()
    lo, hi = max(lo, space.lo), min(hi, space.hi)
    parts_x, parts_y = [], []
    if step and step > 0:
        n = int(round((hi - lo) / step)) + 1
        grid = np.linspace(lo, hi, n)
        gx, gy = np.meshgrid(grid, grid, indexing="ij")
        parts_x.append(gx.ravel())
        parts_y.append(gy.ravel())
    if n_random:
        rng = np.random.default_rng(seed)
        parts_x.append(rng.uniform(lo, hi, n_random))
        parts_y.append(rng.uniform(lo, hi, n_random))
    return np.concatenate(parts_x), np.concatenate(parts_y)


def _pairs(p, pairs):
    if pairs is None:
        return sample_pairs(p.space)
    xs, ys = (np.asarray(a) for a in pairs)
    return xs, ys


def _pt(x):
    return x.item() if hasattr(x, "item") else x


def compute_M(p: MappingPair, x, y):
    """``max{d(gx,gy), [d(gx,fx)+d(gy,fy)]/2, [d(gx,fy)+d(gy,fx)]/2}``.

    Accepts scalars (checked against the space) or parallel arrays.
    """
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        p.space.require(x, y)
    return _M(p, x, y)


def _M(p, x, y):
    gx, gy, fx, fy = p.g(x), p.g(y), p.f(x), p.f(y)
    d = p.space.d
    out = np.maximum(
        d(gx, gy),
        np.maximum((d(gx, fx) + d(gy, fy)) / 2.0, (d(gx, fy) + d(gy, fx)) / 2.0),
    )
    return float(out) if np.ndim(out) == 0 else out


def check_contractive(
    p: MappingPair,
    alpha: AlphaFunction,
    psi: ComparisonFunction,
    pairs=None,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """``alpha(gx, gy) d(fx, fy) <= psi(M(gx, gy)) + slack`` at every sample pair.

    Reports the worst-violating pair and its excess on failure.
    """
    xs, ys = _pairs(p, pairs)
    lhs = alpha(p.g(xs), p.g(ys)) * p.d(p.f(xs), p.f(ys))
    rhs = psi.eval(_M(p, xs, ys))
    excess = np.asarray(lhs - rhs, dtype=float)
    name = "contractive"
    if excess.size == 0:
        return CheckResult(name, True, "no pairs")
    # nan excess (e.g. 0 * inf) counts as a violation
    excess = np.where(np.isnan(excess), np.inf, excess)
    i = int(np.argmax(excess))
    worst = float(excess[i])
    if worst > slack:
        return CheckResult(
            name, False, f"excess {worst:.3g}", witness=(_pt(xs[i]), _pt(ys[i])),
            magnitude=worst, checked=excess.size,
        )
    return CheckResult(name, True, checked=excess.size, magnitude=worst)


def _admissible(name, alpha, ax, ay, bx, by, xs, ys):
    bad = (alpha(ax, ay) >= 1.0) & ~(alpha(bx, by) >= 1.0)
    bad = np.atleast_1d(bad)
    if bad.any():
        i = int(np.argmax(bad))
        return CheckResult(name, False, "alpha >= 1 not preserved",
                           witness=(_pt(xs[i]), _pt(ys[i])), checked=bad.size)
    return CheckResult(name, True, checked=bad.size)


def check_alpha_admissible(f, alpha: AlphaFunction, pairs) -> CheckResult:
    """No sampled pair has ``alpha(x, y) >= 1`` and ``alpha(fx, fy) < 1``."""
    xs, ys = (np.asarray(a) for a in pairs)
    return _admissible("alpha_admissible", alpha, xs, ys, f(xs), f(ys), xs, ys)


def check_alpha_admissible_wrt_g(p: MappingPair, alpha: AlphaFunction, pairs=None) -> CheckResult:
    """No sampled pair has ``alpha(gx, gy) >= 1`` and ``alpha(fx, fy) < 1``."""
    xs, ys = _pairs(p, pairs)
    return _admissible("admissible_wrt_g", alpha, p.g(xs), p.g(ys), p.f(xs), p.f(ys), xs, ys)


def check_range_inclusion(p: MappingPair, n_samples: int = DEFAULT_RANDOM_PAIRS, seed: int = 0, box=None) -> CheckResult:
    """``f(X)`` contained in ``g(X)``.

    Exhaustive on finite spaces. On an interval, each of ``n_samples``
    seeded points (plus the window ends) must have ``f(x)`` hit exactly by
    ``g`` at the declared preimage.
    """
    name = "range_inclusion"
    if p.space.is_finite:
        missing = sorted(p.f.image() - p.g.image())
        if missing:
            x = p.f.values.index(missing[0])
            return CheckResult(name, False, f"f({x}) = {missing[0]} not in g(X)", witness=x)
        return CheckResult(name, True, checked=p.space.size)
    lo, hi = box if box is not None else p.space.sampling_box()
    lo, hi = max(lo, p.space.lo), min(hi, p.space.hi)
    rng = np.random.default_rng(seed)
    xs = np.concatenate([[lo, hi], rng.uniform(lo, hi, n_samples)])
    for x in xs:
        y = p.f(x)
        try:
            p.preimage(y)
        except PreimageFailure as exc:
            return CheckResult(name, False, str(exc), witness=float(x), checked=len(xs))
    return CheckResult(name, True, checked=len(xs))


def check_initial_point(p: MappingPair, alpha: AlphaFunction, x0) -> bool:
    """True iff ``alpha(g x0, f x0) >= 1``."""
    p.space.require(x0)
    return bool(alpha(p.g(x0), p.f(x0)) >= 1.0)


def initial_points(p: MappingPair, alpha: AlphaFunction) -> list:
    """All valid starting points of a finite pair."""
    xs = np.arange(p.space.size)
    ok = alpha(p.g(xs), p.f(xs)) >= 1.0
    return [int(x) for x in xs[ok]]


def check_self_map(p: MappingPair, n_samples: int = DEFAULT_RANDOM_PAIRS, seed: int = 0, box=None) -> CheckResult:
    """``f`` and ``g`` map the space into itself (exhaustive or sampled)."""
    name = "self_map"
    if p.space.is_finite:
        return CheckResult(name, True, "tables are self-maps by construction", checked=p.space.size)
    lo, hi = box if box is not None else p.space.sampling_box()
    lo, hi = max(lo, p.space.lo), min(hi, p.space.hi)
    rng = np.random.default_rng(seed)
    xs = np.concatenate([[lo, hi], rng.uniform(lo, hi, n_samples)])
    for label, m in (("f", p.f), ("g", p.g)):
        v = m(xs)
        bad = ~np.isfinite(v) | (v < p.space.lo) | (v > p.space.hi)
        if bad.any():
            i = int(np.argmax(bad))
            return CheckResult(name, False, f"{label} leaves the space", witness=float(xs[i]))
    return CheckResult(name, True, checked=len(xs))


def check_g_range_closed(p: MappingPair) -> CheckResult:
    """``g(X)`` closed: automatic on finite spaces, analytic for catalog maps."""
    name = "g_range_closed"
    if p.space.is_finite:
        return CheckResult(name, True, "finite")
    rng_set = p.g.image(p.space.lo, p.space.hi)
    if rng_set.is_closed():
        return CheckResult(name, True, f"g(X) = {rng_set}")
    return CheckResult(name, False, f"g(X) = {rng_set} is not closed", witness=str(rng_set))


def is_coincidence(p: MappingPair, z, tol: float = 0.0) -> bool:
    if p.space.is_finite:
        return p.f(z) == p.g(z)
    return bool(p.d(p.f(z), p.g(z)) <= tol)


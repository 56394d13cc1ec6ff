"""(c)-comparison functions: evaluation, iterates and series-tail bounds."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._checks import CheckResult, NonSummable

DEFAULT_EPS = 1e-12
DEFAULT_MAX_TERMS = 10_000
DECAY_WINDOW = 3
# beyond the last knot a table must stay strictly below the diagonal
_EXTRAPOLATION_CAP = 1.0 - 1e-9


@dataclass(frozen=True)
class ComparisonFunction:
    """A nondecreasing map ``psi: [0, inf) -> [0, inf)`` with summable iterates.

    Two kinds exist. ``linear`` is ``psi(t) = lam * t`` with ``0 < lam < 1``;
    ``table`` is a piecewise-linear interpolant through user knots, extended
    past the last knot with the last segment's slope (capped below ``t``).
    Build instances with :meth:`linear` or :meth:`table`.
    """

    kind: str
    lam: float = 0.0
    knots_t: tuple[float, ...] = ()
    knots_v: tuple[float, ...] = ()

    @classmethod
    def linear(cls, lam: float) -> "ComparisonFunction":
        lam = float(lam)
        if not 0.0 < lam < 1.0:
            raise ValueError(f"linear comparison function needs 0 < lam < 1, got {lam}")
        return cls("linear", lam=lam)

    @classmethod
    def table(cls, ts, vs) -> "ComparisonFunction":
        ts = [float(t) for t in ts]
        vs = [float(v) for v in vs]
        if len(ts) != len(vs) or not ts:
            raise ValueError("table needs matching, non-empty knot lists")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("table knots must be strictly increasing in t")
        if ts[0] < 0 or any(v < 0 for v in vs):
            raise ValueError("table knots must be nonnegative")
        if ts[0] == 0.0:
            if vs[0] != 0.0:
                raise ValueError("a comparison function must vanish at 0")
        else:
            ts.insert(0, 0.0)
            vs.insert(0, 0.0)
        return cls("table", knots_t=tuple(ts), knots_v=tuple(vs))

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        if self.kind == "linear":
            return self.lam * t
        ts, vs = self.knots_t, self.knots_v
        arr = np.asarray(t, dtype=float)
        out = np.interp(arr, ts, vs)
        if len(ts) > 1:
            beyond = arr > ts[-1]
            if np.any(beyond):
                slope = (vs[-1] - vs[-2]) / (ts[-1] - ts[-2])
                ext = vs[-1] + slope * (arr - ts[-1])
                ext = np.clip(ext, 0.0, arr * _EXTRAPOLATION_CAP)
                out = np.where(beyond, ext, out)
        else:
            out = np.where(arr > 0, 0.0, out)
        if np.ndim(out) == 0:
            return float(out)
        return out


def psi_iterate(psi: ComparisonFunction, n: int, t: float) -> float:
    """Apply ``psi`` to ``t`` ``n`` times (``n = 0`` returns ``t``)."""
    if n < 0 or t < 0:
        raise ValueError("psi_iterate needs n >= 0 and t >= 0")
    if psi.kind == "linear":
        return psi.lam**n * t
    for _ in range(n):
        t = psi.eval(t)
    return float(t)


def _geometric_scale(lam: float, t: float) -> float:
    # t / (1 - lam) with lam read as its shortest decimal literal, so
    # Linear(0.8) sums to exactly 5 rather than 5.000000000000001
    return float(Fraction(t) / (1 - Fraction(repr(lam))))


def tail_bound(
    psi: ComparisonFunction,
    n: int,
    t: float,
    eps: float = DEFAULT_EPS,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> float:
    """Upper bound on ``sum_{p >= n} psi^p(t)``.

    Linear functions use the closed form ``lam**n * t / (1 - lam)``. Tables
    are summed term by term until a term drops below ``eps`` while the
    ratios over the last three terms stay below one; the remainder is then
    bounded geometrically by ``last / (1 - ratio)``.

    Raises
    ------
    NonSummable
        If ``max_terms`` terms are summed without the decay guard firing.
    """
    if n < 0 or t < 0:
        raise ValueError("tail_bound needs n >= 0 and t >= 0")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if t == 0:
        return 0.0
    if psi.kind == "linear":
        return psi.lam**n * _geometric_scale(psi.lam, t)

    window: deque[float] = deque(maxlen=DECAY_WINDOW + 1)
    cur = float(t)
    total = 0.0
    summed = 0
    p = 0
    while True:
        window.append(cur)
        if p >= n:
            total += cur
            summed += 1
            if cur == 0.0:
                return total
            if cur < eps and len(window) == window.maxlen:
                terms = list(window)
                ratio = max(b / a if a > 0 else 0.0 for a, b in zip(terms, terms[1:]))
                if ratio < 1.0:
                    return total + cur / (1.0 - ratio)
            if summed >= max_terms:
                raise NonSummable(
                    f"no geometric decay after {max_terms} terms (last term {cur:.3g})"
                )
        cur = float(psi.eval(cur))
        p += 1


def check_psi_membership(psi: ComparisonFunction, samples) -> CheckResult:
    """Sample-based test of membership in the class of comparison functions.

    Checks, in order: ``psi(0) = 0``, monotonicity between consecutive
    (sorted) samples, ``psi(t) < t`` at each sample and convergence of the
    iterate series at each sample. Failure is reported, never raised.
    """
    name = "psi_membership"
    pts = sorted(float(s) for s in samples)
    if not pts:
        raise ValueError("samples must be non-empty")
    if any(s <= 0 for s in pts):
        raise ValueError("samples must be positive")
    if psi.eval(0.0) != 0.0:
        return CheckResult(name, False, "psi(0) != 0", witness=0.0)
    vals = [float(psi.eval(s)) for s in pts]
    for (a, va), (b, vb) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        if vb < va:
            return CheckResult(name, False, "psi not nondecreasing", witness=(a, b))
    for s, v in zip(pts, vals):
        if not v < s:
            return CheckResult(name, False, "psi(t) < t violated", witness=s, magnitude=v - s)
    for s in pts:
        try:
            tail_bound(psi, 0, s)
        except NonSummable as exc:
            return CheckResult(name, False, f"NonSummable: {exc}", witness=s)
    return CheckResult(name, True, checked=len(pts))

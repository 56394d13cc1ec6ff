"""Self-maps: lookup tables on finite spaces, a closed-form catalog on the line.

Catalog maps are vectorized over numpy arrays, know their own inverse where
one exists, and compute exact images of intervals as :class:`IntervalSet`
values so that range closedness and inclusions can be decided analytically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def parse_number(tok: str) -> float:
    """Decimal literal, ``inf``/``-inf``, or a rational ``p/q``."""
    tok = tok.strip()
    if "/" in tok:
        return float(Fraction(tok))
    return float(tok)


def fmt_number(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


# ----------------------------------------------------------------- intervals


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, x, tol=0.0):
        x = np.asarray(x, dtype=float)
        left = x >= self.lo - tol if self.lo_closed or tol > 0 else x > self.lo
        right = x <= self.hi + tol if self.hi_closed or tol > 0 else x < self.hi
        return left & right

    def __str__(self):
        return (
            ("[" if self.lo_closed else "(")
            + f"{fmt_number(self.lo)}, {fmt_number(self.hi)}"
            + ("]" if self.hi_closed else ")")
        )


class IntervalSet:
    """Finite union of intervals of the real line, kept merged and sorted."""

    def __init__(self, pieces=()):
        self.pieces = self._merge(list(pieces))

    @staticmethod
    def _merge(pieces):
        pieces = sorted(
            (p for p in pieces if p.lo < p.hi or (p.lo == p.hi and p.lo_closed and p.hi_closed)),
            key=lambda p: (p.lo, not p.lo_closed),
        )
        out: list[Piece] = []
        for p in pieces:
            if out:
                q = out[-1]
                touching = q.hi > p.lo or (q.hi == p.lo and (q.hi_closed or p.lo_closed))
                if touching:
                    if p.hi > q.hi:
                        hi, hc = p.hi, p.hi_closed
                    elif p.hi == q.hi:
                        hi, hc = q.hi, q.hi_closed or p.hi_closed
                    else:
                        hi, hc = q.hi, q.hi_closed
                    out[-1] = Piece(q.lo, hi, q.lo_closed, hc)
                    continue
            out.append(p)
        return out

    @classmethod
    def closed(cls, lo, hi) -> "IntervalSet":
        return cls([Piece(lo, hi, math.isfinite(lo), math.isfinite(hi))])

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    def contains(self, x, tol=0.0):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for p in self.pieces:
            out |= p.contains(x, tol)
        return out

    def is_closed(self) -> bool:
        """A union of intervals on the line is closed iff every finite end is attained."""
        for p in self.pieces:
            if math.isfinite(p.lo) and not p.lo_closed:
                return False
            if math.isfinite(p.hi) and not p.hi_closed:
                return False
        return True

    def issubset(self, other: "IntervalSet") -> bool:
        for p in self.pieces:
            if not any(
                (q.lo < p.lo or (q.lo == p.lo and (q.lo_closed or not p.lo_closed)))
                and (q.hi > p.hi or (q.hi == p.hi and (q.hi_closed or not p.hi_closed)))
                for q in other.pieces
            ):
                return False
        return True

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for p in self.pieces:
            for q in other.pieces:
                if p.lo > q.lo or (p.lo == q.lo and not p.lo_closed):
                    lo, lc = p.lo, p.lo_closed
                else:
                    lo, lc = q.lo, q.lo_closed
                if p.hi < q.hi or (p.hi == q.hi and not p.hi_closed):
                    hi, hc = p.hi, p.hi_closed
                else:
                    hi, hc = q.hi, q.hi_closed
                out.append(Piece(lo, hi, lc, hc))
        return IntervalSet(out)

    @property
    def empty(self) -> bool:
        return not self.pieces

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.pieces == other.pieces

    def __repr__(self):
        return " u ".join(map(str, self.pieces)) if self.pieces else "{}"


# ------------------------------------------------------------ finite tables


class TableMap:
    """Self-map of a finite space given by the image index of each point."""

    is_table = True

    def __init__(self, values):
        self.values = tuple(int(v) for v in values)
        self._arr = np.array(self.values, dtype=np.int64)

    def __call__(self, x):
        out = self._arr[x]
        return int(out) if np.ndim(out) == 0 else out

    def __len__(self):
        return len(self.values)

    @property
    def spec(self) -> str:
        return "table " + " ".join(map(str, self.values))

    @property
    def injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def image(self) -> frozenset:
        return frozenset(self.values)

    def __eq__(self, other):
        return isinstance(other, TableMap) and self.values == other.values

    __hash__ = None

    def __repr__(self):
        return f"TableMap({self.values})"


def identity_table(n: int) -> TableMap:
    return TableMap(range(n))


# ---------------------------------------------------------- catalog (line)


class CatalogMap:
    """Closed-form map of the real line.

    Subclasses give ``_f`` (vectorized evaluation), ``direction`` (+1 strictly
    increasing, -1 strictly decreasing, 0 constant) on ``domain``, and
    ``inverse``.
    """

    is_table = False
    name = ""
    params: tuple = ()
    direction = 1
    domain = (-math.inf, math.inf, False, False)  # lo, hi, lo_closed, hi_closed

    def __call__(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self._f(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def _f(self, x):
        raise NotImplementedError

    def inverse(self):
        return None

    @property
    def spec(self) -> str:
        return " ".join([self.name, *map(fmt_number, self.params)])

    def __repr__(self):
        return f"<{self.spec}>"

    def __eq__(self, other):
        return isinstance(other, CatalogMap) and self.spec == other.spec

    __hash__ = None

    def _in_domain(self, lo, hi, lo_in, hi_in) -> bool:
        dlo, dhi, dlc, dhc = self.domain
        ok_lo = lo > dlo or (lo == dlo and (dlc or not lo_in))
        ok_hi = hi < dhi or (hi == dhi and (dhc or not hi_in))
        return ok_lo and ok_hi

    def image(self, lo, hi, lo_in=True, hi_in=True) -> IntervalSet:
        """Image of the interval from ``lo`` to ``hi``; ``*_in`` say whether ends belong to it."""
        lo_in, hi_in = lo_in and math.isfinite(lo), hi_in and math.isfinite(hi)
        if not self._in_domain(lo, hi, lo_in, hi_in):
            raise ValueError(f"{self.spec} is not defined on all of ({lo}, {hi})")
        va, vb = self(lo), self(hi)
        a_att = lo_in and math.isfinite(lo)
        b_att = hi_in and math.isfinite(hi)
        if self.direction == 0:
            return IntervalSet([Piece(va, va, True, True)])
        if self.direction < 0:
            va, vb, a_att, b_att = vb, va, b_att, a_att
        return IntervalSet([Piece(va, vb, a_att and math.isfinite(va), b_att and math.isfinite(vb))])

    def injective_on(self, lo, hi) -> bool:
        return self.direction != 0


class Identity(CatalogMap):
    name = "identity"

    def _f(self, x):
        return x

    def inverse(self):
        return Identity()


class Affine(CatalogMap):
    name = "affine"

    def __init__(self, a, b):
        self.a, self.b = float(a), float(b)
        self.params = (self.a, self.b)
        self.direction = int(np.sign(self.a))

    def _f(self, x):
        if self.a == 0:
            return np.full_like(x, self.b)
        return self.a * x + self.b

    def inverse(self):
        return None if self.a == 0 else Affine(1.0 / self.a, -self.b / self.a)


class Scale(CatalogMap):
    name = "scale"

    def __init__(self, c):
        self.c = float(c)
        self.params = (self.c,)
        self.direction = int(np.sign(self.c))

    def _f(self, x):
        if self.c == 0:
            return np.zeros_like(x)
        return self.c * x

    def inverse(self):
        return None if self.c == 0 else Scale(1.0 / self.c)


class Reciprocal(CatalogMap):
    name = "reciprocal"
    direction = -1
    domain = (0.0, math.inf, False, False)

    def _f(self, x):
        return 1.0 / x

    def _in_domain(self, lo, hi, lo_in, hi_in):
        pos = lo > 0 or (lo == 0 and not lo_in)
        neg = hi < 0 or (hi == 0 and not hi_in)
        return pos or neg

    def inverse(self):
        return Reciprocal()


class ExpDecay(CatalogMap):
    name = "exp_decay"
    direction = -1

    def _f(self, x):
        return np.exp(-x)

    def inverse(self):
        return NegLog()


class NegLog(CatalogMap):
    name = "neg_log"
    direction = -1
    domain = (0.0, math.inf, False, False)

    def _f(self, x):
        return -np.log(x)

    def inverse(self):
        return ExpDecay()


class Exp(CatalogMap):
    name = "exp"

    def _f(self, x):
        return np.exp(x)

    def inverse(self):
        return Log()


class Log(CatalogMap):
    name = "log"
    domain = (0.0, math.inf, False, False)

    def _f(self, x):
        return np.log(x)

    def inverse(self):
        return Exp()


class LogForm(CatalogMap):
    """``ln(1 + x / c)`` for ``c > 0``."""

    name = "log_form"

    def __init__(self, c):
        self.c = float(c)
        if self.c <= 0:
            raise ValueError("log_form needs c > 0")
        self.params = (self.c,)
        self.domain = (-self.c, math.inf, False, False)

    def _f(self, x):
        return np.log1p(x / self.c)

    def inverse(self):
        return ExpForm(self.c)


class ExpForm(CatalogMap):
    """``c (e^x - 1)``, the inverse of ``log_form c``."""

    name = "exp_form"

    def __init__(self, c):
        self.c = float(c)
        if self.c <= 0:
            raise ValueError("exp_form needs c > 0")
        self.params = (self.c,)

    def _f(self, x):
        return self.c * np.expm1(x)

    def inverse(self):
        return LogForm(self.c)


class Sqrt(CatalogMap):
    name = "sqrt"
    domain = (0.0, math.inf, True, False)

    def _f(self, x):
        return np.sqrt(x)

    def inverse(self):
        return Power(2.0)


class Power(CatalogMap):
    """``x ** p`` on ``[0, inf)`` for ``p > 0``."""

    name = "power"
    domain = (0.0, math.inf, True, False)

    def __init__(self, p):
        self.p = float(p)
        if self.p <= 0:
            raise ValueError("power needs p > 0")
        self.params = (self.p,)

    def _f(self, x):
        return np.power(x, self.p)

    def inverse(self):
        return Sqrt() if self.p == 2.0 else Power(1.0 / self.p)


class Piecewise(CatalogMap):
    """Catalog maps glued at breakpoints.

    Piece ``i`` acts on ``(b[i-1], b[i]]``; the first piece extends to
    ``-inf`` and the last to ``+inf``.
    """

    name = "piecewise"

    def __init__(self, breaks, pieces):
        self.breaks = tuple(float(b) for b in breaks)
        self.pieces = tuple(pieces)
        if len(self.pieces) != len(self.breaks) + 1:
            raise ValueError("piecewise needs one more piece than breakpoints")
        if any(b <= a for a, b in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breakpoints must increase")
        self.direction = None

    @property
    def spec(self) -> str:
        return (
            "piecewise "
            + " ".join(map(fmt_number, self.breaks))
            + " : "
            + " | ".join(p.spec for p in self.pieces)
        )

    def _f(self, x):
        idx = np.searchsorted(self.breaks, x, side="left")
        out = np.empty_like(x, dtype=float)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out = np.where(mask, piece._f(np.where(mask, x, self._safe_point(i))), out)
        return out

    def _safe_point(self, i):
        # any in-domain argument; masked-out lanes are discarded
        lo = self.breaks[i - 1] if i > 0 else -math.inf
        hi = self.breaks[i] if i < len(self.breaks) else math.inf
        if math.isfinite(hi):
            return hi
        return lo + 1.0 if math.isfinite(lo) else 0.0

    def _segments(self, lo, hi, lo_in=True, hi_in=True):
        edges = (-math.inf, *self.breaks, math.inf)
        for i, piece in enumerate(self.pieces):
            a, b = edges[i], edges[i + 1]
            # piece i covers (a, b]
            if lo > a:
                sa, sa_in = lo, lo_in
            else:
                sa, sa_in = a, False
            if hi <= b:
                sb, sb_in = hi, hi_in
            else:
                sb, sb_in = b, math.isfinite(b)
            if sa < sb or (sa == sb and sa_in and sb_in):
                yield piece, sa, sb, sa_in, sb_in

    def image(self, lo, hi, lo_in=True, hi_in=True) -> IntervalSet:
        lo_in, hi_in = lo_in and math.isfinite(lo), hi_in and math.isfinite(hi)
        out = IntervalSet()
        for piece, a, b, a_in, b_in in self._segments(lo, hi, lo_in, hi_in):
            out = out.union(piece.image(a, b, a_in, b_in))
        return out

    def injective_on(self, lo, hi) -> bool:
        segs = list(self._segments(lo, hi))
        if not all(p.injective_on(a, b) for p, a, b, *_ in segs):
            return False
        images = [p.image(a, b, ai, bi) for p, a, b, ai, bi in segs]
        for i in range(len(images)):
            for j in range(i + 1, len(images)):
                if not images[i].intersection(images[j]).empty:
                    return False
        return True


_CATALOG = {
    "identity": (Identity, 0),
    "affine": (Affine, 2),
    "scale": (Scale, 1),
    "reciprocal": (Reciprocal, 0),
    "exp_decay": (ExpDecay, 0),
    "neg_log": (NegLog, 0),
    "exp": (Exp, 0),
    "log": (Log, 0),
    "log_form": (LogForm, 1),
    "exp_form": (ExpForm, 1),
    "sqrt": (Sqrt, 0),
    "power": (Power, 1),
}


def parse_map(text: str, finite_size: int | None = None):
    """Build a map from its one-line description, e.g. ``affine 2 -1.5``.

    On a finite space (``finite_size`` given) only ``table ...`` and
    ``identity`` are accepted.
    """
    toks = text.split()
    if not toks:
        raise ValueError("empty map description")
    head, args = toks[0], toks[1:]
    if finite_size is not None:
        if head == "identity" and not args:
            return identity_table(finite_size)
        if head == "table":
            tm = TableMap(int(a) for a in args)
            if len(tm) != finite_size or any(not 0 <= v < finite_size for v in tm.values):
                raise ValueError(f"table must list {finite_size} indices in range")
            return tm
        raise ValueError(f"finite spaces take 'table' or 'identity' maps, not {head!r}")
    if head == "piecewise":
        rest = text.split(None, 1)[1]
        if ":" not in rest:
            raise ValueError("piecewise syntax: piecewise b1 b2 : map | map | map")
        brk, body = rest.split(":", 1)
        return Piecewise([parse_number(b) for b in brk.split()], [parse_map(p) for p in body.split("|")])
    if head not in _CATALOG:
        raise ValueError(f"unknown map {head!r}; catalog: {', '.join(sorted(_CATALOG))}, piecewise")
    cls, arity = _CATALOG[head]
    if len(args) != arity:
        raise ValueError(f"{head} takes {arity} parameter(s), got {len(args)}")
    return cls(*(parse_number(a) for a in args))

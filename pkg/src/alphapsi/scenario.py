"""Scenario files: ``[section]`` headers, ``key = value`` lines, matrices as indented rows.

Example::

    [space]
    kind = interval
    lo = 0
    hi = inf

    [pair]
    f = piecewise 2 : scale 1/3 | affine 2 -1.5
    g = scale 1/2

    [alpha]
    kind = box
    lo = 0
    hi = 1

    [psi]
    kind = linear
    lambda = 4/5

    [run]
    mode = iterate
    x0 = 1

A parsed :class:`Scenario` keeps the raw text values; :func:`build` turns
them into spaces, maps and functions and reports bad values with the line
they came from.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adapters import CorollaryConfig, alpha_from_cyclic, alpha_from_order
from .comparison import ComparisonFunction
from .iterate import DEFAULT_MAX_ITER, DEFAULT_TOL
from .maps import parse_map, parse_number
from .pair import (
    DEFAULT_RANDOM_PAIRS,
    DEFAULT_STEP,
    BoxAlpha,
    ConstantAlpha,
    MappingPair,
    MatrixAlpha,
    ThresholdAlpha,
)
from .spaces import CyclicPartition, FiniteSpace, IntervalSpace, PartialOrder, line_space

MODES = ("check", "iterate", "oracle", "falsify")
# blocks every non-falsify scenario must carry
REQUIRED = ("space", "pair", "alpha", "psi")
SECTIONS = ("space", "pair", "alpha", "order", "partition", "psi", "corollary", "run")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line, self.field, self.message = line, field, message
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class Scenario:
    """Raw section/key/value text of a scenario plus the line of each entry."""

    sections: dict[str, dict[str, str]] = field(default_factory=dict)
    lines: dict[tuple, int] = field(default_factory=dict, compare=False, repr=False)
    source: str = field(default="<string>", compare=False)

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def has(self, section: str) -> bool:
        return section in self.sections

    @property
    def mode(self) -> str:
        return self.get("run", "mode", "check")

    def dumps(self) -> str:
        out = []
        for name, entries in self.sections.items():
            out.append(f"[{name}]")
            for k, v in entries.items():
                if "\n" in v:
                    out.append(f"{k} =")
                    out.extend("    " + row for row in v.split("\n"))
                else:
                    out.append(f"{k} = {v}")
            out.append("")
        return "\n".join(out)

    def line_of(self, section: str, key: str | None = None):
        return self.lines.get((section, key))


_HEADER = re.compile(r"^\[([^\]]+)\]\s*$")
_KEY = re.compile(r"^([A-Za-z_][\w-]*)\s*=")


def _line_index(text: str) -> dict:
    idx, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        m = _HEADER.match(raw)
        if m:
            section = m.group(1).strip()
            idx.setdefault((section, None), n)
            continue
        m = _KEY.match(raw)
        if m and section is not None:
            idx.setdefault((section, m.group(1)), n)
    return idx


def _normalize(value: str) -> str:
    rows = [r.strip() for r in value.splitlines()]
    return "\n".join(r for r in rows if r)


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario text and check that the blocks its mode needs are present.

    Raises
    ------
    ParseError
        On malformed syntax, unknown sections or modes, or missing blocks.
    """
    cp = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",),
        interpolation=None, strict=True, empty_lines_in_values=False,
    )
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("content before the first [section]", line=exc.lineno) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], line=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ParseError("expected 'key = value'", line=lineno) from None
    lines = _line_index(text)
    sections = {}
    for name in cp.sections():
        if name not in SECTIONS:
            raise ParseError(f"unknown section [{name}]", line=lines.get((name, None)))
        sections[name] = {k: _normalize(v) for k, v in cp.items(name)}
    scn = Scenario(sections, lines, source)
    _validate(scn)
    return scn


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text, source=str(path))


def _validate(scn: Scenario):
    mode = scn.mode
    if mode not in MODES:
        raise ParseError(f"mode must be one of {', '.join(MODES)}", scn.line_of("run", "mode"), "run.mode")
    if mode == "falsify":
        return
    for block in REQUIRED:
        if not scn.has(block):
            raise ParseError(f"missing [{block}] block", field=block)
    if mode == "iterate" and scn.get("run", "x0") is None:
        raise ParseError("iterate mode needs x0", scn.line_of("run"), "run.x0")


# ------------------------------------------------------------------- build


@dataclass
class Built:
    space: object
    pair: MappingPair | None = None
    alpha: object = None
    psi: ComparisonFunction | None = None
    order: PartialOrder | None = None
    partition: CyclicPartition | None = None
    corollary: CorollaryConfig | None = None
    x0: object = None
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = 0
    step: float = DEFAULT_STEP
    random_pairs: int = DEFAULT_RANDOM_PAIRS
    box: tuple | None = None
    trials: int = 1000
    size_max: int = 6


class _Reader:
    """Typed access to scenario values that raises ParseError with the source line."""

    def __init__(self, scn: Scenario):
        self.scn = scn

    def err(self, section, key, message):
        line = self.scn.line_of(section, key) or self.scn.line_of(section)
        return ParseError(message, line, f"{section}.{key}")

    def raw(self, section, key, default=None, required=False):
        v = self.scn.get(section, key)
        if v is None:
            if required:
                raise self.err(section, key, "missing")
            return default
        return v

    def number(self, section, key, default=None, required=False):
        v = self.raw(section, key, None, required)
        if v is None:
            return default
        try:
            return parse_number(v)
        except (ValueError, ZeroDivisionError):
            raise self.err(section, key, f"not a number: {v!r}") from None

    def integer(self, section, key, default=None, required=False):
        v = self.raw(section, key, None, required)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError:
            raise self.err(section, key, f"not an integer: {v!r}") from None

    def numbers(self, section, key, default=None, required=False):
        v = self.raw(section, key, None, required)
        if v is None:
            return default
        try:
            return [parse_number(t) for t in v.split()]
        except (ValueError, ZeroDivisionError):
            raise self.err(section, key, f"not a list of numbers: {v!r}") from None

    def matrix(self, section, key, required=False):
        v = self.raw(section, key, None, required)
        if v is None:
            return None
        try:
            rows = [[parse_number(t) for t in row.split()] for row in v.split("\n")]
        except (ValueError, ZeroDivisionError):
            raise self.err(section, key, "matrix rows must hold numbers") from None
        if len({len(r) for r in rows}) != 1:
            raise self.err(section, key, "matrix rows differ in length")
        return np.array(rows)


def build(scn: Scenario, seed: int | None = None) -> Built:
    """Instantiate every block of ``scn``; ``seed`` overrides ``run.seed``."""
    r = _Reader(scn)
    run = Built(space=None)
    run.seed = seed if seed is not None else r.integer("run", "seed", 0)
    if run.seed < 0:
        raise r.err("run", "seed", "seed must be nonnegative")
    run.tol = r.number("run", "tol", DEFAULT_TOL)
    run.max_iter = r.integer("run", "max_iter", DEFAULT_MAX_ITER)
    run.step = r.number("run", "grid_step", DEFAULT_STEP)
    run.random_pairs = r.integer("run", "random_pairs", DEFAULT_RANDOM_PAIRS)
    box = r.numbers("run", "box")
    if box is not None:
        if len(box) != 2 or not box[0] < box[1]:
            raise r.err("run", "box", "box needs two increasing numbers")
        run.box = tuple(box)
    run.trials = r.integer("run", "trials", 1000)
    run.size_max = r.integer("run", "size_max", 6)
    if scn.mode == "falsify":
        return run

    run.space = _space(r)
    finite = run.space.is_finite
    size = run.space.size if finite else None
    try:
        f = parse_map(r.raw("pair", "f", required=True), size)
    except ValueError as exc:
        raise r.err("pair", "f", str(exc)) from None
    try:
        g = parse_map(r.raw("pair", "g", required=True), size)
    except ValueError as exc:
        raise r.err("pair", "g", str(exc)) from None
    ginv = None
    if scn.get("pair", "g_preimage") is not None:
        if finite:
            raise r.err("pair", "g_preimage", "finite spaces use the least-index preimage")
        try:
            ginv = parse_map(scn.get("pair", "g_preimage"))
        except ValueError as exc:
            raise r.err("pair", "g_preimage", str(exc)) from None
    run.pair = MappingPair(run.space, f, g, ginv)

    if scn.has("order"):
        run.order = _order(r, finite, size)
    if scn.has("partition"):
        run.partition = _partition(r, finite, size)
    run.psi = _psi(r)
    run.alpha = _alpha(r, run, size)
    if scn.has("corollary"):
        run.corollary = _corollary(r, run)

    if scn.get("run", "x0") is not None:
        if finite:
            x0 = scn.get("run", "x0")
            run.x0 = run.space.index(x0) if x0 in run.space.labels else r.integer("run", "x0")
            if not run.space.contains(run.x0):
                raise r.err("run", "x0", "x0 is not a point of the space")
        else:
            run.x0 = r.number("run", "x0")
            if not run.space.contains(run.x0):
                raise r.err("run", "x0", "x0 lies outside the space")
    return run


def _space(r: _Reader):
    kind = r.raw("space", "kind", required=True)
    if kind == "interval":
        lo = r.number("space", "lo", -np.inf)
        hi = r.number("space", "hi", np.inf)
        if not lo < hi:
            raise r.err("space", "hi", "interval needs lo < hi")
        return IntervalSpace(lo, hi)
    if kind != "finite":
        raise r.err("space", "kind", "kind must be finite or interval")
    labels = r.raw("space", "labels")
    labels = labels.split() if labels is not None else None
    pos = r.numbers("space", "points")
    mat = r.matrix("space", "matrix")
    if (pos is None) == (mat is None):
        raise r.err("space", "kind", "finite spaces need exactly one of points or matrix")
    try:
        return line_space(pos, labels) if pos is not None else FiniteSpace(mat, labels)
    except ValueError as exc:
        raise r.err("space", "points" if pos is not None else "matrix", str(exc)) from None


def _order(r: _Reader, finite, size):
    kind = r.raw("order", "kind", required=True)
    if kind == "standard-leq":
        if finite:
            raise r.err("order", "kind", "standard-leq applies to interval spaces")
        return PartialOrder.standard()
    if not finite:
        raise r.err("order", "kind", "interval spaces take the standard-leq order")
    if kind == "matrix":
        m = r.matrix("order", "matrix", required=True)
        if m.shape != (size, size):
            raise r.err("order", "matrix", f"order matrix must be {size}x{size}")
        return PartialOrder.from_matrix(m != 0)
    if kind == "covers":
        raw = r.raw("order", "covers", required=True)
        try:
            covers = [tuple(int(t) for t in c.split("<")) for c in raw.split()]
        except ValueError:
            raise r.err("order", "covers", "covers are written a<b") from None
        if any(len(c) != 2 or not all(0 <= t < size for t in c) for c in covers):
            raise r.err("order", "covers", "covers are written a<b with point indices")
        return PartialOrder.from_covers(size, covers)
    raise r.err("order", "kind", "kind must be standard-leq, matrix or covers")


def _partition(r: _Reader, finite, size):
    a1, a2 = r.numbers("partition", "a1", required=True), r.numbers("partition", "a2", required=True)
    if finite:
        if any(not float(t).is_integer() or not 0 <= t < size for t in a1 + a2):
            raise r.err("partition", "a1", "finite parts list point indices")
        return CyclicPartition.finite((int(t) for t in a1), (int(t) for t in a2))
    if len(a1) != 2 or len(a2) != 2:
        raise r.err("partition", "a1", "interval parts are written lo hi")
    return CyclicPartition.interval(a1, a2)


def _psi(r: _Reader):
    kind = r.raw("psi", "kind", required=True)
    try:
        if kind == "linear":
            return ComparisonFunction.linear(r.number("psi", "lambda", required=True))
        if kind == "table":
            return ComparisonFunction.table(r.numbers("psi", "t", required=True), r.numbers("psi", "v", required=True))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise r.err("psi", "lambda" if kind == "linear" else "t", str(exc)) from None
    raise r.err("psi", "kind", "kind must be linear or table")


def _alpha(r: _Reader, run: Built, size):
    kind = r.raw("alpha", "kind", required=True)
    try:
        if kind == "constant":
            return ConstantAlpha(r.number("alpha", "value", 1.0))
        if kind == "matrix":
            m = r.matrix("alpha", "matrix", required=True)
            if size is None or m.shape != (size, size):
                raise r.err("alpha", "matrix", "alpha matrix needs a finite space of matching size")
            return MatrixAlpha(m)
        if kind == "box":
            return BoxAlpha(
                r.number("alpha", "lo", required=True), r.number("alpha", "hi", required=True),
                r.number("alpha", "inside", 1.0), r.number("alpha", "outside", 0.0),
            )
        if kind == "threshold":
            strict = r.raw("alpha", "strict", "yes")
            if strict not in ("yes", "no"):
                raise r.err("alpha", "strict", "strict is yes or no")
            return ThresholdAlpha(
                r.number("alpha", "above", required=True), r.number("alpha", "otherwise", required=True),
                strict == "yes",
            )
        if kind == "from_order":
            if run.order is None:
                raise r.err("alpha", "kind", "from_order needs an [order] block")
            return alpha_from_order(run.order)
        if kind == "from_cyclic":
            if run.partition is None:
                raise r.err("alpha", "kind", "from_cyclic needs a [partition] block")
            return alpha_from_cyclic(run.partition, run.pair.g)
    except ParseError:
        raise
    except ValueError as exc:
        raise r.err("alpha", "kind", str(exc)) from None
    raise r.err("alpha", "kind", "kind must be constant, matrix, box, threshold, from_order or from_cyclic")


def _corollary(r: _Reader, run: Built):
    kind = r.raw("corollary", "kind", required=True)
    try:
        if kind == "HardyRogers":
            return CorollaryConfig(kind, tuple(r.numbers("corollary", "coefficients", required=True)))
        if kind in ("Banach", "Kannan", "Chatterjea", "Ciric"):
            return CorollaryConfig(kind, (r.number("corollary", "lambda", required=True),))
        return CorollaryConfig(kind, psi=run.psi, order=run.order, partition=run.partition)
    except ParseError:
        raise
    except ValueError as exc:
        raise r.err("corollary", "kind", str(exc)) from None

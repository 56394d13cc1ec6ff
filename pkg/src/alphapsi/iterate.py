"""Jungck-type iteration ``g x_{n+1} = f x_n`` with a Cauchy certificate."""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._checks import CheckResult, NonSummable, PreimageFailure
from .comparison import ComparisonFunction, psi_iterate, tail_bound
from .maps import fmt_number
from .pair import AlphaFunction, MappingPair, check_initial_point

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000
CERT_TOL = 1e-9
# g x_{n+1} = f x_n must hold this closely on interval spaces
LINK_TOL = 1e-12


class InitialPointRejected(ValueError):
    """``alpha(g x0, f x0) < 1``: the starting point is not admissible."""


class Outcome(enum.Enum):
    COINCIDENCE_FOUND = "CoincidenceFound"
    MAX_ITERATIONS = "MaxIterations"
    PREIMAGE_FAILURE = "PreimageFailure"


@dataclass
class IterationTrace:
    points: list = field(default_factory=list)
    g_values: list = field(default_factory=list)
    f_values: list = field(default_factory=list)
    step_distances: list[float] = field(default_factory=list)
    alpha_chain: list[float] = field(default_factory=list)
    certificate: list[float] = field(default_factory=list)
    outcome: Outcome = Outcome.MAX_ITERATIONS
    coincidence: object = None
    residual: float = math.nan
    message: str = ""
    finite: bool = False

    @property
    def iterations(self) -> int:
        return len(self.points) - 1

    def rows(self):
        """One tuple per iterate: n, x, gx, fx, step, alpha, certificate."""
        for n, (x, gx, fx) in enumerate(zip(self.points, self.g_values, self.f_values)):
            step = self.step_distances[n] if n < len(self.step_distances) else None
            a = self.alpha_chain[n] if n < len(self.alpha_chain) else None
            cert = self.certificate[n] if n < len(self.certificate) else None
            yield n, x, gx, fx, step, a, cert

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "x", "gx", "fx", "step_distance", "alpha", "certificate"])
        for row in self.rows():
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return fmt_number(float(v)) if math.isinf(v) else repr(float(v))


def _point_error(points) -> float:
    """A-posteriori distance of the last iterate to the limit, from the observed step ratio."""
    if len(points) < 2:
        return math.inf
    s1 = abs(points[-1] - points[-2])
    if s1 == 0.0:
        return 0.0
    if len(points) < 3:
        return math.inf
    s0 = abs(points[-2] - points[-3])
    if s0 == 0.0:
        return math.inf
    q = s1 / s0
    return s1 * q / (1.0 - q) if q < 1.0 else math.inf


def jungck_iterate(
    p: MappingPair,
    alpha: AlphaFunction,
    psi: ComparisonFunction,
    x0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    point_tol: float | None = None,
) -> IterationTrace:
    """Run ``x_{n+1} = g_preimage(f x_n)`` from ``x0`` until a coincidence point.

    Stops with ``CoincidenceFound(x_{n+1})`` when ``f x_{n+1} = f x_n``
    exactly, or on a finite space when ``f x_{n+1} = g x_{n+1}``. On an
    interval it stops when ``d(f x_{n+1}, g x_{n+1}) <= tol`` and the
    a-posteriori estimate of ``|x_{n+1} - lim x_n|`` (from the ratio of the
    last two steps) is at most ``point_tol`` (default ``tol``; pass ``inf``
    to stop on the residual alone). At least one step is always taken.

    Raises
    ------
    InitialPointRejected
        If ``alpha(g x0, f x0) < 1``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    if not check_initial_point(p, alpha, x0):
        raise InitialPointRejected(f"alpha(g x0, f x0) = {alpha(p.g(x0), p.f(x0))} < 1 at x0 = {x0!r}")
    if point_tol is None:
        point_tol = tol
    finite = p.space.is_finite
    d = p.space.d
    tr = IterationTrace(finite=finite)
    tr.points.append(x0)
    tr.g_values.append(p.g(x0))
    tr.f_values.append(p.f(x0))

    for _ in range(max_iter):
        try:
            x = p.preimage(tr.f_values[-1])
        except PreimageFailure as exc:
            tr.outcome = Outcome.PREIMAGE_FAILURE
            tr.message = str(exc)
            break
        gx, fx = p.g(x), p.f(x)
        tr.points.append(x)
        tr.g_values.append(gx)
        tr.f_values.append(fx)
        tr.step_distances.append(float(d(tr.f_values[-2], fx)))
        tr.alpha_chain.append(float(alpha(tr.g_values[-2], gx)))
        resid = float(d(fx, gx))
        if tr.step_distances[-1] == 0.0:
            done = True
        elif finite:
            done = fx == gx
        else:
            done = resid <= tol and _point_error(tr.points) <= point_tol
        if done:
            tr.outcome = Outcome.COINCIDENCE_FOUND
            tr.coincidence = x
            tr.residual = resid
            break
    else:
        tr.outcome = Outcome.MAX_ITERATIONS
        tr.residual = float(d(tr.f_values[-1], tr.g_values[-1]))

    if tr.step_distances:
        tr.certificate = _certificate(psi, len(tr.points), tr.step_distances[0])
    return tr


def _certificate(psi, count, d0):
    if psi.kind == "linear":
        return [tail_bound(psi, n, d0) for n in range(count)]
    out = []
    for n in range(count):
        try:
            out.append(tail_bound(psi, n, d0))
        except NonSummable:
            out.extend([math.inf] * (count - n))
            break
    return out


def verify_cauchy_certificate(trace: IterationTrace, psi: ComparisonFunction, atol: float = CERT_TOL, space=None) -> CheckResult:
    """``d(f x_n, f x_m) <= sum_{p >= n} psi^p(d(f x_0, f x_1)) + atol`` for all ``n < m``.

    ``space`` supplies the metric for finite traces; interval traces use
    ``|a - b|``.
    """
    name = "cauchy_certificate"
    fv = trace.f_values
    if len(fv) < 2:
        return CheckResult(name, True, "fewer than two iterates")
    d0 = trace.step_distances[0]
    if trace.finite:
        if space is None:
            raise ValueError("finite traces need the space for distances")
        idx = np.asarray(fv)
        dist = space.dist[np.ix_(idx, idx)]

        def row(n):
            return dist[n, n + 1 :]
    else:
        arr = np.asarray(fv, dtype=float)

        def row(n):
            return np.abs(arr[n + 1 :] - arr[n])

    worst, witness, count = -math.inf, None, 0
    for n in range(len(fv) - 1):
        try:
            bound = tail_bound(psi, n, d0)
        except NonSummable:
            return CheckResult(name, False, "psi tail does not converge", witness=n)
        r = row(n)
        count += r.size
        j = int(np.argmax(r))
        excess = float(r[j]) - bound
        if excess > worst:
            worst, witness = excess, (n, n + 1 + j)
    if worst > atol:
        return CheckResult(name, False, f"excess {worst:.3g}", witness=witness, magnitude=worst, checked=count)
    return CheckResult(name, True, checked=count, magnitude=worst)


def check_trace_invariants(trace: IterationTrace, psi: ComparisonFunction, atol: float = CERT_TOL) -> CheckResult:
    """Sequence link ``g x_{n+1} = f x_n``, alpha chain ``>= 1``, ``d_n <= psi^n(d_0)``, ``d_{n+1} <= psi(d_n)``."""
    details = {}
    gv, fv = trace.g_values, trace.f_values
    links = [abs(gv[n + 1] - fv[n]) if not trace.finite else float(gv[n + 1] != fv[n]) for n in range(len(fv) - 1)]
    bad = [n for n, e in enumerate(links) if e > (0.0 if trace.finite else LINK_TOL * max(1.0, abs(fv[n])))]
    details["sequence_link"] = CheckResult("sequence_link", not bad, witness=bad[0] if bad else None)
    bad = [n for n, a in enumerate(trace.alpha_chain) if not a >= 1.0]
    details["alpha_chain"] = CheckResult("alpha_chain", not bad, witness=bad[0] if bad else None)
    steps = trace.step_distances
    bad = [n for n, s in enumerate(steps) if s > psi_iterate(psi, n, steps[0]) + atol] if steps else []
    details["geometric_steps"] = CheckResult("geometric_steps", not bad, witness=bad[0] if bad else None)
    bad = [n for n in range(len(steps) - 1) if steps[n] > 0 and steps[n + 1] > psi.eval(steps[n]) + atol]
    details["monotone_steps"] = CheckResult("monotone_steps", not bad, witness=bad[0] if bad else None)
    failed = [k for k, v in details.items() if not v]
    return CheckResult("trace_invariants", not failed, ", ".join(failed), details=details)


def condition_iii_on_trace(p: MappingPair, alpha: AlphaFunction, trace: IterationTrace, tail: float = 0.5) -> CheckResult:
    """Evidence for hypothesis (iii) on a realized run: ``alpha(g x_n, g z) >= 1`` along the trace tail.

    A single trace cannot decide the hypothesis; it can only exhibit the
    required subsequence for this particular sequence.
    """
    name = "condition_iii_trace"
    if trace.coincidence is None:
        return CheckResult(name, False, "run did not reach a coincidence point")
    gz = p.g(trace.coincidence)
    start = int(len(trace.g_values) * (1 - tail))
    vals = np.asarray(alpha(np.asarray(trace.g_values[start:]), gz))
    ok = vals >= 1.0
    if ok.all():
        return CheckResult(name, True, checked=ok.size)
    return CheckResult(name, False, "alpha(g x_n, g z) < 1 on the tail", witness=start + int(np.argmin(ok)))

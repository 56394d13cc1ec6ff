"""Exhaustive ground truth on finite spaces and a randomized falsification harness.

On a finite space every hypothesis of the coincidence and common fixed
point theorems is a finite statement, so :func:`run_theorem_suite` decides
all of them and then checks the conclusions against a table scan. A
hypothesis-passing configuration whose conclusion fails would be a
counterexample to the theorems and gets the verdict ``CONTRADICTION``.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._checks import CheckResult, NotFinite
from .comparison import ComparisonFunction, check_psi_membership
from .iterate import IterationTrace, Outcome, jungck_iterate, verify_cauchy_certificate
from .maps import TableMap
from .pair import (
    AlphaFunction,
    MappingPair,
    MatrixAlpha,
    _M,
    all_pairs,
    check_alpha_admissible_wrt_g,
    check_contractive,
    check_range_inclusion,
    initial_points,
)
from .spaces import random_finite_space, validate_space

log = logging.getLogger(__name__)

MAX_EXHAUSTIVE_SIZE = 8
ALPHA_LEVELS = (0.0, 0.5, 1.0, 2.0)

EXISTENCE_HYPOTHESES = (
    "space", "psi_membership", "contractive", "admissible_wrt_g",
    "range_inclusion", "initial_point", "condition_iii", "g_range_closed",
)
UNIQUENESS_HYPOTHESES = ("uniqueness", "commuting")


class Verdict(enum.Enum):
    THEOREM_CONFIRMED = "TheoremConfirmed"
    HYPOTHESES_FAILED = "HypothesesFailed"
    CONTRADICTION = "CONTRADICTION"


@dataclass
class CoincidenceReport:
    coincidence_points: list[int] = field(default_factory=list)
    points_of_coincidence: list[int] = field(default_factory=list)
    common_fixed_points: list[int] = field(default_factory=list)
    hypothesis_results: dict[str, CheckResult] = field(default_factory=dict)
    verdict: Verdict | None = None
    failed: list[str] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)
    trace: IterationTrace | None = None
    config: dict = field(default_factory=dict)

    @property
    def existence_hypotheses_hold(self) -> bool:
        return all(self.hypothesis_results[k] for k in EXISTENCE_HYPOTHESES)

    @property
    def uniqueness_hypotheses_hold(self) -> bool:
        return self.existence_hypotheses_hold and all(self.hypothesis_results[k] for k in UNIQUENESS_HYPOTHESES)

    def summary(self) -> str:
        lines = [
            f"verdict: {self.verdict.value if self.verdict else 'n/a'}",
            f"coincidence_points: {self.coincidence_points}",
            f"points_of_coincidence: {self.points_of_coincidence}",
            f"common_fixed_points: {self.common_fixed_points}",
        ]
        if self.failed:
            lines.append(f"failed: {', '.join(self.failed)}")
        lines.extend(f"problem: {p}" for p in self.problems)
        lines.extend(r.line() for r in self.hypothesis_results.values())
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed", "reason", "witness"])
        for name, r in self.hypothesis_results.items():
            w.writerow([name, int(r.passed), r.reason, "" if r.witness is None else r.witness])
        return buf.getvalue()


def _need_finite(p):
    if not p.space.is_finite:
        raise NotFinite("exhaustive checks need a finite space")


def enumerate_coincidence(p: MappingPair) -> CoincidenceReport:
    """Coincidence points, points of coincidence and common fixed points by table scan."""
    _need_finite(p)
    f, g = p.f.values, p.g.values
    c = [z for z in p.space.points if f[z] == g[z]]
    return CoincidenceReport(
        coincidence_points=c,
        points_of_coincidence=sorted({g[z] for z in c}),
        common_fixed_points=[z for z in c if g[z] == z],
    )


def check_uniqueness_hypothesis(p: MappingPair, alpha: AlphaFunction) -> CheckResult:
    """For all ``u, v`` in ``C(g, f)`` some ``w`` has ``alpha(gu, gw) >= 1`` and ``alpha(gv, gw) >= 1``.

    ``w`` may coincide with ``u`` or ``v``.
    """
    _need_finite(p)
    name = "uniqueness"
    c = enumerate_coincidence(p).coincidence_points
    if not c:
        return CheckResult(name, True, "C(g, f) is empty")
    gw = p.g(np.arange(p.space.size))
    reach = {u: np.asarray(alpha(np.full_like(gw, p.g(u)), gw)) >= 1.0 for u in c}
    for i, u in enumerate(c):
        for v in c[i:]:
            if not np.any(reach[u] & reach[v]):
                return CheckResult(name, False, "no common alpha-successor", witness=(u, v))
    return CheckResult(name, True, checked=len(c) * (len(c) + 1) // 2)


def check_commuting_at_coincidence(p: MappingPair) -> CheckResult:
    """``f(g z) = g(f z)`` at every coincidence point ``z``."""
    _need_finite(p)
    name = "commuting"
    c = enumerate_coincidence(p).coincidence_points
    for z in c:
        if p.f(p.g(z)) != p.g(p.f(z)):
            return CheckResult(name, False, f"fg({z}) = {p.f(p.g(z))} != gf({z}) = {p.g(p.f(z))}", witness=z)
    return CheckResult(name, True, checked=len(c))


def _eventual_limits(p, related) -> list[int]:
    """Values of g(X) at which a chain with ``related(a, b)`` steps can be eventually constant."""
    r = sorted(set(p.g.values))
    return [c for c in r if related(c, c)]


def check_condition_iii(p: MappingPair, alpha: AlphaFunction) -> CheckResult:
    """Limit hypothesis of the coincidence theorem, decided on a finite space.

    A sequence in a finite metric space converges only by becoming
    eventually constant. A chain ``g x_n`` with ``alpha(g x_n, g x_{n+1}) >= 1``
    converging to ``gz`` therefore ends in the self-loop ``alpha(gz, gz) >= 1``
    of the alpha-graph on ``g(X)``, and that tail is itself a subsequence with
    ``alpha(g x_n, gz) >= 1``. The check enumerates every reachable limit and
    verifies the tail condition for it.
    """
    _need_finite(p)
    name = "condition_iii"

    def edge(a, b):
        return alpha(a, b) >= 1.0

    limits = _eventual_limits(p, edge)
    for c in limits:
        # only the self-loop at c recurs in a chain converging to c
        if not edge(c, c):
            return CheckResult(name, False, "limit not alpha-related to its tail", witness=c)
    return CheckResult(name, True, f"{len(limits)} possible limit(s), each an alpha self-loop", checked=len(limits))


def _initial_point_result(p, alpha) -> CheckResult:
    xs = initial_points(p, alpha)
    if xs:
        return CheckResult("initial_point", True, f"x0 = {xs[0]}", witness=xs[0], checked=p.space.size)
    return CheckResult("initial_point", False, "no x0 with alpha(g x0, f x0) >= 1", checked=p.space.size)


def _psi_samples(space) -> list[float]:
    d = space.dist
    vals = np.unique(d[d > 0])
    return vals.tolist() if vals.size else [1.0]


def _iterations_needed(space, psi: ComparisonFunction, d0: float) -> int:
    # steps shrink like lam**n * d0 and vanish once below the smallest positive distance
    d = space.dist[space.dist > 0]
    if psi.kind != "linear" or d.size == 0 or d0 == 0:
        return 10_000
    return int(math.ceil(math.log(d.min() / d0) / math.log(psi.lam))) + 3 if d0 > d.min() else 3


def run_theorem_suite(p: MappingPair, alpha: AlphaFunction, psi: ComparisonFunction, iterate: bool = True) -> CoincidenceReport:
    """Decide every hypothesis, check the conclusions, and assign a verdict.

    When the coincidence-theorem hypotheses hold, ``C(g, f)`` must be
    non-empty and the Jungck iteration from the first valid start must end
    at one of its points with a valid Cauchy certificate. When the
    uniqueness hypotheses hold too, there must be exactly one common fixed
    point and all coincidence points must share one g-value.
    """
    _need_finite(p)
    rep = enumerate_coincidence(p)
    h = rep.hypothesis_results
    h["space"] = validate_space(p.space)
    h["psi_membership"] = check_psi_membership(psi, _psi_samples(p.space))
    h["contractive"] = check_contractive(p, alpha, psi)
    h["admissible_wrt_g"] = check_alpha_admissible_wrt_g(p, alpha)
    h["range_inclusion"] = check_range_inclusion(p)
    h["initial_point"] = _initial_point_result(p, alpha)
    h["condition_iii"] = check_condition_iii(p, alpha)
    h["g_range_closed"] = CheckResult("g_range_closed", True, "finite")
    h["uniqueness"] = check_uniqueness_hypothesis(p, alpha)
    h["commuting"] = check_commuting_at_coincidence(p)

    rep.failed = [k for k, r in h.items() if not r]
    if rep.existence_hypotheses_hold:
        if not rep.coincidence_points:
            rep.problems.append("coincidence theorem hypotheses hold but C(g, f) is empty")
        if iterate:
            x0 = h["initial_point"].witness
            d0 = float(p.d(p.f(x0), p.f(p.preimage(p.f(x0)))))
            tr = jungck_iterate(p, alpha, psi, x0, max_iter=_iterations_needed(p.space, psi, d0))
            rep.trace = tr
            if tr.outcome is not Outcome.COINCIDENCE_FOUND:
                rep.problems.append(f"iteration from {x0} ended with {tr.outcome.value}")
            elif tr.coincidence not in rep.coincidence_points:
                rep.problems.append(f"iteration returned {tr.coincidence}, not a coincidence point")
            cert = verify_cauchy_certificate(tr, psi, space=p.space)
            if not cert:
                rep.problems.append(f"Cauchy certificate violated at {cert.witness}")
    if rep.uniqueness_hypotheses_hold:
        if len(rep.common_fixed_points) != 1:
            rep.problems.append(f"expected one common fixed point, found {rep.common_fixed_points}")
        if len(rep.points_of_coincidence) > 1:
            rep.problems.append(f"coincidence points with distinct g-values {rep.points_of_coincidence}")

    if rep.problems:
        rep.verdict = Verdict.CONTRADICTION
        log.error("CONTRADICTION: %s", "; ".join(rep.problems))
    elif rep.failed:
        rep.verdict = Verdict.HYPOTHESES_FAILED
    else:
        rep.verdict = Verdict.THEOREM_CONFIRMED
    return rep


def random_config(rng: np.random.Generator, size_max: int):
    """A random finite pair, quantized alpha matrix and linear psi.

    The generator mixes structured choices (identity or permutation ``g``,
    constant ``f``, ``f`` valued in ``g(X)``, sparse alpha) with fully random
    ones so that a useful share of configurations satisfies the hypotheses.
    """
    n = int(rng.integers(1, size_max + 1))
    space = random_finite_space(n, rng)
    u = rng.random()
    if u < 0.3:
        g = np.arange(n)
    elif u < 0.5:
        g = rng.permutation(n)
    else:
        g = rng.integers(0, n, n)
    u = rng.random()
    if u < 0.25:
        f = np.full(n, rng.integers(0, n))
    elif u < 0.75:
        f = rng.choice(np.unique(g), n)
    else:
        f = rng.integers(0, n, n)
    weights = rng.dirichlet(np.ones(len(ALPHA_LEVELS)))
    amat = rng.choice(ALPHA_LEVELS, size=(n, n), p=weights)
    pair = MappingPair(space, TableMap(f), TableMap(g))
    alpha = MatrixAlpha(amat)
    lam = float(rng.uniform(0.01, 0.99))
    if rng.random() < 0.5:
        # half the trials take lam just above the pair's own contraction ratio
        ratio = _contraction_ratio(pair, alpha)
        if ratio < 1.0:
            lam = float(np.clip(ratio * (1.0 + rng.uniform(0.0, 0.1)), 0.01, 0.99))
    return pair, alpha, ComparisonFunction.linear(lam)


def _contraction_ratio(p: MappingPair, alpha: AlphaFunction) -> float:
    """Smallest ``lam`` with ``alpha(gx, gy) d(fx, fy) <= lam M(gx, gy)`` on every pair."""
    xs, ys = all_pairs(p.space)
    lhs = alpha(p.g(xs), p.g(ys)) * p.d(p.f(xs), p.f(ys))
    m = _M(p, xs, ys)
    if np.any((lhs > 0) & (m == 0)):
        return math.inf
    pos = lhs > 0
    return float(np.max(lhs[pos] / m[pos])) if pos.any() else 0.0


def falsification_search(seed: int, trials: int, space_size_max: int = 6) -> list[CoincidenceReport]:
    """Run the theorem suite on ``trials`` random finite configurations."""
    if not 1 <= space_size_max <= MAX_EXHAUSTIVE_SIZE:
        raise ValueError(f"space_size_max must be in 1..{MAX_EXHAUSTIVE_SIZE}")
    rng = np.random.default_rng(seed)
    reports = []
    for t in range(trials):
        pair, alpha, psi = random_config(rng, space_size_max)
        rep = run_theorem_suite(pair, alpha, psi)
        rep.config = {
            "trial": t,
            "size": pair.space.size,
            "lambda": psi.lam,
            "f": pair.f.values,
            "g": pair.g.values,
        }
        if rep.verdict is Verdict.CONTRADICTION:
            log.error("falsification trial %d produced a CONTRADICTION: %s", t, rep.config)
        reports.append(rep)
    return reports


def falsification_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "size", "lambda", "f", "g", "verdict", "failed", "n_coincidence", "n_common_fixed"])
    for r in reports:
        c = r.config
        w.writerow([
            c.get("trial", ""), c.get("size", ""), repr(c.get("lambda", "")),
            " ".join(map(str, c.get("f", ()))), " ".join(map(str, c.get("g", ()))),
            r.verdict.value, " ".join(r.failed), len(r.coincidence_points), len(r.common_fixed_points),
        ])
    return buf.getvalue()

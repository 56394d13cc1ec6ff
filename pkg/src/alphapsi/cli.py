"""``alphapsi run <scenario>``: hypothesis checks, iteration and oracle runs from a scenario file.

Exit codes: 0 all checks passed or a coincidence point was found; 1 a check
failed or the iteration stopped without one; 2 bad input; 3 a falsification
verdict (hypotheses hold but a conclusion fails).
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from ._checks import CheckResult, NotFinite
from .adapters import check_cyclic_conditions, check_g_nondecreasing, check_g_regular, reduce_corollary
from .comparison import check_psi_membership
from .iterate import (
    InitialPointRejected,
    Outcome,
    check_trace_invariants,
    jungck_iterate,
    verify_cauchy_certificate,
)
from .maps import fmt_number
from .oracle import Verdict, falsification_csv, falsification_search, run_theorem_suite
from .pair import (
    check_alpha_admissible_wrt_g,
    check_contractive,
    check_g_range_closed,
    check_initial_point,
    check_range_inclusion,
    check_self_map,
    initial_points,
    is_coincidence,
    sample_pairs,
)
from .scenario import Built, ParseError, Scenario, build, load_scenario
from .spaces import validate_space

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CONTRADICTION = 0, 1, 2, 3
# psi is probed at this many points across the sampling window
PSI_PROBES = 200

log = logging.getLogger(__name__)


class Report:
    """``key: value`` header lines followed by CSV rows."""

    def __init__(self):
        self.header: list[tuple[str, str]] = []
        self.rows: list[list] = []

    def put(self, key, value):
        self.header.append((key, _text(value)))

    def text(self) -> str:
        buf = io.StringIO()
        for k, v in self.header:
            buf.write(f"{k}: {v}\n")
        buf.write("\n")
        w = csv.writer(buf, lineterminator="\n")
        for row in self.rows:
            w.writerow([_text(v) for v in row])
        return buf.getvalue()


def _text(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_number(float(v)) if not np.isfinite(v) else repr(float(v))
    return str(v)


def _check_rows(report: Report, results: list[CheckResult]):
    report.rows.append(["check", "passed", "reason", "witness", "magnitude", "checked"])
    for r in results:
        report.rows.append([r.name, r.passed, r.reason, r.witness, r.magnitude, r.checked])
        for sub in r.details.values():
            report.rows.append([f"{r.name}.{sub.name}", sub.passed, sub.reason, sub.witness, sub.magnitude, sub.checked])


def _pairs(b: Built):
    return sample_pairs(b.pair.space, b.box, b.step, b.random_pairs, b.seed)


def _psi_probes(b: Built):
    sp = b.pair.space
    if sp.is_finite:
        d = sp.dist[sp.dist > 0]
        return np.unique(d) if d.size else [1.0]
    lo, hi = b.box if b.box is not None else sp.sampling_box()
    return np.linspace(0, 2 * (hi - lo), PSI_PROBES + 1)[1:]


def run_check(b: Built, report: Report) -> int:
    p = b.pair
    pairs = _pairs(b)
    box = b.box
    results = [
        validate_space(p.space),
        check_self_map(p, seed=b.seed, box=box),
        check_psi_membership(b.psi, _psi_probes(b)),
        check_contractive(p, b.alpha, b.psi, pairs),
        check_alpha_admissible_wrt_g(p, b.alpha, pairs),
        check_range_inclusion(p, seed=b.seed, box=box),
        check_g_range_closed(p),
    ]
    if b.x0 is not None:
        ok = check_initial_point(p, b.alpha, b.x0)
        results.append(CheckResult("initial_point", ok, f"x0 = {_text(b.x0)}", witness=None if ok else b.x0))
    elif p.space.is_finite:
        xs = initial_points(p, b.alpha)
        results.append(CheckResult("initial_point", bool(xs), f"x0 = {xs[0]}" if xs else "no valid x0"))
    if b.order is not None:
        results.append(check_g_nondecreasing(p, b.order, pairs))
        try:
            results.append(check_g_regular(p, b.order))
        except NotFinite:
            report.put("g_regular", "assumed (interval space)")
    if b.partition is not None:
        results.append(check_cyclic_conditions(p, b.partition, b.psi, n_samples=b.random_pairs, seed=b.seed))
    if b.corollary is not None:
        red = reduce_corollary(b.corollary, p.g)
        direct = red.check_direct(p, pairs)
        gen = red.check_generalized(p, pairs)
        report.put("corollary", b.corollary.kind)
        report.put("lambda_eff", b.corollary.lambda_eff)
        results.append(direct)
        results.append(CheckResult("generalized_form", gen.passed, gen.reason, gen.witness, gen.magnitude, gen.checked))
        # the reduction is sound only if direct passing never coexists with generalized failing
        results.append(CheckResult("dominance", not (direct.passed and not gen.passed)))
    failed = [r.name for r in results if not r]
    report.put("checks", len(results))
    report.put("failed", " ".join(failed) if failed else "none")
    _check_rows(report, results)
    return EXIT_FAILED if failed else EXIT_OK


def run_iterate(b: Built, report: Report) -> int:
    p = b.pair
    try:
        tr = jungck_iterate(p, b.alpha, b.psi, b.x0, tol=b.tol, max_iter=b.max_iter)
    except InitialPointRejected as exc:
        report.put("outcome", "InitialPointRejected")
        report.put("message", exc)
        return EXIT_FAILED
    cert = verify_cauchy_certificate(tr, b.psi, space=p.space if p.space.is_finite else None)
    inv = check_trace_invariants(tr, b.psi)
    report.put("outcome", tr.outcome.value)
    report.put("iterations", tr.iterations)
    if tr.outcome is Outcome.COINCIDENCE_FOUND:
        z = tr.coincidence
        fz, gz = p.f(z), p.g(z)
        report.put("coincidence", z)
        report.put("f(z)", fz)
        report.put("g(z)", gz)
        report.put("residual", tr.residual)
        report.put("coincidence_within_tol", is_coincidence(p, z, b.tol))
        if p.space.is_finite:
            report.put("common_fixed_point", fz == gz == z)
        else:
            report.put("common_fixed_point", max(abs(fz - z), abs(gz - z)) <= b.tol)
    elif tr.message:
        report.put("message", tr.message)
    report.put("cauchy_certificate", "pass" if cert else f"FAIL {cert.reason}")
    report.put("trace_invariants", "pass" if inv else f"FAIL {inv.reason}")
    report.rows.extend(csv.reader(io.StringIO(tr.to_csv())))
    if tr.outcome is not Outcome.COINCIDENCE_FOUND:
        return EXIT_FAILED
    return EXIT_OK


def run_oracle(b: Built, report: Report) -> int:
    p = b.pair
    if not p.space.is_finite:
        raise NotFinite("oracle mode needs a finite space")
    rep = run_theorem_suite(p, b.alpha, b.psi)
    report.put("verdict", rep.verdict.value)
    report.put("coincidence_points", " ".join(map(str, rep.coincidence_points)) or "none")
    report.put("points_of_coincidence", " ".join(map(str, rep.points_of_coincidence)) or "none")
    report.put("common_fixed_points", " ".join(map(str, rep.common_fixed_points)) or "none")
    report.put("failed", " ".join(rep.failed) or "none")
    for problem in rep.problems:
        report.put("problem", problem)
    if rep.trace is not None:
        report.put("iteration_outcome", rep.trace.outcome.value)
        report.put("iteration_coincidence", rep.trace.coincidence)
    _check_rows(report, list(rep.hypothesis_results.values()))
    if rep.verdict is Verdict.CONTRADICTION:
        return EXIT_CONTRADICTION
    return EXIT_OK if rep.verdict is Verdict.THEOREM_CONFIRMED else EXIT_FAILED


def run_falsify(b: Built, report: Report) -> int:
    reports = falsification_search(b.seed, b.trials, b.size_max)
    counts = Counter(r.verdict for r in reports)
    report.put("trials", len(reports))
    report.put("space_size_max", b.size_max)
    report.put("theorem_confirmed", counts[Verdict.THEOREM_CONFIRMED])
    report.put("hypotheses_failed", counts[Verdict.HYPOTHESES_FAILED])
    report.put("contradictions", counts[Verdict.CONTRADICTION])
    report.rows.extend(csv.reader(io.StringIO(falsification_csv(reports))))
    return EXIT_CONTRADICTION if counts[Verdict.CONTRADICTION] else EXIT_OK


MODES = {"check": run_check, "iterate": run_iterate, "oracle": run_oracle, "falsify": run_falsify}


def run_scenario(path, seed: int | None = None) -> tuple[int, str]:
    """Run the scenario at ``path``; returns the exit code and the report text."""
    report = Report()
    try:
        scn: Scenario = load_scenario(path)
        b = build(scn, seed)
    except ParseError as exc:
        report.put("scenario", Path(path).name)
        report.put("error", exc)
        return EXIT_INPUT, report.text()
    report.put("scenario", Path(path).name)
    report.put("mode", scn.mode)
    report.put("seed", b.seed)
    try:
        code = MODES[scn.mode](b, report)
    except (NotFinite, ValueError) as exc:
        report.put("error", exc)
        return EXIT_INPUT, report.text()
    report.put("exit_code", code)
    return code, report.text()


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alphapsi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("file", help="scenario file")
    run.add_argument("--report", metavar="PATH", help="also write the report to PATH")
    run.add_argument("--seed", type=_u64, help="override the scenario's seed")
    run.add_argument("--quiet", action="store_true", help="do not print the report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which matches the input-error code
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    code, text = run_scenario(args.file, args.seed)
    if args.report:
        try:
            Path(args.report).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if not args.quiet:
        sys.stdout.write(text)
    elif code == EXIT_INPUT:
        sys.stderr.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

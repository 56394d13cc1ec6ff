import re

import numpy as np
import pytest

from alphapsi import (
    BoxAlpha,
    ComparisonFunction,
    IntervalSpace,
    MappingPair,
    ThresholdAlpha,
    parse_map,
)

_ACCEPTANCE = {}
_NAME = re.compile(r"test_criterion_(\d+)_(\w+)")


@pytest.fixture
def piecewise_pair():
    """f = x/3 on [0, 2] and 2x - 3/2 beyond, g = x/2, alpha = 1 on [0, 1]^2."""
    space = IntervalSpace(0.0, np.inf)
    p = MappingPair(space, parse_map("piecewise 2 : scale 1/3 | affine 2 -1.5"), parse_map("scale 1/2"))
    return p, BoxAlpha(0.0, 1.0), ComparisonFunction.linear(0.8)


@pytest.fixture
def reciprocal_pair():
    """f = 1/x, g = exp(-x) on [1, inf); alpha = 2 if x > y else 1/3."""
    space = IntervalSpace(1.0, np.inf)
    p = MappingPair(space, parse_map("reciprocal"), parse_map("exp_decay"))
    return p, ThresholdAlpha(2.0, 1.0 / 3.0)


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if m is None or "test_acceptance" not in report.nodeid:
        return
    key = int(m.group(1))
    if report.when == "call" or report.failed:
        prev = _ACCEPTANCE.get(key, (m.group(2), True))
        _ACCEPTANCE[key] = (m.group(2), prev[1] and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        name, ok = _ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key} {name}: {'pass' if ok else 'FAIL'}")

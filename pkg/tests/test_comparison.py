import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphapsi import ComparisonFunction, NonSummable, check_psi_membership, psi_iterate, tail_bound


def _brute_tail(psi, n, t, stop=1e-300):
    # explicit summation of psi^p(t) for p >= n, independent of tail_bound's guard logic
    x = t
    for _ in range(n):
        x = float(psi(x))
    total = 0.0
    for _ in range(200_000):
        total += x
        if x < stop:
            break
        x = float(psi(x))
    return total


def test_linear_eval_and_iterate():
    psi = ComparisonFunction.linear(0.8)
    assert psi(2.0) == pytest.approx(1.6)
    assert psi_iterate(psi, 0, 3.0) == 3.0
    assert psi_iterate(psi, 2, 1.0) == pytest.approx(0.64)


@pytest.mark.parametrize("lam", [0.0, 1.0, -0.1, 1.5])
def test_linear_rejects_out_of_range(lam):
    with pytest.raises(ValueError):
        ComparisonFunction.linear(lam)


def test_tail_bound_exact_values():
    assert tail_bound(ComparisonFunction.linear(0.8), 0, 1.0) == 5.0
    assert tail_bound(ComparisonFunction.linear(0.5), 3, 2.0) == pytest.approx(0.5, rel=1e-15)
    assert tail_bound(ComparisonFunction.linear(0.5), 0, 0.0) == 0.0


def test_table_prepends_origin_and_interpolates():
    psi = ComparisonFunction.table([1.0, 2.0], [0.5, 1.0])
    assert psi.knots_t == (0.0, 1.0, 2.0)
    assert psi(0.5) == pytest.approx(0.25)
    assert psi(4.0) == pytest.approx(2.0)


def test_table_rejects_nonzero_at_origin_and_bad_knots():
    with pytest.raises(ValueError):
        ComparisonFunction.table([0.0, 1.0], [0.1, 0.5])
    with pytest.raises(ValueError):
        ComparisonFunction.table([1.0, 1.0], [0.1, 0.5])
    with pytest.raises(ValueError):
        ComparisonFunction.table([1.0], [-0.5])


def test_table_tail_matches_geometric_sum():
    psi = ComparisonFunction.table([1.0, 2.0, 4.0], [0.5, 1.0, 2.0])
    assert tail_bound(psi, 0, 1.0) == pytest.approx(2.0, rel=1e-9)
    assert tail_bound(psi, 2, 3.0) == pytest.approx(1.5, rel=1e-9)


def test_membership_accepts_linear():
    res = check_psi_membership(ComparisonFunction.linear(0.3), [0.1, 1.0, 10.0])
    assert res.passed


def test_membership_rejects_identity_table():
    psi = ComparisonFunction.table([1.0, 2.0], [1.0, 2.0])
    res = check_psi_membership(psi, [0.5, 1.0, 2.0])
    assert not res.passed
    assert "psi(t) < t" in res.reason


def test_harmonic_table_is_not_summable():
    # psi(t) = t / (1 + t) gives psi^n(1) = 1 / (n + 1)
    # knots at t = 1/k keep the iterates of 1 on knots, where the table is exact
    ts = np.concatenate([1.0 / np.arange(2000, 0, -1), [2.0, 5.0, 10.0]])
    psi = ComparisonFunction.table(ts, ts / (1 + ts))
    assert psi_iterate(psi, 9, 1.0) == pytest.approx(0.1, rel=1e-12)
    with pytest.raises(NonSummable):
        tail_bound(psi, 0, 1.0)
    res = check_psi_membership(psi, [0.5, 1.0, 2.0])
    assert not res.passed
    assert res.reason.startswith("NonSummable")


def test_membership_flags_non_monotone_table():
    psi = ComparisonFunction.table([1.0, 2.0, 3.0], [0.5, 0.2, 0.9])
    res = check_psi_membership(psi, [1.0, 2.0, 3.0])
    assert not res.passed and "nondecreasing" in res.reason


def test_membership_needs_positive_samples():
    with pytest.raises(ValueError):
        check_psi_membership(ComparisonFunction.linear(0.5), [0.0, 1.0])


@settings(max_examples=200, deadline=None)
@given(
    lam=st.floats(0.01, 0.95),
    n=st.integers(0, 40),
    t=st.floats(1e-6, 1e3),
)
def test_linear_tail_matches_brute_sum(lam, n, t):
    psi = ComparisonFunction.linear(lam)
    assert tail_bound(psi, n, t) == pytest.approx(_brute_tail(psi, n, t), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(lam=st.floats(0.01, 0.99), t=st.floats(1e-3, 1e3), n=st.integers(0, 60))
def test_tail_decreases_in_n(lam, t, n):
    psi = ComparisonFunction.linear(lam)
    assert tail_bound(psi, n + 1, t) <= tail_bound(psi, n, t) * (1 + 1e-12)
    assert psi_iterate(psi, n + 1, t) <= psi_iterate(psi, n, t)


@settings(max_examples=60, deadline=None)
@given(
    slope=st.floats(0.05, 0.9),
    t=st.floats(0.01, 50.0),
    n=st.integers(0, 10),
)
def test_table_tail_matches_brute_sum(slope, t, n):
    knots = np.array([0.5, 1.0, 5.0, 20.0])
    psi = ComparisonFunction.table(knots, slope * knots)
    assert tail_bound(psi, n, t) == pytest.approx(_brute_tail(psi, n, t), rel=1e-6, abs=1e-12)


def test_tail_bound_rejects_negative_arguments():
    psi = ComparisonFunction.linear(0.5)
    with pytest.raises(ValueError):
        tail_bound(psi, -1, 1.0)
    with pytest.raises(ValueError):
        tail_bound(psi, 0, -1.0)
    assert math.isfinite(tail_bound(psi, 0, 1e300))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphapsi import (
    CyclicPartition,
    FiniteSpace,
    IntervalSpace,
    PartialOrder,
    PointOutsideSpace,
    distance,
    line_space,
    random_finite_space,
    validate_space,
)


def test_line_space_is_a_metric():
    s = line_space([0, 1, 1.5, 2.5])
    assert validate_space(s).passed
    assert distance(s, 0, 3) == 2.5


def test_triangle_violation_reports_first_triple():
    s = FiniteSpace([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    res = validate_space(s)
    assert not res.passed
    assert res.reason == "triangle inequality"
    assert res.witness == (0, 1, 2)
    assert res.magnitude == pytest.approx(3.0)


@pytest.mark.parametrize(
    "dist, reason",
    [
        ([[0, 1], [2, 0]], "asymmetric"),
        ([[1, 1], [1, 0]], "nonzero diagonal"),
        ([[0, 0], [0, 0]], "distinct points at distance 0"),
        ([[0, -1], [-1, 0]], "negative or non-finite distance"),
    ],
)
def test_metric_axiom_failures(dist, reason):
    res = validate_space(FiniteSpace(dist))
    assert not res.passed and res.reason == reason


def test_distance_rejects_outside_points():
    s = line_space([0, 1])
    with pytest.raises(PointOutsideSpace):
        distance(s, 0, 2)
    with pytest.raises(PointOutsideSpace):
        distance(IntervalSpace(0, 1), 0.5, 1.5)
    assert distance(IntervalSpace(0, 1), 0.25, 1.0) == 0.75


def test_finite_space_rejects_bad_shapes():
    with pytest.raises(ValueError):
        FiniteSpace([[0, 1, 2]])
    with pytest.raises(ValueError):
        FiniteSpace([[0, 1], [1, 0]], labels=["a"])


def test_interval_sampling_box():
    assert IntervalSpace(0, math.inf).sampling_box() == (0, 10)
    assert IntervalSpace(-math.inf, 2).sampling_box(4) == (-2, 2)
    assert IntervalSpace().sampling_box() == (-5, 5)
    assert IntervalSpace(-1, 1).sampling_box() == (-1, 1)
    assert not validate_space(IntervalSpace(1, 1)).passed


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_random_finite_spaces_are_metric(n, seed):
    s = random_finite_space(n, np.random.default_rng(seed))
    assert s.size == n
    assert validate_space(s).passed


def test_diamond_order_closure():
    order = PartialOrder.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert order.validate().passed
    assert order.leq(0, 3)
    assert not order.comparable(1, 2)
    assert order.comparable(3, 0)


def test_order_validation_failures():
    assert PartialOrder.from_matrix([[1, 1], [1, 1]]).validate().reason == "not antisymmetric"
    assert PartialOrder.from_matrix([[0, 1], [0, 1]]).validate().reason == "not reflexive"
    m = np.eye(3, dtype=bool)
    m[0, 1] = m[1, 2] = True
    assert PartialOrder.from_matrix(m).validate().reason == "not transitive"


def test_standard_order_on_the_line():
    order = PartialOrder.standard()
    assert order.leq(1.0, 2.0) and not order.leq(2.0, 1.0)
    assert np.all(order.comparable(np.array([1.0, 3.0]), np.array([2.0, -1.0])))


def test_partition_membership_and_validation():
    part = CyclicPartition.interval((-1, 0), (0, 1))
    assert part.in_a1(0.0) and part.in_a2(0.0)
    assert not part.in_a1(0.5)
    assert part.validate(IntervalSpace(-1, 1)).passed
    assert not part.validate(IntervalSpace(-0.5, 1)).passed
    fin = CyclicPartition.finite({0}, {1, 2})
    assert fin.validate(line_space([0, 1, 2])).passed
    assert not CyclicPartition.finite(set(), {1}).validate().passed
    assert not CyclicPartition.finite({0}, {5}).validate(line_space([0, 1])).passed

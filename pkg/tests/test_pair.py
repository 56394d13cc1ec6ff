import math

import numpy as np
import pytest

from alphapsi import (
    ComparisonFunction,
    ConstantAlpha,
    IntervalSpace,
    MappingPair,
    MatrixAlpha,
    PointOutsideSpace,
    PreimageFailure,
    TableMap,
    check_alpha_admissible,
    check_alpha_admissible_wrt_g,
    check_contractive,
    check_g_range_closed,
    check_initial_point,
    check_range_inclusion,
    compute_M,
    line_space,
    parse_map,
    sample_pairs,
)
from alphapsi.pair import check_self_map, initial_points, is_coincidence


def _M_by_hand(f, g, x, y):
    gx, gy, fx, fy = g(x), g(y), f(x), f(y)
    return max(abs(gx - gy), (abs(gx - fx) + abs(gy - fy)) / 2, (abs(gx - fy) + abs(gy - fx)) / 2)


def test_compute_M_example(piecewise_pair):
    p, _, _ = piecewise_pair
    # g1 = 1/2, g0 = 0, f1 = 1/3, f0 = 0: the distance term 1/2 dominates 1/12 and 5/12
    assert compute_M(p, 1.0, 0.0) == pytest.approx(0.5)
    rng = np.random.default_rng(3)
    xs, ys = rng.uniform(0, 5, 50), rng.uniform(0, 5, 50)
    np.testing.assert_allclose(compute_M(p, xs, ys), [_M_by_hand(p.f, p.g, x, y) for x, y in zip(xs, ys)])


def test_compute_M_rejects_outside_points(piecewise_pair):
    p, _, _ = piecewise_pair
    with pytest.raises(PointOutsideSpace):
        compute_M(p, -1.0, 0.0)


def test_sample_pairs_layout():
    xs, ys = sample_pairs(IntervalSpace(0, 3), step=0.01, n_random=10, seed=1)
    assert xs.size == 301 * 301 + 10
    xs2, _ = sample_pairs(IntervalSpace(0, 3), step=0.01, n_random=10, seed=1)
    np.testing.assert_array_equal(xs, xs2)
    fx, fy = sample_pairs(line_space([0, 1, 2]))
    assert fx.size == 9


def test_example_contractive_and_hypotheses(piecewise_pair):
    p, alpha, psi = piecewise_pair
    pairs = sample_pairs(p.space, box=(0, 3))
    assert check_contractive(p, alpha, psi, pairs).passed
    assert check_alpha_admissible_wrt_g(p, alpha, pairs).passed
    assert check_range_inclusion(p, box=(0, 3)).passed
    assert check_self_map(p).passed
    assert check_initial_point(p, alpha, 1.0)
    assert check_initial_point(p, alpha, 2.0)
    # g3 = 3/2 lies outside [0, 1]
    assert not check_initial_point(p, alpha, 3.0)


def test_contractive_failure_reports_worst_pair():
    p = MappingPair(IntervalSpace(0, 1), parse_map("scale 2"), parse_map("identity"))
    res = check_contractive(p, ConstantAlpha(1), ComparisonFunction.linear(0.5))
    assert not res.passed
    x, y = res.witness
    # excess 2|x - y| - 0.5 M is largest at the far corners
    assert {x, y} == {0.0, 1.0}
    assert res.magnitude == pytest.approx(2 - 0.5 * 1.5)


def test_admissible_dichotomy(reciprocal_pair):
    p, alpha = reciprocal_pair
    pairs = sample_pairs(p.space, box=(1, 100), step=0, n_random=10_000, seed=0)
    plain = check_alpha_admissible(p.f, alpha, pairs)
    assert not plain.passed
    x, y = plain.witness
    assert alpha(x, y) >= 1 and alpha(p.f(x), p.f(y)) < 1
    assert check_alpha_admissible_wrt_g(p, alpha, pairs).passed
    fixed = check_alpha_admissible(p.f, alpha, (np.array([2.0]), np.array([1.0])))
    assert fixed.witness == (2.0, 1.0)


def test_range_inclusion_finite_witness():
    s = line_space([0, 1, 2])
    p = MappingPair(s, TableMap([2, 2, 2]), TableMap([0, 1, 1]))
    res = check_range_inclusion(p)
    assert not res.passed and res.witness == 0
    assert check_range_inclusion(MappingPair(s, TableMap([1, 1, 0]), TableMap([0, 1, 1]))).passed


def test_preimage_rules():
    s = line_space([0, 1, 2])
    p = MappingPair(s, TableMap([1, 1, 1]), TableMap([2, 1, 1]))
    assert p.preimage(1) == 1
    with pytest.raises(PreimageFailure):
        p.preimage(0)
    q = MappingPair(IntervalSpace(0, math.inf), parse_map("scale 2"), parse_map("exp_decay"))
    assert q.preimage(math.exp(-2)) == pytest.approx(2.0)
    with pytest.raises(PreimageFailure):
        q.preimage(2.0)


def test_g_range_closed(piecewise_pair):
    p, _, _ = piecewise_pair
    assert check_g_range_closed(p).passed
    q = MappingPair(IntervalSpace(0, math.inf), parse_map("scale 1/2"), parse_map("exp_decay"))
    res = check_g_range_closed(q)
    assert not res.passed and "(0, 1]" in res.reason


def test_finite_initial_points_and_coincidence():
    s = line_space([0, 1, 2])
    p = MappingPair(s, TableMap([1, 1, 0]), TableMap([0, 1, 2]))
    alpha = MatrixAlpha([[0, 1, 0], [0, 1, 0], [0, 0, 0]])
    assert initial_points(p, alpha) == [0, 1]
    assert is_coincidence(p, 1) and not is_coincidence(p, 2)


def test_pair_type_checks():
    with pytest.raises(TypeError):
        MappingPair(line_space([0, 1]), parse_map("scale 2"), parse_map("identity"))
    with pytest.raises(ValueError):
        MappingPair(line_space([0, 1]), TableMap([0]), TableMap([0, 1]))


def test_alpha_values_must_be_nonnegative():
    with pytest.raises(ValueError):
        ConstantAlpha(-1)
    with pytest.raises(ValueError):
        MatrixAlpha([[0, -1], [0, 0]])

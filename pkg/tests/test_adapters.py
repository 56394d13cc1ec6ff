import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphapsi import (
    CoefficientOutOfRange,
    ComparisonFunction,
    CorollaryConfig,
    CyclicPartition,
    IntervalSpace,
    MappingPair,
    NotFinite,
    PartialOrder,
    TableMap,
    alpha_from_cyclic,
    alpha_from_order,
    check_alpha_admissible_wrt_g,
    check_cyclic_conditions,
    check_g_nondecreasing,
    check_g_regular,
    line_space,
    parse_map,
    reduce_corollary,
    sample_pairs,
)

DIAMOND = [(0, 1), (0, 2), (1, 3), (2, 3)]


def _finite(f, g):
    n = len(f)
    return MappingPair(line_space(np.arange(n, dtype=float)), TableMap(f), TableMap(g))


def test_alpha_from_order_examples():
    chain = PartialOrder.from_covers(3, [(0, 1), (1, 2)])
    np.testing.assert_array_equal(alpha_from_order(chain).matrix, np.ones((3, 3)))
    anti = PartialOrder.from_matrix(np.eye(2, dtype=bool))
    np.testing.assert_array_equal(alpha_from_order(anti).matrix, np.eye(2))
    m = alpha_from_order(PartialOrder.from_covers(4, DIAMOND)).matrix
    zeros = {tuple(map(int, ij)) for ij in np.argwhere(m == 0)}
    assert zeros == {(1, 2), (2, 1)}
    np.testing.assert_array_equal(m, m.T)


def test_alpha_from_standard_order_is_one():
    a = alpha_from_order(PartialOrder.standard())
    assert a(1.0, 2.0) == 1.0 and a(2.0, 1.0) == 1.0


def test_g_nondecreasing_cases():
    chain = PartialOrder.from_covers(3, [(0, 1), (1, 2)])
    assert check_g_nondecreasing(_finite([0, 1, 2], [0, 1, 2]), chain).passed
    res = check_g_nondecreasing(_finite([2, 1, 0], [0, 1, 2]), chain)
    assert not res.passed
    x, y = res.witness
    assert chain.leq(x, y) and not chain.leq(2 - x, 2 - y)
    p = MappingPair(IntervalSpace(), parse_map("scale 1/3"), parse_map("scale 1/2"))
    assert check_g_nondecreasing(p, PartialOrder.standard(), sample_pairs(p.space)).passed


def test_g_regular():
    chain = PartialOrder.from_covers(3, [(0, 1), (1, 2)])
    assert check_g_regular(_finite([0, 1, 2], [2, 1, 0]), chain).passed
    assert check_g_regular(_finite([0, 1], [0, 1]), PartialOrder.from_matrix(np.eye(2, dtype=bool))).passed
    p = MappingPair(IntervalSpace(), parse_map("scale 1/3"), parse_map("identity"))
    with pytest.raises(NotFinite):
        check_g_regular(p, PartialOrder.standard())


def test_alpha_from_cyclic_examples():
    g = TableMap([0, 1, 2])
    whole = CyclicPartition.finite({0, 1, 2}, {0, 1, 2})
    np.testing.assert_array_equal(alpha_from_cyclic(whole, g).matrix, np.ones((3, 3)))
    two = CyclicPartition.finite({0}, {1})
    np.testing.assert_array_equal(alpha_from_cyclic(two, TableMap([0, 1])).matrix, [[0, 1], [1, 0]])


def test_alpha_from_cyclic_on_the_line():
    a = alpha_from_cyclic(CyclicPartition.interval((-1, 0), (0, 1)), parse_map("identity"))
    rng = np.random.default_rng(0)
    xs, ys = rng.uniform(-1, 1, 2000), rng.uniform(-1, 1, 2000)
    np.testing.assert_array_equal(a(xs, ys), (xs * ys <= 0).astype(float))
    assert a(0.0, 0.7) == 1.0 and a(0.3, 0.7) == 0.0
    np.testing.assert_array_equal(a(xs, ys), a(ys, xs))


def test_cyclic_conditions_example():
    p = MappingPair(IntervalSpace(-1, 1), parse_map("scale -1/4"), parse_map("identity"))
    res = check_cyclic_conditions(p, CyclicPartition.interval((-1, 0), (0, 1)), ComparisonFunction.linear(0.25))
    assert res.passed
    assert set(res.details) == {"closed", "inclusion", "injective", "contractive"}


def test_cyclic_conditions_failures():
    p = _finite([0, 0, 0], [1, 1, 1])
    res = check_cyclic_conditions(p, CyclicPartition.finite({0, 1}, {1, 2}))
    assert not res.details["injective"].passed
    q = _finite([0, 1, 2], [0, 1, 2])
    res = check_cyclic_conditions(q, CyclicPartition.finite({0}, {1, 2}))
    assert not res.details["inclusion"].passed
    r = MappingPair(IntervalSpace(-1, 1), parse_map("scale 1/4"), parse_map("identity"))
    assert not check_cyclic_conditions(r, CyclicPartition.interval((-1, 0), (0, 1))).passed
    s = MappingPair(IntervalSpace(-1, 1), parse_map("scale -1/4"), parse_map("piecewise 0 : scale -1 | identity"))
    assert not check_cyclic_conditions(s, CyclicPartition.interval((-1, 0), (0, 1))).details["injective"].passed


@pytest.mark.parametrize(
    "cfg, lam",
    [
        (CorollaryConfig.banach(0.5), 0.5),
        (CorollaryConfig.kannan(0.3), 0.6),
        (CorollaryConfig.chatterjea(0.3), 0.6),
        (CorollaryConfig.ciric(0.9), 0.9),
        (CorollaryConfig.hardy_rogers(0.2, 0.1, 0.1), 0.6),
    ],
)
def test_lambda_eff(cfg, lam):
    red = reduce_corollary(cfg)
    assert red.psi.lam == lam
    assert cfg.lambda_eff == lam
    assert red.alpha(0.3, 7.0) == 1.0


@pytest.mark.parametrize(
    "kind, coeffs",
    [
        ("Banach", (1.0,)),
        ("Banach", (0.0,)),
        ("Kannan", (0.5,)),
        ("Chatterjea", (0.6,)),
        ("Ciric", (1.2,)),
        ("HardyRogers", (0.4, 0.2, 0.1)),
        ("HardyRogers", (0.5, -0.1, 0.1)),
        ("HardyRogers", (0.5, 0.1)),
    ],
)
def test_coefficient_ranges(kind, coeffs):
    with pytest.raises(CoefficientOutOfRange):
        CorollaryConfig(kind, coeffs)


def test_psi_kinds_need_psi():
    with pytest.raises(CoefficientOutOfRange):
        CorollaryConfig("Berinde")
    with pytest.raises(CoefficientOutOfRange):
        CorollaryConfig("OrderedGeneralized", psi=ComparisonFunction.linear(0.5))
    red = reduce_corollary(CorollaryConfig.berinde(ComparisonFunction.linear(0.4)))
    assert red.psi.lam == 0.4


MAPS = ["scale 0.3", "scale -0.45", "affine 0.2 1", "exp_decay", "sqrt", "scale 2"]
CONFIGS = [
    CorollaryConfig.banach(0.5),
    CorollaryConfig.kannan(0.3),
    CorollaryConfig.chatterjea(0.3),
    CorollaryConfig.ciric(0.9),
    CorollaryConfig.hardy_rogers(0.2, 0.1, 0.1),
    CorollaryConfig.berinde(ComparisonFunction.linear(0.7)),
]


@settings(max_examples=40, deadline=None)
@given(f=st.sampled_from(MAPS), g=st.sampled_from(["identity", "scale 2", "exp"]), seed=st.integers(0, 10_000))
def test_dominance_direct_implies_generalized(f, g, seed):
    p = MappingPair(IntervalSpace(0, 4), parse_map(f), parse_map(g))
    pairs = sample_pairs(p.space, step=0, n_random=2000, seed=seed)
    for cfg in CONFIGS:
        red = reduce_corollary(cfg)
        assert np.max(red.dominance_gap(p, pairs)) <= 1e-12
        if red.check_direct(p, pairs).passed:
            assert red.check_generalized(p, pairs).passed


def test_ordered_reduction_matches_alpha_from_order():
    order = PartialOrder.from_covers(4, DIAMOND)
    red = reduce_corollary(CorollaryConfig("OrderedGeneralized", psi=ComparisonFunction.linear(0.5), order=order))
    np.testing.assert_array_equal(red.alpha.matrix, alpha_from_order(order).matrix)


@settings(max_examples=100, deadline=None)
@given(
    n=st.integers(1, 5),
    data=st.data(),
)
def test_g_nondecreasing_implies_admissible(n, data):
    # random order: closure of random covers along a random linear extension
    perm = data.draw(st.permutations(range(n)))
    covers = [
        (perm[i], perm[j])
        for i in range(n) for j in range(i + 1, n)
        if data.draw(st.booleans())
    ]
    order = PartialOrder.from_covers(n, covers)
    f = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    g = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    p = _finite(f, g)
    if check_g_nondecreasing(p, order).passed:
        assert check_alpha_admissible_wrt_g(p, alpha_from_order(order)).passed

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphapsi import (
    ComparisonFunction,
    ConstantAlpha,
    InitialPointRejected,
    IntervalSpace,
    IterationTrace,
    MappingPair,
    Outcome,
    TableMap,
    check_trace_invariants,
    jungck_iterate,
    line_space,
    parse_map,
    verify_cauchy_certificate,
)
from alphapsi.iterate import condition_iii_on_trace


def test_example_sequence_is_geometric(piecewise_pair):
    p, alpha, psi = piecewise_pair
    tr = jungck_iterate(p, alpha, psi, 1.0)
    assert tr.outcome is Outcome.COINCIDENCE_FOUND
    # g x_{n+1} = f x_n gives x_{n+1} = (2/3) x_n from x0 = 1
    expected = (2.0 / 3.0) ** np.arange(len(tr.points))
    np.testing.assert_allclose(tr.points, expected, rtol=1e-12)
    assert abs(tr.coincidence) <= 1.5e-9
    assert tr.iterations <= 60
    assert abs(p.f(tr.coincidence) - p.g(tr.coincidence)) <= 1e-9
    assert verify_cauchy_certificate(tr, psi).passed
    assert check_trace_invariants(tr, psi).passed
    assert condition_iii_on_trace(p, alpha, tr).passed


def test_residual_only_stop_is_earlier(piecewise_pair):
    p, alpha, psi = piecewise_pair
    loose = jungck_iterate(p, alpha, psi, 1.0, point_tol=math.inf)
    tight = jungck_iterate(p, alpha, psi, 1.0)
    assert loose.iterations < tight.iterations
    assert loose.residual <= 1e-9


def test_rejected_start(piecewise_pair):
    p, alpha, psi = piecewise_pair
    with pytest.raises(InitialPointRejected):
        jungck_iterate(p, alpha, psi, 3.0)


def test_argument_validation(piecewise_pair):
    p, alpha, psi = piecewise_pair
    with pytest.raises(ValueError):
        jungck_iterate(p, alpha, psi, 1.0, tol=0)
    with pytest.raises(ValueError):
        jungck_iterate(p, alpha, psi, 1.0, max_iter=0)


def test_f_equal_g_stops_after_one_step():
    s = line_space([0, 1, 2])
    p = MappingPair(s, TableMap([0, 1, 2]), TableMap([0, 1, 2]))
    tr = jungck_iterate(p, ConstantAlpha(1), ComparisonFunction.linear(0.5), 2)
    assert tr.outcome is Outcome.COINCIDENCE_FOUND
    assert tr.iterations == 1 and tr.coincidence == 2


def test_finite_banach_run():
    s = line_space([0, 1, 1.5, 2.5])
    p = MappingPair(s, TableMap([1, 2, 2, 2]), TableMap([0, 1, 2, 3]))
    psi = ComparisonFunction.linear(0.5)
    tr = jungck_iterate(p, ConstantAlpha(1), psi, 0)
    assert tr.points == [0, 1, 2]
    assert tr.coincidence == 2
    assert verify_cauchy_certificate(tr, psi, space=s).passed
    with pytest.raises(ValueError):
        verify_cauchy_certificate(tr, psi)


def test_max_iterations():
    p = MappingPair(IntervalSpace(), parse_map("affine 1 1"), parse_map("identity"))
    tr = jungck_iterate(p, ConstantAlpha(1), ComparisonFunction.linear(0.5), 0.0, max_iter=5)
    assert tr.outcome is Outcome.MAX_ITERATIONS
    assert tr.iterations == 5
    assert tr.residual == 1.0


def test_preimage_failure_is_an_outcome():
    p = MappingPair(IntervalSpace(0, math.inf), parse_map("scale 2"), parse_map("exp_decay"))
    tr = jungck_iterate(p, ConstantAlpha(1), ComparisonFunction.linear(0.5), 1.0)
    assert tr.outcome is Outcome.PREIMAGE_FAILURE
    assert "outside the space" in tr.message


def test_certificate_detects_a_jump():
    tr = IterationTrace(points=[0, 1, 2], g_values=[0, 0, 1], f_values=[0.0, 1.0, 5.0], step_distances=[1.0, 4.0])
    res = verify_cauchy_certificate(tr, ComparisonFunction.linear(0.5))
    assert not res.passed
    # bound at n = 0 is 1 / (1 - 0.5) = 2 while d(f x0, f x2) = 5
    assert res.witness == (0, 2)
    assert res.magnitude == pytest.approx(3.0)


def test_trace_csv_header(piecewise_pair):
    p, alpha, psi = piecewise_pair
    tr = jungck_iterate(p, alpha, psi, 1.0)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "n,x,gx,fx,step_distance,alpha,certificate"
    assert len(lines) == tr.iterations + 2


@settings(max_examples=60, deadline=None)
@given(lam=st.floats(0.05, 0.95), x0=st.floats(-10, 10), c=st.floats(0.5, 3))
def test_certificate_holds_for_linear_contractions(lam, x0, c):
    # f = lam c x, g = c x: a contractive pair with ratio lam and coincidence point 0
    p = MappingPair(IntervalSpace(), parse_map(f"scale {lam * c!r}"), parse_map(f"scale {c!r}"))
    psi = ComparisonFunction.linear(lam)
    tr = jungck_iterate(p, ConstantAlpha(1), psi, x0)
    assert tr.outcome is Outcome.COINCIDENCE_FOUND
    assert abs(tr.coincidence) <= 1e-8
    assert verify_cauchy_certificate(tr, psi).passed
    assert check_trace_invariants(tr, psi).passed

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtdual.errors import EmptyInput, InvalidParameter, LengthMismatch
from gtdual.graph import build_pooling_graph
from gtdual.model import (
    Observation,
    PriorVector,
    StateVector,
    eq_fn,
    or_fn,
    run_tests,
    run_tests_batch,
    sample_states,
    sample_states_batch,
)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_prior_open_interval(q):
    with pytest.raises(InvalidParameter):
        PriorVector((0.5, q))


def test_bits_validated():
    with pytest.raises(InvalidParameter):
        Observation((0, 2))
    with pytest.raises(InvalidParameter):
        StateVector((1, -1))


def test_or_eq():
    assert or_fn([0, 0, 1]) == 1
    assert or_fn([]) == 0
    assert eq_fn([1, 1, 1]) == 1
    assert eq_fn([0, 1]) == 0
    with pytest.raises(EmptyInput):
        eq_fn([])


@pytest.mark.parametrize(
    "s, t",
    [((0, 1, 0), (1, 1)), ((0, 0, 0), (0, 0)), ((1, 0, 0), (1, 0))],
)
def test_run_tests_worked(worked_graph, s, t):
    assert run_tests(worked_graph, StateVector(s)).results == t


def test_run_tests_length(worked_graph):
    with pytest.raises(LengthMismatch):
        run_tests(worked_graph, StateVector((0, 1)))


def test_sample_deterministic():
    p = PriorVector.uniform(3, 0.1)
    assert sample_states(p, 11) == sample_states(p, 11)
    assert len(sample_states(p, 11)) == 3


def test_sample_near_one():
    p = PriorVector.uniform(4, 0.999999)
    assert sum(sample_states(p, seed).s == (1, 1, 1, 1) for seed in range(200)) >= 199


def test_sample_law_of_large_numbers():
    q = (0.1, 0.5, 0.8)
    p = PriorVector(q)
    n = 100_000
    total = np.zeros(3)
    for seed in range(n):
        total += sample_states(p, seed).s
    mean = total / n
    for j, qj in enumerate(q):
        assert abs(mean[j] - qj) <= 3 * math.sqrt(qj * (1 - qj) / n)


def test_batch_matches_scalar_tests():
    g = build_pooling_graph(5, [[0, 1], [2, 3, 4], [4]])
    s = sample_states_batch(PriorVector.uniform(5, 0.3), 50, 1)
    batch = run_tests_batch(g, s)
    for row, t in zip(s, batch):
        assert run_tests(g, StateVector(tuple(row))).results == tuple(t)


@st.composite
def graph_and_state(draw):
    n = draw(st.integers(1, 8))
    groups = [draw(st.sets(st.integers(0, n - 1), min_size=1)) for _ in range(draw(st.integers(0, 5)))]
    s = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    return build_pooling_graph(n, groups), s, draw(st.integers(0, n - 1))


@settings(max_examples=200, deadline=None)
@given(graph_and_state())
def test_run_tests_monotone(case):
    g, s, j = case
    assert run_tests(g, StateVector((0,) * g.num_objects)).results == (0,) * g.num_tests
    lo = list(s)
    lo[j] = 0
    hi = list(s)
    hi[j] = 1
    t_lo = run_tests(g, StateVector(tuple(lo))).results
    t_hi = run_tests(g, StateVector(tuple(hi))).results
    assert all(a <= b for a, b in zip(t_lo, t_hi))

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import example_instance, random_instance
from qip import (
    QipInstance,
    SearchState,
    best_value_constrained,
    best_value_unconstrained,
    is_one_opt_local_optimum,
    one_opt,
    partial_value,
    random_sequence,
    round_to_candidate,
)
from qip.local_search import scratch
from qip.oracle import check_local_optimality_by_enumeration, enumerate_best_value


def brute_max(q, M, cap):
    return max(q * y * y + M * y for y in range(cap + 1))


class TestRounding:
    def test_integer_vertex(self):
        assert round_to_candidate(4, -1) == 2

    def test_half_rounds_away_from_zero(self):
        assert round_to_candidate(5, -1) == 3
        assert partial_value(-1, 5, 2) == partial_value(-1, 5, 3) == 6

    def test_nearest(self):
        assert round_to_candidate(-5, 2) == 1

    def test_zero_curvature_rejected(self):
        with pytest.raises(ValueError):
            round_to_candidate(3, 0)

    @settings(max_examples=500)
    @given(st.integers(-10**6, 10**6), st.integers(-1000, 1000).filter(bool))
    def test_within_half_of_vertex(self, M, q):
        vertex = Fraction(-M, 2 * q)
        y = round_to_candidate(M, q)
        assert abs(y - vertex) <= Fraction(1, 2)
        if abs(y - vertex) == Fraction(1, 2):
            assert abs(y) > abs(vertex)
            other = y - (1 if y > 0 else -1)
            assert partial_value(q, M, y) == partial_value(q, M, other)


class TestBestValueUnconstrained:
    @pytest.mark.parametrize(
        "q, M, u, x, expected, value",
        [
            (-1, 4, 10, 0, 2, 4),
            (2, -5, 4, 0, 4, 12),
            (2, -5, 2, 0, 0, 0),
            (0, -3, 7, 5, 0, 0),
            (3, 1, 5, 0, 5, 80),
        ],
    )
    def test_table(self, q, M, u, x, expected, value):
        y = best_value_unconstrained(q, M, u, x)
        assert y == expected
        assert partial_value(q, M, y) == value == brute_max(q, M, u)

    def test_indifferent_variable_stays(self):
        assert best_value_unconstrained(0, 0, 9, 4) == 4

    def test_tie_keeps_current_value(self):
        # f(y) = 2y^2 - 4y: f(0) = f(2) = 0 with u = 2.
        assert best_value_unconstrained(2, -4, 2, 2) == 2
        assert best_value_unconstrained(2, -4, 2, 0) == 0
        # vertex 2.5 with current value on the lower neighbour
        assert best_value_unconstrained(-1, 5, 10, 2) == 2

    @settings(max_examples=2000)
    @given(st.integers(-10, 10), st.integers(-50, 50), st.integers(0, 10), st.data())
    def test_value_optimal(self, q, M, u, data):
        x = data.draw(st.integers(0, u))
        y = best_value_unconstrained(q, M, u, x)
        assert 0 <= y <= u
        assert partial_value(q, M, y) == brute_max(q, M, u)
        if q > 0:
            assert y in (0, u, x)

    @settings(max_examples=500)
    @given(st.integers(-10, 10), st.integers(-50, 50))
    def test_binary_case_matches_derivative_rule(self, q, M):
        for x in (0, 1):
            y = best_value_unconstrained(q, M, 1, x)
            assert partial_value(q, M, y) == max(0, q + M)


class TestBestValueConstrained:
    @pytest.mark.parametrize(
        "q, M, u, x, alpha, expected, value",
        [
            (-1, 4, 10, 0, 1, 1, 3),
            (2, -5, 4, 0, 3, 3, 3),
            (0, 5, 9, 2, 4, 6, 30),
            (2, -5, 4, 0, 2, 0, 0),
        ],
    )
    def test_table(self, q, M, u, x, alpha, expected, value):
        y = best_value_constrained(q, M, u, x, alpha)
        assert y == expected
        assert partial_value(q, M, y) == value == brute_max(q, M, min(u, x + alpha))

    @settings(max_examples=2000)
    @given(st.integers(-10, 10), st.integers(-50, 50), st.integers(0, 10), st.integers(0, 10), st.data())
    def test_value_optimal(self, q, M, u, alpha, data):
        x = data.draw(st.integers(0, u))
        cap = min(u, x + alpha)
        y = best_value_constrained(q, M, u, x, alpha)
        assert 0 <= y <= cap
        assert partial_value(q, M, y) == enumerate_best_value(q, M, cap)[1]


def test_scratch_caps():
    s = scratch(-1, 7, 10, 2, alpha_i=3)
    assert s.y2 == (7, 1)
    assert s.y_star == (7, 2)
    assert s.y_max == 4
    assert s.U == 4
    assert s.U1 == 5
    assert s.U2 == 4
    assert s.U2 <= s.U1 <= 10


class TestRandomSequence:
    def test_singleton(self):
        assert random_sequence(1, np.random.default_rng(0)).tolist() == [0]

    def test_deterministic(self):
        a = random_sequence(3, np.random.default_rng(42)).tolist()
        b = random_sequence(3, np.random.default_rng(42)).tolist()
        assert a == b
        assert sorted(a) == [0, 1, 2]

    def test_uniform(self):
        # Per-cell 3-sigma bounds over 24 cells fail ~6% of seeds by chance;
        # the chi-square bound is the family-wise check.
        rng = np.random.default_rng(0)
        draws = 10_000
        counts = Counter(tuple(random_sequence(4, rng).tolist()) for _ in range(draws))
        assert len(counts) == 24
        expected = draws / 24
        sigma = (draws * (1 / 24) * (23 / 24)) ** 0.5
        assert all(abs(c - expected) <= 3 * sigma for c in counts.values())
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi2 < 49.7  # 99.9% quantile for 23 degrees of freedom


class TestOneOpt:
    def test_all_positive_instance_reaches_corner(self):
        inst = example_instance()
        state = SearchState.from_point(inst)
        outcome = one_opt(state, np.random.default_rng(0))
        assert state.x.tolist() == [2, 2]
        assert state.f == 54 == outcome.final_f
        assert outcome.improved and outcome.moves_applied > 0

    def test_idempotent_at_local_optimum(self):
        state = SearchState.from_point(example_instance(), [2, 2])
        outcome = one_opt(state, np.random.default_rng(0))
        assert outcome.moves_applied == 0 and not outcome.improved

    def test_constrained_example(self):
        inst = example_instance(constrained=True)
        state = SearchState.from_point(inst, verify=True)
        one_opt(state, np.random.default_rng(1))
        assert state.f >= 0
        assert is_one_opt_local_optimum(state)
        assert check_local_optimality_by_enumeration(state)

    def test_moves_are_strict_improvements(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            inst = random_instance(rng, int(rng.integers(2, 9)), 5, m=int(rng.integers(0, 3)))
            deltas = []
            state = SearchState.from_point(inst, verify=True, on_move=lambda s, i, old, new, d: deltas.append(d))
            one_opt(state, rng)
            assert all(d > 0 for d in deltas)
            assert is_one_opt_local_optimum(state)


class TestIsLocalOptimum:
    def test_zero_on_positive_instance(self):
        assert not is_one_opt_local_optimum(SearchState.from_point(example_instance()))

    def test_frozen_box(self):
        inst = QipInstance([5, -3], [[1, 2], [-4]], [0, 0])
        assert is_one_opt_local_optimum(SearchState.from_point(inst))

    def test_agrees_with_enumeration(self):
        rng = np.random.default_rng(21)
        for _ in range(60):
            inst = random_instance(rng, int(rng.integers(1, 4)), 3, m=int(rng.integers(0, 3)))
            for x in itertools.product(*(range(int(ui) + 1) for ui in inst.u)):
                if np.any(inst.A @ np.array(x, dtype=np.int64) > inst.b):
                    continue
                state = SearchState.from_point(inst, x)
                assert is_one_opt_local_optimum(state) == check_local_optimality_by_enumeration(state)

"""Entropy estimators against independent brute-force oracles."""

import math
from math import log2

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opcausal import (
    ConditioningSet,
    DelayGrid,
    EmbeddingParams,
    MultivariateSeries,
    build_moptn,
    ce_tensor,
    co_occurrence_entropy,
    conditional_entropy_given_set,
    lagged_joint_counts,
    threshold,
)
from opcausal.errors import (
    ConditioningTooLarge,
    InvalidLambda,
    LagTooLarge,
)
from opcausal.ordinal import PatternMatrix


def oracle_co_occurrence_entropy(src, dst, tau, n_patterns):
    """Nested-loop plug-in estimate of H(dst at t+tau | src at t)."""
    pairs = [(src[t], dst[t + tau]) for t in range(len(src) - tau)]
    total = len(pairs)
    joint = {}
    marginal = {}
    for i, j in pairs:
        joint[(i, j)] = joint.get((i, j), 0) + 1
        marginal[i] = marginal.get(i, 0) + 1
    h = 0.0
    for (i, j), c in joint.items():
        p_ij = c / total
        p_j_given_i = c / marginal[i]
        h -= p_ij * math.log2(p_j_given_i)
    return h


def oracle_conditional_entropy_given_set(pi, target, members, t_start):
    """Joint-histogram estimate of H(target at t | member symbols at lags)."""
    joint = {}
    cond = {}
    total = 0
    for t in range(t_start, pi.n_times):
        key = tuple(pi.symbols[t - tau, ch] for ch, tau in members)
        full = key + (pi.symbols[t, target],)
        joint[full] = joint.get(full, 0) + 1
        cond[key] = cond.get(key, 0) + 1
        total += 1
    h = 0.0
    for full, c in joint.items():
        h -= c / total * math.log2(c / cond[full[:-1]])
    return h


symbol_sequences = st.lists(st.integers(0, 5), min_size=5, max_size=50)


class TestCoOccurrenceOracle:
    @settings(max_examples=200, deadline=None)
    @given(symbol_sequences, symbol_sequences, st.integers(0, 3))
    def test_matches_nested_loop_oracle(self, a, b, tau):
        n = min(len(a), len(b))
        src = np.array(a[:n])
        dst = np.array(b[:n])
        if n - tau < 1:
            tau = n - 1
        got = co_occurrence_entropy(src, dst, tau, 6)
        want = oracle_co_occurrence_entropy(src, dst, tau, 6)
        assert got == pytest.approx(want, abs=1e-12)

    def test_self_at_zero_lag_is_zero(self, rng):
        x = rng.integers(0, 6, size=5000)
        assert co_occurrence_entropy(x, x, 0, 6) == 0.0

    def test_independent_streams_near_log2_6(self, rng):
        a = rng.integers(0, 6, size=20_000)
        b = rng.integers(0, 6, size=20_000)
        h = co_occurrence_entropy(a, b, 3, 6)
        assert abs(h - log2(6)) < 0.02

    @settings(max_examples=50, deadline=None)
    @given(symbol_sequences, symbol_sequences, st.integers(0, 3))
    def test_bounds(self, a, b, tau):
        n = min(len(a), len(b))
        tau = min(tau, n - 1)
        h = co_occurrence_entropy(np.array(a[:n]), np.array(b[:n]), tau, 6)
        assert -1e-12 <= h <= log2(6) + 1e-12

    def test_lag_too_large(self):
        with pytest.raises(LagTooLarge):
            co_occurrence_entropy(np.zeros(5, dtype=int), np.zeros(5, dtype=int), 5, 6)


class TestLaggedJointCounts:
    def test_counts_sum_to_pair_count(self, rng):
        src = rng.integers(0, 6, size=100)
        dst = rng.integers(0, 6, size=100)
        counts = lagged_joint_counts(src, dst, 7, 6)
        assert counts.sum() == 93

    def test_known_small_case(self):
        src = np.array([0, 1, 0, 1])
        dst = np.array([2, 3, 2, 3])
        counts = lagged_joint_counts(src, dst, 1, 6)
        assert counts[0, 3] == 2
        assert counts[1, 2] == 1
        assert counts.sum() == 3


class TestConditionalEntropyGivenSet:
    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(0, 10_000),
        st.integers(1, 3),
    )
    def test_matches_joint_histogram_oracle(self, seed, r):
        rng = np.random.default_rng(seed)
        symbols = rng.integers(0, 6, size=(200, 4))
        pi = PatternMatrix(symbols=symbols, params=EmbeddingParams(m=3, d=1))
        channels = rng.choice(4, size=r, replace=False)
        members = [(int(ch), int(rng.integers(0, 5))) for ch in channels]
        cond = ConditioningSet(members)
        t_start = cond.max_delay
        got = conditional_entropy_given_set(pi, 0, cond, t_start=t_start)
        want = oracle_conditional_entropy_given_set(pi, 0, members, t_start)
        assert got == pytest.approx(want, abs=1e-12)

    def test_adding_member_never_increases_entropy(self, rng):
        symbols = rng.integers(0, 6, size=(3000, 3))
        pi = PatternMatrix(symbols=symbols, params=EmbeddingParams(m=3, d=1))
        small = ConditioningSet([(1, 2)])
        large = ConditioningSet([(1, 2), (2, 4)])
        t_start = 4
        h_small = conditional_entropy_given_set(pi, 0, small, t_start=t_start)
        h_large = conditional_entropy_given_set(pi, 0, large, t_start=t_start)
        assert h_large <= h_small + 1e-12

    def test_r_max_enforced(self, rng):
        symbols = rng.integers(0, 6, size=(100, 5))
        pi = PatternMatrix(symbols=symbols, params=EmbeddingParams(m=3, d=1))
        cond = ConditioningSet([(1, 1), (2, 1), (3, 1), (4, 1)])
        with pytest.raises(ConditioningTooLarge):
            conditional_entropy_given_set(pi, 0, cond, r_max=3)

    def test_explicit_window_pins_sample_count(self, rng):
        symbols = rng.integers(0, 6, size=(500, 2))
        pi = PatternMatrix(symbols=symbols, params=EmbeddingParams(m=3, d=1))
        cond = ConditioningSet([(1, 3)])
        with pytest.raises(ValueError):
            conditional_entropy_given_set(pi, 0, cond, t_start=2)


class TestCETensor:
    def test_shape_and_diagonal(self, random_series):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        t = ce_tensor(pi, DelayGrid([1, 2, 5]))
        assert t.values.shape == (3, 3, 3)
        for j in range(3):
            np.testing.assert_allclose(np.diag(t.values[:, :, j]), t.h_max)

    def test_entries_within_bounds(self, random_series):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        t = ce_tensor(pi, DelayGrid([1, 4]))
        assert np.all(t.values >= -1e-12)
        assert np.all(t.values <= t.h_max + 1e-12)

    def test_matches_pairwise_calls(self, random_series):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        t = ce_tensor(pi, DelayGrid([2]))
        want = co_occurrence_entropy(pi.channel(1), pi.channel(0), 2, 6)
        assert t.values[0, 1, 0] == pytest.approx(want, abs=1e-12)


class TestThreshold:
    def test_snaps_high_entries(self, random_series):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        t = threshold(ce_tensor(pi, DelayGrid([1])), 0.9)
        cut = 0.9 * t.h_max
        assert np.all((t.values < cut) | (t.values == t.h_max))

    def test_idempotent(self, random_series):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        once = threshold(ce_tensor(pi, DelayGrid([1])), 0.95)
        twice = threshold(once, 0.95)
        np.testing.assert_array_equal(once.values, twice.values)

    def test_input_not_mutated(self, random_series):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        t = ce_tensor(pi, DelayGrid([1]))
        before = t.values.copy()
        threshold(t, 0.5)
        np.testing.assert_array_equal(t.values, before)

    @pytest.mark.parametrize("lam", [0.0, -0.1, 1.5])
    def test_invalid_lambda(self, random_series, lam):
        pi = build_moptn(random_series, EmbeddingParams(m=3, d=2))
        t = ce_tensor(pi, DelayGrid([1]))
        with pytest.raises(InvalidLambda):
            threshold(t, lam)


class TestDelayGrid:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            DelayGrid([])

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            DelayGrid([3, 1])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DelayGrid([-1, 2])

    def test_iteration(self):
        assert list(DelayGrid(range(1, 4))) == [1, 2, 3]

"""Scoring, seed derivation, sweeps, and windowed coupling."""

import numpy as np
import pytest

from opcausal import (
    DelayGrid,
    EmbeddingParams,
    MultivariateSeries,
    metrics,
    score,
    sweep,
    windowed_analysis,
)
from opcausal.causal import CausalNetwork, Edge
from opcausal.errors import ChannelMismatch, WindowTooShort
from opcausal.evaluate import ConfusionCounts, derive_seed, run_realization
from opcausal.simulate import GroundTruth


def network_of(triples):
    return CausalNetwork(
        edges=[Edge(s, t, d, ce=1.0, strength=1.0) for s, t, d in triples],
        h_max=2.585,
    )


class TestScore:
    def test_delay_sensitive_exact_match(self):
        net = network_of([(0, 1, 3), (1, 2, 5)])
        truth = GroundTruth(edges=[(0, 1, 3), (1, 2, 5)])
        counts = score(net, truth, 3, DelayGrid(range(1, 11)), delay_sensitive=True)
        assert (counts.tp, counts.fp, counts.fn) == (2, 0, 0)
        assert counts.tn == 3 * 2 * 10 - 2

    def test_delay_sensitive_wrong_delay_is_fp_and_fn(self):
        net = network_of([(0, 1, 4)])
        truth = GroundTruth(edges=[(0, 1, 3)])
        counts = score(net, truth, 2, DelayGrid(range(1, 11)), delay_sensitive=True)
        assert (counts.tp, counts.fp, counts.fn) == (0, 1, 1)

    def test_delay_insensitive_any_delay_matches(self):
        net = network_of([(0, 1, 9)])
        truth = GroundTruth(edges=[(0, 1, 3)])
        counts = score(net, truth, 2, DelayGrid(range(1, 11)), delay_sensitive=False)
        assert (counts.tp, counts.fp, counts.fn) == (1, 0, 0)
        assert counts.tn == 1

    def test_channel_out_of_range(self):
        net = network_of([(0, 5, 1)])
        truth = GroundTruth(edges=[(0, 1, 1)])
        with pytest.raises(ChannelMismatch):
            score(net, truth, 3, DelayGrid([1]))


class TestMetrics:
    def test_perfect(self):
        m = metrics(ConfusionCounts(tp=5, fp=0, fn=0, tn=95))
        assert (m.tpr, m.fpr, m.f1) == (1.0, 0.0, 1.0)

    def test_known_values(self):
        m = metrics(ConfusionCounts(tp=3, fp=1, fn=1, tn=95))
        assert m.tpr == pytest.approx(0.75)
        assert m.fpr == pytest.approx(1 / 96)
        assert m.f1 == pytest.approx(0.75)

    def test_undefined_ratios_are_none(self):
        m = metrics(ConfusionCounts(tp=0, fp=0, fn=0, tn=10))
        assert m.tpr is None
        assert m.f1 is None

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionCounts(tp=-1, fp=0, fn=0, tn=0)


class TestDeriveSeed:
    def test_deterministic(self):
        a = derive_seed(42, {"delta": 0.1}, 3)
        b = derive_seed(42, {"delta": 0.1}, 3)
        assert a == b

    def test_varies_with_every_input(self):
        base = derive_seed(42, {"delta": 0.1}, 3)
        assert derive_seed(43, {"delta": 0.1}, 3) != base
        assert derive_seed(42, {"delta": 0.2}, 3) != base
        assert derive_seed(42, {"delta": 0.1}, 4) != base

    def test_insensitive_to_key_order(self):
        a = derive_seed(1, {"delta": 0.1, "T": 100}, 0)
        b = derive_seed(1, {"T": 100, "delta": 0.1}, 0)
        assert a == b

    def test_nonnegative(self):
        for i in range(20):
            assert derive_seed(0, {"x": i}, i) >= 0


class TestRunRealization:
    def test_ar_realization_recovers_structure(self):
        m = run_realization("ar", {"T": 10_000, "delta": 0.15}, seed=11)
        assert m.tpr == 1.0
        assert m.fpr <= 0.02

    def test_unknown_system(self):
        with pytest.raises(ValueError):
            run_realization("weather", {}, seed=0)

    def test_nmm_requires_config(self):
        with pytest.raises(ValueError):
            run_realization("nmm", {"T": 1000}, seed=0)


class TestSweep:
    def test_grid_cells_and_aggregation(self):
        result = sweep(
            "ar",
            {"delta": [0.1, 0.15], "T": [4000]},
            n_realizations=2,
            base_seed=0,
        )
        assert len(result.cells) == 2
        for cell in result.cells:
            assert cell.n_realizations == 2
            assert cell.tpr_mean is not None
            assert not cell.errors

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            sweep("ar", {}, n_realizations=1, base_seed=0)

    def test_cell_seeds_stable_under_grid_growth(self):
        small = sweep("ar", {"delta": [0.15], "T": [4000]}, 1, base_seed=3)
        large = sweep("ar", {"delta": [0.1, 0.15], "T": [4000]}, 1, base_seed=3)
        matching = [
            c for c in large.cells if c.params == {"delta": 0.15, "T": 4000}
        ]
        assert matching[0].seeds == small.cells[0].seeds


class TestWindowedAnalysis:
    def test_window_count_and_normalization(self, rng):
        data = rng.standard_normal((4000, 2))
        data[3:, 1] += 1.5 * data[:-3, 0]
        series = MultivariateSeries(data=data, sample_rate=100.0)
        result = windowed_analysis(
            series,
            window_s=10.0,
            overlap=0.5,
            params=EmbeddingParams(m=3, d=1),
            delays=DelayGrid(range(1, 6)),
            delta=0.1,
        )
        assert len(result.midpoints_s) == 7
        if result.entries:
            assert max(e.strength for e in result.entries) == pytest.approx(1.0)
            assert all(0.0 <= e.strength <= 1.0 for e in result.entries)

    def test_requires_sample_rate(self, random_series):
        with pytest.raises(ValueError):
            windowed_analysis(
                random_series,
                window_s=1.0,
                overlap=0.0,
                params=EmbeddingParams(m=3, d=1),
                delays=DelayGrid([1]),
            )

    def test_window_too_short(self, rng):
        series = MultivariateSeries(
            data=rng.standard_normal((1000, 2)), sample_rate=100.0
        )
        with pytest.raises(WindowTooShort):
            windowed_analysis(
                series,
                window_s=0.05,
                overlap=0.0,
                params=EmbeddingParams(m=3, d=1),
                delays=DelayGrid([1, 2, 3]),
            )

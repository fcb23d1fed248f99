"""Tests for LUT network wiring and memorization."""

import numpy as np
import pytest

from boolearn.benchgen import parse_benchmark, sample_splits
from boolearn.core.errors import EmptyDatasetError, ModelConfigError, WidthMismatchError
from boolearn.learners.lutnet import (
    build_topology,
    evaluate_lutnet,
    memorize,
    predict_lutnet,
    train_lutnet,
)
from boolearn.models.pla import Dataset, to_dataset
from boolearn.schemas.params import LutParams
from tests.helpers import exhaustive_dataset, random_dataset, truth_table_rows


def tables(net):
    return [lut.table.tolist() for layer in net.layers for lut in layer]


class TestBuildTopology:
    """Tests for LUT wiring."""

    def test_layer_widths(self):
        """Test every layer but the last holds luts_per_layer LUTs."""
        net = build_topology(12, k=3, layers=4, luts_per_layer=10, seed=1)
        assert [len(layer) for layer in net.layers] == [10, 10, 10, 1]
        assert net.num_luts == 31
        assert all(lut.table.shape == (8,) for layer in net.layers for lut in layer)

    @pytest.mark.parametrize("scheme", ["random", "unique_random"])
    def test_feed_forward(self, scheme):
        """Test fanins only reference the previous layer."""
        net = build_topology(9, k=4, layers=3, luts_per_layer=6, scheme=scheme, seed=2)
        width = 9
        for layer in net.layers:
            for lut in layer:
                assert len(lut.fanins) == 4
                assert all(0 <= f < width for f in lut.fanins)
            width = len(layer)

    def test_unique_random_uses_every_input(self):
        """Test unique_random wiring touches every source before reusing one."""
        net = build_topology(10, k=2, layers=2, luts_per_layer=5, scheme="unique_random", seed=3)
        fanins = np.concatenate([lut.fanins for lut in net.layers[0]])
        assert sorted(fanins.tolist()) == list(range(10))

    @pytest.mark.parametrize("seed", range(20))
    def test_unique_random_fanins_are_distinct(self, seed):
        """Test no LUT reads the same source twice when decks run out mid-LUT."""
        net = build_topology(7, k=3, layers=3, luts_per_layer=9, scheme="unique_random", seed=seed)
        for layer in net.layers:
            for lut in layer:
                assert len(set(lut.fanins.tolist())) == 3

    def test_deterministic(self):
        """Test a fixed seed gives identical wiring."""
        first = build_topology(16, k=4, layers=3, luts_per_layer=8, seed=7)
        second = build_topology(16, k=4, layers=3, luts_per_layer=8, seed=7)
        for a, b in zip(first.layers, second.layers):
            assert [lut.fanins.tolist() for lut in a] == [lut.fanins.tolist() for lut in b]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"k": 0},
            {"layers": 0},
            {"luts_per_layer": 0},
            {"scheme": "ring"},
        ],
    )
    def test_invalid_topology(self, kwargs):
        """Test bad shapes and unknown schemes are rejected."""
        arguments = {"k": 2, "layers": 2, "luts_per_layer": 4, **kwargs}
        with pytest.raises(ModelConfigError):
            build_topology(6, **arguments)


class TestMemorize:
    """Tests for table fitting."""

    def test_full_width_lut_is_exact(self):
        """Test one LUT over all four inputs reproduces any function."""
        data = exhaustive_dataset(4, lambda row: (row[0] and row[3]) != row[1])
        net = build_topology(4, k=4, layers=1, luts_per_layer=1, scheme="unique_random")
        memorize(net, data)
        assert evaluate_lutnet(net, data) == 1.0

    def test_constant_labels(self):
        """Test all-zero labels give all-zero tables."""
        rows = truth_table_rows(5)
        data = Dataset.from_matrix(rows, np.zeros(len(rows), dtype=bool))
        net = train_lutnet(data, LutParams(k=2, layers=3, luts_per_layer=4))
        assert not any(any(table) for table in tables(net))

    def test_ties_take_global_majority(self):
        """Test a tied entry falls back to the majority label."""
        data = Dataset.from_matrix(
            np.array([[0, 0], [0, 1], [1, 0]], dtype=bool), np.array([0, 1, 1], dtype=bool)
        )
        net = build_topology(2, k=1, layers=1, luts_per_layer=1)
        net.layers[0][0].fanins = np.array([0])
        memorize(net, data)
        assert net.layers[0][0].table.tolist() == [True, True]

    def test_idempotent(self):
        """Test memorizing twice gives the same tables."""
        data = random_dataset(10, 300, seed=5)
        net = train_lutnet(data, LutParams(k=3, layers=3, luts_per_layer=16))
        before = tables(net)
        assert tables(memorize(net, data)) == before

    def test_predict_matches_vectorized(self):
        """Test single-row prediction agrees with the batch path."""
        data = random_dataset(8, 120, seed=6)
        net = train_lutnet(data, LutParams(k=3, layers=2, luts_per_layer=12))
        rows = truth_table_rows(8)[::7]
        assert [predict_lutnet(net, r) for r in rows] == net.predict_many(rows).astype(int).tolist()

    def test_empty_dataset(self):
        """Test memorization needs rows."""
        empty = Dataset.from_matrix(np.zeros((0, 3), dtype=bool), np.zeros(0, dtype=bool))
        with pytest.raises(EmptyDatasetError):
            memorize(build_topology(3, 2, 2, 2), empty)

    def test_width_mismatch(self, and2_data):
        """Test datasets and rows must match the input count."""
        net = build_topology(3, 2, 2, 2)
        with pytest.raises(WidthMismatchError):
            memorize(net, and2_data)
        with pytest.raises(WidthMismatchError):
            predict_lutnet(net, [0, 1])

    @pytest.mark.slow
    def test_parity_does_not_generalize(self):
        """Test default networks stay near chance on 16-input parity."""
        train, _, test = sample_splits(parse_benchmark("parity:k=16", seed=3))
        net = train_lutnet(to_dataset(train))
        assert 0.45 <= evaluate_lutnet(net, to_dataset(test)) <= 0.60

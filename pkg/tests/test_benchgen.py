"""Tests for benchmark families and split sampling."""

import logging

import pytest
from pydantic import ValidationError

from boolearn.benchgen import SYMMETRIC_PRESETS, oracle, parse_benchmark, sample_splits
from boolearn.core.errors import ModelConfigError, WidthMismatchError
from boolearn.schemas.bench import BenchmarkSpec, Family


def spec(family: Family, k: int, **kwargs) -> BenchmarkSpec:
    return BenchmarkSpec(family=family, k=k, **kwargs)


def split_rows(pla) -> set[str]:
    return {cube.inputs for cube in pla.cubes}


class TestOracle:
    """Tests for the benchmark functions."""

    def test_adder_msb(self):
        """Test 3 + 2 sets the carry bit of a 2-bit adder."""
        assert oracle(spec(Family.ADDER_MSB, 2), [1, 1, 0, 1]) == 1
        assert oracle(spec(Family.ADDER_MSB, 2), [1, 0, 0, 1]) == 0

    def test_adder_msb2(self):
        """Test the second bit from the top of the sum."""
        # 3 + 2 = 101, bit 1 is 0
        assert oracle(spec(Family.ADDER_MSB2, 2), [1, 1, 0, 1]) == 0
        assert oracle(spec(Family.ADDER_MSB2, 2), [0, 1, 0, 0]) == 1

    def test_comparator(self):
        """Test 2 > 1 and not 1 > 2."""
        assert oracle(spec(Family.COMPARATOR, 2), [0, 1, 1, 0]) == 1
        assert oracle(spec(Family.COMPARATOR, 2), [1, 0, 0, 1]) == 0
        assert oracle(spec(Family.COMPARATOR, 2), [1, 1, 1, 1]) == 0

    def test_multiplier(self):
        """Test 3 * 3 = 1001 for the top and middle bits."""
        assert oracle(spec(Family.MULTIPLIER_MSB, 2), [1, 1, 1, 1]) == 1
        assert oracle(spec(Family.MULTIPLIER_MID, 2), [1, 1, 1, 1]) == 0

    def test_parity(self):
        """Test 101 has even parity."""
        assert oracle(spec(Family.PARITY, 3), [1, 0, 1]) == 0
        assert oracle(spec(Family.PARITY, 3), [1, 1, 1]) == 1

    def test_symmetric(self):
        """Test the signature is indexed by the number of ones."""
        sym = spec(Family.SYMMETRIC, 3, signature="0110")
        assert [oracle(sym, bits) for bits in ([0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1])] == [
            0,
            1,
            1,
            0,
        ]

    def test_width_mismatch(self):
        """Test the input vector must match the family arity."""
        with pytest.raises(WidthMismatchError):
            oracle(spec(Family.COMPARATOR, 2), [0, 1])


class TestBenchmarkSpec:
    """Tests for benchmark validation and naming."""

    def test_input_counts(self):
        """Test two-word families double the width."""
        assert spec(Family.MULTIPLIER_MSB, 5).num_inputs == 10
        assert spec(Family.PARITY, 5).num_inputs == 5

    def test_symmetric_needs_signature(self):
        """Test a symmetric benchmark without a signature is invalid."""
        with pytest.raises(ValidationError):
            spec(Family.SYMMETRIC, 4)
        with pytest.raises(ValidationError):
            spec(Family.SYMMETRIC, 2, signature="01")

    def test_signature_only_for_symmetric(self):
        """Test other families refuse a signature."""
        with pytest.raises(ValidationError):
            spec(Family.PARITY, 2, signature="010")

    def test_names(self):
        """Test canonical benchmark names."""
        assert spec(Family.ADDER_MSB, 8).name == "adder_msb:k=8"
        assert spec(Family.SYMMETRIC, 2, signature="010").name == "symmetric:sig=010"


class TestParseBenchmark:
    """Tests for benchmark name resolution."""

    def test_family_name(self):
        """Test family:k=K names."""
        parsed = parse_benchmark("comparator:k=10", seed=3, samples_per_split=7)
        assert (parsed.family, parsed.k, parsed.seed, parsed.samples_per_split) == (
            Family.COMPARATOR,
            10,
            3,
            7,
        )

    @pytest.mark.parametrize("name", sorted(SYMMETRIC_PRESETS))
    def test_presets(self, name):
        """Test every preset is a 16-input symmetric function."""
        parsed = parse_benchmark(name)
        assert parsed.family == Family.SYMMETRIC
        assert parsed.num_inputs == 16
        assert parsed.signature == SYMMETRIC_PRESETS[name]

    def test_signature_name(self):
        """Test symmetric:sig=BITS names."""
        parsed = parse_benchmark("symmetric:sig=0110")
        assert (parsed.k, parsed.signature) == (3, "0110")

    @pytest.mark.parametrize(
        "name", ["adder", "divider:k=4", "parity:sig=010", "symmetric:k=4", "parity:k=x"]
    )
    def test_rejects_unknown_names(self, name):
        """Test malformed and unsupported names raise ModelConfigError."""
        with pytest.raises(ModelConfigError):
            parse_benchmark(name)


class TestSampleSplits:
    """Tests for care-set sampling."""

    def test_small_space_is_disjoint(self):
        """Test five samples per split over 4-input parity give 15 distinct rows."""
        train, valid, test = sample_splits(spec(Family.PARITY, 4, samples_per_split=5))
        rows = [split_rows(pla) for pla in (train, valid, test)]
        assert [len(r) for r in rows] == [5, 5, 5]
        assert len(rows[0] | rows[1] | rows[2]) == 15

    @pytest.mark.parametrize(
        "name", ["adder_msb:k=6", "adder_msb2:k=6", "multiplier_mid:k=5", "sym16_3"]
    )
    def test_labels_match_oracle(self, name):
        """Test every emitted row carries the oracle label."""
        bench = parse_benchmark(name, seed=2, samples_per_split=200)
        for pla in sample_splits(bench):
            assert pla.num_inputs == bench.num_inputs
            for cube in pla.cubes:
                assert cube.output == oracle(bench, [ch == "1" for ch in cube.inputs])

    def test_full_size_comparator(self):
        """Test three default splits of the 10-bit comparator are 19200 distinct rows."""
        splits = sample_splits(parse_benchmark("comparator:k=10"))
        assert [len(pla.cubes) for pla in splits] == [6400, 6400, 6400]
        assert len(set.union(*(split_rows(pla) for pla in splits))) == 19200

    def test_wide_inputs(self):
        """Test widths past the integer code limit still give distinct rows."""
        splits = sample_splits(parse_benchmark("multiplier_msb:k=40", samples_per_split=50))
        assert len(set.union(*(split_rows(pla) for pla in splits))) == 150

    def test_deterministic(self):
        """Test a fixed seed reproduces the splits."""
        bench = parse_benchmark("comparator:k=8", seed=5, samples_per_split=100)
        assert sample_splits(bench) == sample_splits(bench)

    def test_over_capacity_warns(self, caplog):
        """Test oversampling a small space logs a warning and still fills each split."""
        bench = spec(Family.PARITY, 3, samples_per_split=4)
        with caplog.at_level(logging.WARNING, logger="boolearn.benchgen"):
            train, valid, test = sample_splits(bench)
        assert "exceed" in caplog.text
        assert [len(split_rows(pla)) for pla in (train, valid, test)] == [4, 4, 4]

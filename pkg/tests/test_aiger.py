"""Tests for AIGER ASCII reading and writing."""

import pytest

from boolearn.core.errors import AigerFormatError
from boolearn.core.rng import make_rng
from boolearn.learners.cgp import decode, random_genome
from boolearn.models.aig import Aig
from boolearn.models.aiger import read_aag, write_aag
from tests.helpers import exhaustive_outputs, random_aig


class TestWriteAag:
    """Tests for write_aag."""

    def test_single_and(self):
        """Test the exact text of AND(a, b)."""
        aig = Aig(2)
        aig.output = aig.new_and(*aig.inputs())
        assert write_aag(aig) == "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n"

    def test_constant_false(self):
        """Test an empty circuit with a constant-false output."""
        assert write_aag(Aig(0)) == "aag 0 0 0 1 0\n0\n"

    def test_dead_nodes_dropped(self):
        """Test only the output cone is written."""
        aig = Aig(3)
        a, b, c = aig.inputs()
        aig.new_and(b, c)
        aig.output = aig.new_and(a, b) ^ 1
        assert write_aag(aig) == "aag 4 3 0 1 1\n2\n4\n6\n9\n8 2 4\n"


class TestReadAag:
    """Tests for read_aag."""

    def test_single_and(self):
        """Test reading AND(a, b)."""
        aig = read_aag("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n")
        assert aig.num_inputs == 2
        assert exhaustive_outputs(aig).tolist() == [False, False, False, True]

    def test_inverted_output(self):
        """Test a complemented output literal."""
        aig = read_aag("aag 3 2 0 1 1\n2\n4\n7\n6 3 5\n")
        assert exhaustive_outputs(aig).tolist() == [False, True, True, True]

    @pytest.mark.parametrize("seed", range(6))
    def test_round_trip_random(self, seed):
        """Test read_aag(write_aag(g)) simulates like g."""
        aig = random_aig(9, 70, seed=seed)
        again = read_aag(write_aag(aig))
        assert again.metrics() == aig.metrics()
        assert exhaustive_outputs(again).tolist() == exhaustive_outputs(aig).tolist()

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(1000))
    def test_round_trip_fuzzed(self, seed):
        """Test random circuits of every small shape survive a round trip."""
        aig = random_aig(1 + seed % 10, seed % 90, seed=seed)
        again = read_aag(write_aag(aig))
        assert again.metrics() == aig.metrics()
        assert exhaustive_outputs(again).tolist() == exhaustive_outputs(aig).tolist()

    def test_round_trip_decoded_genome(self):
        """Test a CGP-decoded circuit survives a round trip."""
        aig = decode(random_genome(6, 40, make_rng(7)))
        again = read_aag(write_aag(aig))
        assert exhaustive_outputs(again).tolist() == exhaustive_outputs(aig).tolist()

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "aig 3 2 0 1 1\n2\n4\n6\n6 2 4\n",
            "aag 3 2 0 1\n2\n4\n6\n6 2 4\n",
            "aag 3 2 1 1 1\n2\n4\n6 2\n6\n6 2 4\n",
            "aag 3 2 0 2 1\n2\n4\n6\n6\n6 2 4\n",
            "aag 3 2 0 1 1\n2\n4\n6\n",
            "aag 3 2 0 1 1\n2\n4\n6\n6 2 8\n",
            "aag 4 2 0 1 2\n2\n4\n8\n6 2 8\n8 2 4\n",
            "aag 3 2 0 1 1\n2\n2\n6\n6 2 4\n",
            "aag 3 2 0 1 1\n2\n4\n6\n6 2 x\n",
        ],
    )
    def test_malformed_rejected(self, text):
        """Test malformed or unsupported files raise AigerFormatError."""
        with pytest.raises(AigerFormatError):
            read_aag(text)

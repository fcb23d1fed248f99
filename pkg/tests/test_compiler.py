"""Tests for lowering learned models to AIGs."""

import numpy as np
import pytest

from boolearn.compiler import (
    approximate_majority,
    approximate_majority125,
    constant_aig,
    dt_to_aig,
    forest_to_aig,
    greater_equal_const,
    lutnet_to_aig,
    majority_literal,
    majority_to_aig,
    popcount_bits,
    sop_to_aig,
    symmetric_literal,
    symmetric_to_aig,
    tree_literal,
)
from boolearn.core.errors import ModelConfigError, WidthMismatchError
from boolearn.learners.dtree import (
    DecisionTree,
    FeatureRegistry,
    Leaf,
    Split,
    fringe_train,
    train_dt,
)
from boolearn.learners.espresso import Cover
from boolearn.learners.forest import train_rf
from boolearn.learners.lutnet import build_topology, memorize, train_lutnet
from boolearn.models.aig import FALSE, TRUE, Aig
from boolearn.models.aiger import write_aag
from boolearn.schemas.params import LutParams
from tests.helpers import exhaustive_outputs, random_dataset, simulate_rows, truth_table_rows


def with_output(aig: Aig, lit: int) -> Aig:
    aig.output = lit
    return aig


class TestSop:
    """Tests for sum-of-products lowering."""

    def test_single_cube(self):
        """Test one two-literal cube is a single AND."""
        aig = sop_to_aig(Cover(2, ["11"], []))
        assert aig.metrics() == (1, 1)
        assert exhaustive_outputs(aig).tolist() == [False, False, False, True]

    def test_empty_onset(self):
        """Test an empty onset compiles to constant false."""
        aig = sop_to_aig(Cover(3, [], ["000"]))
        assert aig.output == FALSE
        assert aig.metrics().and_nodes == 0

    def test_or_of_cubes(self):
        """Test dashes drop literals from their cube."""
        aig = sop_to_aig(Cover(3, ["1--", "-01"], []))
        rows = truth_table_rows(3)
        expected = rows[:, 0] | (~rows[:, 1] & rows[:, 2])
        assert exhaustive_outputs(aig).tolist() == expected.tolist()

    @pytest.mark.parametrize("seed", range(50))
    def test_random_covers(self, seed):
        """Test random covers against brute-force cube membership."""
        num_inputs = 3 + seed % 8
        rng = np.random.default_rng(seed)
        cubes = [
            "".join(rng.choice(["0", "1", "-"], size=num_inputs))
            for _ in range(int(rng.integers(1, 9)))
        ]
        rows = truth_table_rows(num_inputs)
        expected = [
            any(all(c == "-" or (c == "1") == bit for c, bit in zip(cube, row)) for cube in cubes)
            for row in rows
        ]
        assert exhaustive_outputs(sop_to_aig(Cover(num_inputs, cubes, []))).tolist() == expected


class TestTrees:
    """Tests for decision-tree lowering."""

    def test_leaf_is_constant(self):
        """Test a leaf-only tree costs no nodes."""
        tree = DecisionTree(3, FeatureRegistry(3), Leaf(1))
        aig = dt_to_aig(tree)
        assert aig.output == TRUE
        assert aig.metrics().and_nodes == 0

    def test_single_split_is_a_wire(self):
        """Test splitting on an input with constant leaves gives the input itself."""
        tree = DecisionTree(2, FeatureRegistry(2), Split(0, Leaf(0), Leaf(1)))
        aig = dt_to_aig(tree)
        assert aig.output == aig.input(0)
        assert aig.metrics() == (0, 0)

    @pytest.mark.parametrize("seed", range(50))
    def test_plain_tree_equivalence(self, seed):
        """Test the compiled tree agrees with the tree on every input."""
        num_inputs = 4 + seed % 7
        tree = train_dt(random_dataset(num_inputs, (1 << num_inputs) // 2, seed=seed))
        rows = truth_table_rows(num_inputs)
        assert exhaustive_outputs(dt_to_aig(tree)).tolist() == tree.predict_many(rows).tolist()

    def test_fringe_tree_equivalence(self, parity6_data):
        """Test composite features compile to their operators."""
        tree = fringe_train(parity6_data)
        assert tree.features.num_composites > 0
        rows = truth_table_rows(6)
        assert exhaustive_outputs(dt_to_aig(tree)).tolist() == tree.predict_many(rows).tolist()

    @pytest.mark.parametrize("seed", range(50))
    def test_random_fringe_tree_equivalence(self, seed):
        """Test fringe trees trained on random tables compile exactly."""
        num_inputs = 4 + seed % 5
        tree = fringe_train(random_dataset(num_inputs, (1 << num_inputs) // 2, seed=seed))
        rows = truth_table_rows(num_inputs)
        assert exhaustive_outputs(dt_to_aig(tree)).tolist() == tree.predict_many(rows).tolist()

    def test_width_mismatch(self):
        """Test the literal count must match the tree inputs."""
        tree = DecisionTree(2, FeatureRegistry(2), Leaf(0))
        aig = Aig(3)
        with pytest.raises(WidthMismatchError):
            tree_literal(aig, tree, aig.inputs())

    def test_deterministic(self):
        """Test compiling the same tree twice gives the same graph."""
        tree = train_dt(random_dataset(7, 60, seed=4))
        assert write_aag(dt_to_aig(tree)) == write_aag(dt_to_aig(tree))


class TestArithmetic:
    """Tests for counters, comparators and majority gates."""

    @pytest.mark.parametrize("n", range(1, 8))
    def test_popcount_bits(self, n):
        """Test the adder tree counts the true inputs."""
        aig = Aig(n)
        bits = popcount_bits(aig, aig.inputs())
        rows = truth_table_rows(n)
        value = np.zeros(len(rows), dtype=np.int64)
        for position, bit in enumerate(bits):
            aig.output = bit
            value += exhaustive_outputs(aig).astype(np.int64) << position
        assert value.tolist() == rows.sum(axis=1).tolist()

    @pytest.mark.parametrize("constant", range(18))
    def test_greater_equal_const(self, constant):
        """Test the comparison against every constant of a 4-bit word."""
        aig = Aig(4)
        aig.output = greater_equal_const(aig, aig.inputs(), constant)
        values = truth_table_rows(4).astype(np.int64) @ (1 << np.arange(4))
        assert exhaustive_outputs(aig).tolist() == (values >= constant).tolist()

    @pytest.mark.parametrize("n", [1, 3, 5, 17])
    def test_exact_majority(self, n):
        """Test majority against a direct count."""
        aig = Aig(n)
        aig.output = majority_to_aig(aig, aig.inputs())
        rows = truth_table_rows(n)
        assert exhaustive_outputs(aig).tolist() == (2 * rows.sum(axis=1) > n).tolist()

    def test_majority_needs_odd_count(self):
        """Test an even number of voters is rejected."""
        aig = Aig(4)
        with pytest.raises(ModelConfigError):
            majority_literal(aig, aig.inputs())

    def test_majority_pyramid(self):
        """Test the 25-input pyramid equals majority of group majorities."""
        aig = Aig(25)
        aig.output = approximate_majority(aig, aig.inputs())
        rows = np.random.default_rng(0).integers(0, 2, size=(2000, 25)).astype(bool)
        groups = rows.reshape(2000, 5, 5).sum(axis=2) >= 3
        expected = groups.sum(axis=1) >= 3
        assert simulate_rows(aig, rows).tolist() == expected.tolist()

    @pytest.mark.parametrize("n", [0, 7, 10])
    def test_pyramid_needs_power_of_five(self, n):
        """Test counts that are not powers of five are rejected."""
        aig = Aig(n)
        with pytest.raises(ModelConfigError):
            approximate_majority(aig, aig.inputs())

    def test_majority125_arity(self):
        """Test the three-level pyramid insists on 125 inputs."""
        aig = Aig(25)
        with pytest.raises(ModelConfigError):
            approximate_majority125(aig, aig.inputs())


class TestSymmetric:
    """Tests for symmetric-function lowering."""

    def test_xor(self):
        """Test signature 010 is two-input XOR."""
        assert exhaustive_outputs(symmetric_to_aig("010", 2)).tolist() == [0, 1, 1, 0]

    def test_and(self):
        """Test a single one at the top count is AND."""
        expected = [False] * 15 + [True]
        assert exhaustive_outputs(symmetric_to_aig("00001", 4)).tolist() == expected

    def test_sixteen_inputs(self):
        """Test a 16-input function fires only at its selected count."""
        signature = "0" * 7 + "1" + "0" * 9
        aig = symmetric_to_aig(signature, 16)
        assert aig.evaluate([1] * 7 + [0] * 9) == 1
        assert aig.evaluate([1] * 8 + [0] * 8) == 0
        assert aig.evaluate([0] * 16) == 0

    @pytest.mark.parametrize("seed", range(50))
    def test_random_signatures(self, seed):
        """Test random signatures against the popcount definition."""
        num_inputs = 1 + seed % 10
        rng = np.random.default_rng(seed)
        signature = "".join(rng.choice(["0", "1"], size=num_inputs + 1))
        rows = truth_table_rows(num_inputs)
        expected = [signature[c] == "1" for c in rows.sum(axis=1)]
        aig = symmetric_to_aig(signature, num_inputs)
        assert exhaustive_outputs(aig).tolist() == expected

    def test_signature_length(self):
        """Test the signature must have one entry per count."""
        with pytest.raises(WidthMismatchError):
            symmetric_to_aig("010", 3)

    def test_signature_characters(self):
        """Test only 0 and 1 are allowed in a signature."""
        aig = Aig(2)
        with pytest.raises(WidthMismatchError):
            symmetric_literal(aig, "0a0", aig.inputs())


class TestEnsembles:
    """Tests for forest and LUT network lowering."""

    def test_forest_equivalence(self):
        """Test seventeen compiled trees under majority match the forest."""
        forest = train_rf(random_dataset(8, 200, seed=1), n_trees=17)
        rows = truth_table_rows(8)
        assert exhaustive_outputs(forest_to_aig(forest)).tolist() == (
            forest.predict_many(rows).tolist()
        )

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(50))
    def test_random_forest_equivalence(self, seed):
        """Test forests of varying size compile to their majority vote."""
        num_inputs = 4 + seed % 7
        data = random_dataset(num_inputs, (1 << num_inputs) // 2, seed=seed)
        forest = train_rf(data, n_trees=1 + 2 * (seed % 4), max_depth=6, seed=seed)
        rows = truth_table_rows(num_inputs)
        assert exhaustive_outputs(forest_to_aig(forest)).tolist() == (
            forest.predict_many(rows).tolist()
        )

    def test_single_tree_forest(self):
        """Test a one-tree forest compiles like the tree itself."""
        forest = train_rf(random_dataset(6, 50, seed=2), n_trees=1, feature_fraction=1.0)
        from_forest = forest_to_aig(forest)
        from_tree = dt_to_aig(forest.trees[0])
        assert from_forest.metrics() == from_tree.metrics()
        assert exhaustive_outputs(from_forest).tolist() == exhaustive_outputs(from_tree).tolist()

    @pytest.mark.parametrize("minimize", [False, True])
    def test_lutnet_equivalence(self, minimize):
        """Test the compiled network agrees with the network on every input."""
        net = train_lutnet(
            random_dataset(8, 150, seed=3), LutParams(k=3, layers=3, luts_per_layer=8, seed=1)
        )
        rows = truth_table_rows(8)
        aig = lutnet_to_aig(net, minimize=minimize)
        assert exhaustive_outputs(aig).tolist() == net.predict_many(rows).tolist()

    @pytest.mark.parametrize("seed", range(50))
    def test_random_lutnet_equivalence(self, seed):
        """Test randomly shaped networks compile exactly, with and without minimization."""
        num_inputs = 4 + seed % 7
        params = LutParams(
            k=2 + seed % 3,
            layers=1 + seed % 3,
            luts_per_layer=4 + seed % 5,
            scheme="unique_random" if seed % 2 else "random",
            seed=seed,
        )
        net = train_lutnet(random_dataset(num_inputs, (1 << num_inputs) // 2, seed=seed), params)
        aig = lutnet_to_aig(net, minimize=seed % 4 >= 2)
        rows = truth_table_rows(num_inputs)
        assert exhaustive_outputs(aig).tolist() == net.predict_many(rows).tolist()

    def test_and_lut(self, and2_data):
        """Test a single AND table costs one node."""
        net = memorize(
            build_topology(2, k=2, layers=1, luts_per_layer=1, scheme="unique_random"), and2_data
        )
        aig = lutnet_to_aig(net)
        assert aig.metrics() == (1, 1)
        assert exhaustive_outputs(aig).tolist() == [False, False, False, True]

    def test_constant(self):
        """Test constant circuits have no nodes."""
        assert constant_aig(3, 1).output == TRUE
        assert constant_aig(3, 0).metrics() == (0, 0)

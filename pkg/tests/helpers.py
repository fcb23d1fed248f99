"""Oracles and builders shared by the test modules."""

from typing import Callable

import numpy as np

from boolearn.core.bits import pack_bits, unpack_bits
from boolearn.models.aig import Aig, negate_if
from boolearn.models.pla import Dataset


def truth_table_rows(num_inputs: int) -> np.ndarray:
    """Every input vector, row ``r`` has bit ``j`` of ``r`` in column ``j``."""
    codes = np.arange(1 << num_inputs)
    return ((codes[:, None] >> np.arange(num_inputs)) & 1).astype(bool)


def exhaustive_dataset(num_inputs: int, func: Callable[[np.ndarray], bool]) -> Dataset:
    """Complete care set of ``func`` over ``num_inputs`` inputs."""
    rows = truth_table_rows(num_inputs)
    return Dataset.from_matrix(rows, np.array([bool(func(row)) for row in rows]))


def random_dataset(num_inputs: int, rows: int, seed: int = 0) -> Dataset:
    """Distinct random rows with random labels."""
    rng = np.random.default_rng(seed)
    codes = rng.choice(1 << num_inputs, size=rows, replace=False)
    matrix = ((codes[:, None] >> np.arange(num_inputs)) & 1).astype(bool)
    return Dataset.from_matrix(matrix, rng.integers(0, 2, size=rows).astype(bool))


def simulate_rows(aig: Aig, rows: np.ndarray) -> np.ndarray:
    """Word-parallel output of ``aig`` for every row of ``rows``."""
    rows = np.asarray(rows, dtype=bool)
    return unpack_bits(aig.simulate(pack_bits(rows.T)), rows.shape[0])


def exhaustive_outputs(aig: Aig) -> np.ndarray:
    return simulate_rows(aig, truth_table_rows(aig.num_inputs))


def random_aig(num_inputs: int, num_ands: int, seed: int = 0) -> Aig:
    """Random structurally hashed AIG; the output is the last created literal."""
    rng = np.random.default_rng(seed)
    aig = Aig(num_inputs)
    lits = aig.inputs()
    for _ in range(num_ands):
        a, b = rng.choice(len(lits), size=2, replace=len(lits) < 2)
        lits.append(
            aig.new_and(
                negate_if(lits[a], rng.integers(0, 2)), negate_if(lits[b], rng.integers(0, 2))
            )
        )
    aig.output = negate_if(lits[-1], rng.integers(0, 2))
    return aig


def chain_aig(num_inputs: int, num_ands: int, seed: int = 0) -> Aig:
    """AIG with exactly ``num_ands`` reachable nodes.

    Every node reads the previous node and a random earlier literal.
    """
    rng = np.random.default_rng(seed)
    aig = Aig(num_inputs)
    lits = aig.inputs()
    previous = lits[0]
    for _ in range(num_ands):
        other = lits[int(rng.integers(0, len(lits)))]
        if other == previous:
            other = lits[0] if previous != lits[0] else lits[-1]
        previous = aig.new_and(
            negate_if(previous, rng.integers(0, 2)), negate_if(other, rng.integers(0, 2))
        )
        lits.append(previous)
    aig.output = previous
    return aig

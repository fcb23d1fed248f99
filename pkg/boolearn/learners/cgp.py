"""Cartesian Genetic Programming over single-row AND/XOR genomes.

Sources ``0..n-1`` are the primary inputs and source ``n + c`` is column ``c``. A
column may only read sources below ``n + c``. Every fanin and the output carry an
inverter bit.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from boolearn.core.bits import ALL_ONES, pack_bits, popcount, tail_mask
from boolearn.core.errors import EmptyDatasetError, ModelConfigError, WidthMismatchError
from boolearn.core.rng import make_rng
from boolearn.models.aig import Aig, lit_var, negate_if
from boolearn.models.pla import Dataset
from boolearn.schemas.params import CgpParams
from boolearn.schemas.report import EvolutionRecord

logger = logging.getLogger(__name__)

FUNC_AND = 0
FUNC_XOR = 1
SUCCESS_TARGET = 0.2


@dataclass
class CgpGenome:
    num_inputs: int
    func: np.ndarray
    src0: np.ndarray
    inv0: np.ndarray
    src1: np.ndarray
    inv1: np.ndarray
    out_src: int
    out_inv: int

    @property
    def num_columns(self) -> int:
        return int(self.func.shape[0])

    def copy(self) -> "CgpGenome":
        return CgpGenome(
            self.num_inputs,
            self.func.copy(),
            self.src0.copy(),
            self.inv0.copy(),
            self.src1.copy(),
            self.inv1.copy(),
            self.out_src,
            self.out_inv,
        )

    def is_valid(self) -> bool:
        limits = self.num_inputs + np.arange(self.num_columns)
        return bool(
            np.all((self.src0 >= 0) & (self.src0 < limits))
            and np.all((self.src1 >= 0) & (self.src1 < limits))
            and np.isin(self.func, (FUNC_AND, FUNC_XOR)).all()
            and 0 <= self.out_src < self.num_inputs + self.num_columns
        )

    def active(self) -> np.ndarray:
        """Columns reachable from the output, ascending."""
        n = self.num_inputs
        used = np.zeros(self.num_columns, dtype=bool)
        if self.out_src >= n:
            used[self.out_src - n] = True
        for c in range(self.num_columns - 1, -1, -1):
            if not used[c]:
                continue
            for src in (self.src0[c], self.src1[c]):
                if src >= n:
                    used[src - n] = True
        return np.flatnonzero(used)

    def phenotype_key(self, active: np.ndarray) -> bytes:
        fields = [self.func, self.src0, self.inv0, self.src1, self.inv1]
        body = b"".join(np.ascontiguousarray(f[active], dtype=np.int64).tobytes() for f in fields)
        output = int(self.out_src).to_bytes(8, "little") + bytes([int(self.out_inv)])
        return active.tobytes() + body + output


def _random_sources(rng: np.random.Generator, num_inputs: int, columns: np.ndarray) -> np.ndarray:
    return np.floor(rng.random(columns.shape[0]) * (num_inputs + columns)).astype(np.int64)


def random_genome(num_inputs: int, columns: int, rng: np.random.Generator) -> CgpGenome:
    """Genome with uniformly drawn genes."""
    if num_inputs < 1 or columns < 1:
        raise ModelConfigError("a genome needs at least one input and one column")
    index = np.arange(columns)
    return CgpGenome(
        num_inputs=num_inputs,
        func=rng.integers(0, 2, size=columns).astype(np.int8),
        src0=_random_sources(rng, num_inputs, index),
        inv0=rng.integers(0, 2, size=columns).astype(np.int8),
        src1=_random_sources(rng, num_inputs, index),
        inv1=rng.integers(0, 2, size=columns).astype(np.int8),
        out_src=int(rng.integers(0, num_inputs + columns)),
        out_inv=int(rng.integers(0, 2)),
    )


def encode_aig(
    aig: Aig, size_factor: float = 2.0, rng: Optional[np.random.Generator] = None
) -> CgpGenome:
    """Genome whose leading columns reproduce ``aig``; the rest is random padding.

    A constant output is an inverted or plain ``AND(x0, !x0)`` in column 0.
    """
    if size_factor < 1.0:
        raise ModelConfigError(f"size_factor must be >= 1, got {size_factor}")
    if aig.num_inputs < 1:
        raise ModelConfigError("cannot encode an AIG without inputs")
    rng = rng or make_rng(0)
    compact = aig.compact()
    n = compact.num_inputs
    constant = lit_var(compact.output) == 0
    count = 1 if constant else compact.num_ands
    genome = random_genome(n, max(1, math.ceil(size_factor * count)), rng)

    if constant:
        genome.func[0], genome.inv0[0], genome.inv1[0] = FUNC_AND, 0, 1
        genome.src0[0] = genome.src1[0] = 0
        genome.out_src, genome.out_inv = n, compact.output & 1
        return genome

    def source(var: int) -> int:
        return var - 1 if var <= n else n + (var - n - 1)

    for offset in range(compact.num_ands):
        f0, f1 = compact.fanins(n + 1 + offset)
        genome.func[offset] = FUNC_AND
        genome.src0[offset], genome.inv0[offset] = source(lit_var(f0)), f0 & 1
        genome.src1[offset], genome.inv1[offset] = source(lit_var(f1)), f1 & 1
    genome.out_src, genome.out_inv = source(lit_var(compact.output)), compact.output & 1
    return genome


def mutate(genome: CgpGenome, rate: float, rng: np.random.Generator) -> CgpGenome:
    """Resample every gene field and the output independently with probability ``rate``.

    A resampled field draws uniformly from its range, so it may keep its old value.
    """
    child = genome.copy()
    columns = child.num_columns
    index = np.arange(columns)
    n = child.num_inputs

    def hits() -> np.ndarray:
        return rng.random(columns) < rate

    def bits(mask: np.ndarray) -> np.ndarray:
        return rng.integers(0, 2, size=int(mask.sum()))

    mask = hits()
    child.func[mask] = bits(mask)
    for src, inv in ((child.src0, child.inv0), (child.src1, child.inv1)):
        mask = hits()
        src[mask] = _random_sources(rng, n, index[mask])
        mask = hits()
        inv[mask] = bits(mask)
    if rng.random() < rate:
        child.out_src = int(rng.integers(0, n + columns))
    if rng.random() < rate:
        child.out_inv = int(rng.integers(0, 2))
    return child


def decode(genome: CgpGenome) -> Aig:
    """Compile the phenotype; an XOR gene becomes three AND nodes."""
    aig = Aig(genome.num_inputs)
    n = genome.num_inputs
    lits = {i: aig.input(i) for i in range(n)}
    for c in genome.active():
        a = negate_if(lits[int(genome.src0[c])], genome.inv0[c])
        b = negate_if(lits[int(genome.src1[c])], genome.inv1[c])
        lits[n + int(c)] = aig.new_xor(a, b) if genome.func[c] == FUNC_XOR else aig.new_and(a, b)
    aig.output = negate_if(lits[genome.out_src], genome.out_inv)
    return aig.compact()


class _Batch:
    """Column-packed rows used to score genomes word-parallel."""

    def __init__(self, matrix: np.ndarray, labels: np.ndarray):
        self.size = int(labels.shape[0])
        self.blocks = pack_bits(matrix.T)
        self.labels = pack_bits(labels)
        self.mask = tail_mask(self.size)

    def accuracy(self, genome: CgpGenome, active: np.ndarray) -> float:
        n = genome.num_inputs
        values = np.empty((n + genome.num_columns, self.blocks.shape[1]), dtype=np.uint64)
        values[:n] = self.blocks
        zero = np.uint64(0)
        for c in active:
            a = values[genome.src0[c]] ^ (ALL_ONES if genome.inv0[c] else zero)
            b = values[genome.src1[c]] ^ (ALL_ONES if genome.inv1[c] else zero)
            values[n + c] = (a ^ b) if genome.func[c] == FUNC_XOR else (a & b)
        out = values[genome.out_src] ^ (ALL_ONES if genome.out_inv else zero)
        correct = popcount(~(out ^ self.labels) & self.mask)
        return float(correct) / self.size

    def accuracy_of(self, aig: Aig) -> float:
        out = aig.simulate(self.blocks)
        return float(popcount(~(out ^ self.labels) & self.mask)) / self.size


def evolve(
    data: Dataset,
    init: CgpGenome,
    params: Optional[CgpParams] = None,
    trace: Optional[list[EvolutionRecord]] = None,
    select_on: Optional[Dataset] = None,
) -> CgpGenome:
    """(1 + lambda) evolution strategy with 1/5th-rule mutation control.

    Children win ties against the parent and larger phenotypes win ties among equals.
    Returns the most accurate genome seen on ``select_on`` (default ``data``); ``init``
    is only replaced by a strictly better one.
    """
    params = params or CgpParams()
    if len(data) == 0:
        raise EmptyDatasetError("cannot evolve on an empty dataset")
    if data.num_inputs != init.num_inputs:
        raise WidthMismatchError(
            f"genome has {init.num_inputs} inputs, data has {data.num_inputs}"
        )
    if select_on is not None and select_on.num_inputs != init.num_inputs:
        raise WidthMismatchError(
            f"genome has {init.num_inputs} inputs, selection data has {select_on.num_inputs}"
        )
    rng = make_rng(params.seed)
    matrix, labels = data.matrix, data.labels
    rows = len(data)
    batch_size = min(params.batch_size, rows)
    full = _Batch(matrix, labels)
    judge = full if select_on is None else _Batch(select_on.matrix, select_on.labels)

    def draw() -> _Batch:
        if batch_size >= rows:
            return full
        picks = np.sort(rng.choice(rows, size=batch_size, replace=False))
        return _Batch(matrix[picks], labels[picks])

    batch = draw()
    parent = init
    parent_active = parent.active()
    parent_key = parent.phenotype_key(parent_active)
    parent_fit = batch.accuracy(parent, parent_active)
    best = parent
    best_score = parent_fit if batch is judge else judge.accuracy(parent, parent_active)
    rate = params.mutation_rate
    successes = 0

    for generation in range(1, params.generations + 1):
        if batch is not full and generation > 1 and (generation - 1) % params.change_each == 0:
            batch = draw()
            parent_fit = batch.accuracy(parent, parent_active)

        winner = (parent_fit, 0, len(parent_active), 0)
        chosen = (parent, parent_active, parent_key)
        improved = False
        for index in range(1, params.offspring + 1):
            child = mutate(parent, rate, rng)
            active = child.active()
            key = child.phenotype_key(active)
            fit = parent_fit if key == parent_key else batch.accuracy(child, active)
            improved |= fit > parent_fit
            rank = (fit, 1, len(active), -index)
            if rank > winner:
                winner, chosen = rank, (child, active, key)
        successes += int(improved)

        changed = chosen[2] != parent_key
        parent, parent_active, parent_key = chosen
        parent_fit = winner[0]
        if changed:
            score = parent_fit if batch is judge else judge.accuracy(parent, parent_active)
            if score > best_score:
                best, best_score = parent, score

        if generation % params.window == 0:
            share = successes / params.window
            if share > SUCCESS_TARGET:
                rate *= params.adapt_factor
            elif share < SUCCESS_TARGET:
                rate /= params.adapt_factor
            rate = min(max(rate, params.min_rate), params.max_rate)
            successes = 0
            logger.debug(
                "Generation %d: success share %.2f, mutation rate %.5f", generation, share, rate
            )

        if trace is not None:
            trace.append(
                EvolutionRecord(
                    generation=generation,
                    fitness=parent_fit,
                    phenotype_size=len(parent_active),
                    mutation_rate=rate,
                )
            )

    logger.info("CGP finished %d generations, best accuracy %.4f", params.generations, best_score)
    return best


def train_cgp(
    data: Dataset,
    seed_aig: Optional[Aig] = None,
    params: Optional[CgpParams] = None,
    trace: Optional[list[EvolutionRecord]] = None,
) -> tuple[Aig, bool]:
    """Evolve a circuit, bootstrapping from ``seed_aig`` when it is accurate enough.

    A bootstrapped run evolves on a seeded ``bootstrap_share`` of the rows with fitness on
    that whole share, and keeps the genome most accurate on every row, so it never ends
    below the seed. A random start uses every row with rotating mini-batches. Returns the
    decoded circuit and whether it was bootstrapped.
    """
    params = params or CgpParams()
    if len(data) == 0:
        raise EmptyDatasetError("cannot evolve on an empty dataset")
    rng = make_rng(params.seed)
    bootstrapped = False
    if seed_aig is not None and seed_aig.num_inputs >= 1:
        seed_acc = _Batch(data.matrix, data.labels).accuracy_of(seed_aig)
        bootstrapped = seed_acc >= params.bootstrap_gate
    if bootstrapped:
        init = encode_aig(seed_aig, params.size_factor, rng)
        share = max(1, math.ceil(params.bootstrap_share * len(data)))
        picks = np.sort(rng.choice(len(data), size=share, replace=False))
        subset = data.subset(picks)
        run = params.model_copy(update={"batch_size": len(subset)})
        best = evolve(subset, init, run, trace, select_on=data)
    else:
        init = random_genome(data.num_inputs, params.random_columns, rng)
        best = evolve(data, init, params, trace)
    return decode(best), bootstrapped

"""And-Inverter Graphs.

Literals follow the AIGER convention: variable ``v`` is encoded as ``2*v`` and its
complement as ``2*v + 1``. Variable 0 is the constant, variables ``1..I`` are the
primary inputs and AND nodes follow in creation order, so every node only references
smaller ids.
"""

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np

from boolearn.core.bits import ALL_ONES, num_words, popcount, random_words, tail_mask
from boolearn.core.errors import LiteralRangeError, WidthMismatchError
from boolearn.core.rng import make_rng

logger = logging.getLogger(__name__)

FALSE = 0
TRUE = 1

DEFAULT_PATTERNS = 4096
DEFAULT_LEVEL_EXCLUSION = 5


def negate(lit: int) -> int:
    """Complement of a literal."""
    return lit ^ 1


def negate_if(lit: int, condition) -> int:
    """Complement ``lit`` when ``condition`` is set."""
    return lit ^ int(bool(condition))


def lit_var(lit: int) -> int:
    """Variable index of a literal."""
    return lit >> 1


def is_negated(lit: int) -> bool:
    """Whether a literal is complemented."""
    return bool(lit & 1)


def const_lit(value) -> int:
    """Constant literal for a truth value."""
    return TRUE if value else FALSE


class AigMetrics(NamedTuple):
    and_nodes: int
    levels: int


class Aig:
    """Structurally hashed AND graph with complemented edges and a single output."""

    def __init__(self, num_inputs: int):
        if num_inputs < 0:
            raise WidthMismatchError("number of inputs must be non-negative")
        self.num_inputs = num_inputs
        self._fanins: list[tuple[int, int]] = []
        self._strash: dict[tuple[int, int], int] = {}
        self._output = FALSE
        self._groups: Optional[list[np.ndarray]] = None

    # construction

    @property
    def max_var(self) -> int:
        return self.num_inputs + len(self._fanins)

    @property
    def num_ands(self) -> int:
        """Stored AND nodes, dead ones included."""
        return len(self._fanins)

    def input(self, index: int) -> int:
        """Literal of primary input ``index``."""
        if not 0 <= index < self.num_inputs:
            raise LiteralRangeError(f"input {index} out of range")
        return 2 * (index + 1)

    def inputs(self) -> list[int]:
        """Literals of every primary input."""
        return [2 * (i + 1) for i in range(self.num_inputs)]

    def is_and(self, var: int) -> bool:
        return var > self.num_inputs

    def fanins(self, var: int) -> tuple[int, int]:
        """Fanin literals of AND variable ``var``."""
        return self._fanins[var - self.num_inputs - 1]

    def _check(self, lit: int) -> None:
        if lit < 0 or lit_var(lit) > self.max_var:
            raise LiteralRangeError(f"literal {lit} references an unknown node")

    def new_and(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if a > b:
            a, b = b, a
        if a == FALSE:
            return FALSE
        if a == TRUE or a == b:
            return b
        if a == negate(b):
            return FALSE
        key = (a, b)
        var = self._strash.get(key)
        if var is None:
            self._fanins.append(key)
            var = self.max_var
            self._strash[key] = var
            self._groups = None
        return 2 * var

    def new_or(self, a: int, b: int) -> int:
        """OR through De Morgan."""
        return negate(self.new_and(negate(a), negate(b)))

    def new_xor(self, a: int, b: int) -> int:
        """XOR as three AND nodes."""
        return self.new_or(self.new_and(a, negate(b)), self.new_and(negate(a), b))

    def new_mux(self, sel: int, hi: int, lo: int) -> int:
        return self.new_or(self.new_and(sel, hi), self.new_and(negate(sel), lo))

    def new_and_many(self, lits: Sequence[int]) -> int:
        """Balanced conjunction; the empty conjunction is TRUE."""
        lits = list(lits)
        if not lits:
            return TRUE
        while len(lits) > 1:
            paired = [self.new_and(lits[i], lits[i + 1]) for i in range(0, len(lits) - 1, 2)]
            if len(lits) % 2:
                paired.append(lits[-1])
            lits = paired
        return lits[0]

    def new_or_many(self, lits: Sequence[int]) -> int:
        return negate(self.new_and_many([negate(lit) for lit in lits]))

    @property
    def output(self) -> int:
        return self._output

    @output.setter
    def output(self, lit: int) -> None:
        self._check(lit)
        self._output = lit
        self._groups = None

    # structure

    def reachable(self) -> list[int]:
        """AND variables in the output cone, ascending."""
        seen: set[int] = set()
        stack = [lit_var(self._output)]
        while stack:
            var = stack.pop()
            if var in seen or not self.is_and(var):
                continue
            seen.add(var)
            f0, f1 = self.fanins(var)
            stack.append(lit_var(f0))
            stack.append(lit_var(f1))
        return sorted(seen)

    def node_levels(self, nodes: Optional[list[int]] = None) -> np.ndarray:
        """Level of every variable; constants and inputs sit at level 0."""
        levels = np.zeros(self.max_var + 1, dtype=np.int64)
        for var in self.reachable() if nodes is None else nodes:
            f0, f1 = self.fanins(var)
            levels[var] = 1 + max(levels[lit_var(f0)], levels[lit_var(f1)])
        return levels

    def metrics(self) -> AigMetrics:
        """Reachable AND nodes and logic levels."""
        nodes = self.reachable()
        levels = self.node_levels(nodes)
        return AigMetrics(and_nodes=len(nodes), levels=int(levels[lit_var(self._output)]))

    def output_distances(self) -> dict[int, int]:
        """Shortest number of AND hops from the output driver to every reachable node."""
        nodes = self.reachable()
        if not nodes:
            return {}
        distance = {lit_var(self._output): 0}
        for var in reversed(nodes):
            here = distance[var] + 1
            for lit in self.fanins(var):
                child = lit_var(lit)
                if self.is_and(child) and distance.get(child, here) >= here:
                    distance[child] = here
        return distance

    # evaluation

    def evaluate(self, bits: Sequence[int]) -> int:
        """Scalar, pattern-at-a-time evaluation."""
        if len(bits) != self.num_inputs:
            raise WidthMismatchError(f"expected {self.num_inputs} input bits, got {len(bits)}")
        values = [0] * (self.max_var + 1)
        for i, bit in enumerate(bits):
            values[i + 1] = int(bool(bit))
        for var in self.reachable():
            f0, f1 = self.fanins(var)
            values[var] = (values[lit_var(f0)] ^ (f0 & 1)) & (values[lit_var(f1)] ^ (f1 & 1))
        return values[lit_var(self._output)] ^ (self._output & 1)

    def _level_groups(self) -> list[np.ndarray]:
        if self._groups is None:
            nodes = self.reachable()
            if not nodes:
                self._groups = []
            else:
                order = np.asarray(nodes, dtype=np.int64)
                levels = self.node_levels(nodes)[order]
                sort = np.argsort(levels, kind="stable")
                _, starts = np.unique(levels[sort], return_index=True)
                self._groups = np.split(order[sort], starts[1:])
        return self._groups

    def simulate_nodes(self, blocks: np.ndarray) -> np.ndarray:
        """Word-parallel values of every variable, shape (max_var + 1, words)."""
        blocks = np.asarray(blocks, dtype=np.uint64)
        if blocks.ndim != 2 or blocks.shape[0] != self.num_inputs:
            raise WidthMismatchError(
                f"expected {self.num_inputs} input blocks, got shape {blocks.shape}"
            )
        values = np.zeros((self.max_var + 1, blocks.shape[1]), dtype=np.uint64)
        values[1 : self.num_inputs + 1] = blocks
        if not self._fanins:
            return values
        fanins = np.asarray(self._fanins, dtype=np.int64)
        for group in self._level_groups():
            pairs = fanins[group - self.num_inputs - 1]
            left = values[pairs[:, 0] >> 1] ^ _complement_masks(pairs[:, 0])
            right = values[pairs[:, 1] >> 1] ^ _complement_masks(pairs[:, 1])
            values[group] = left & right
        return values

    def simulate(self, blocks: np.ndarray) -> np.ndarray:
        """Output words for packed input patterns (one row of words per input)."""
        values = self.simulate_nodes(blocks)
        out = values[lit_var(self._output)]
        return ~out if is_negated(self._output) else out

    # rebuilding

    def _rebuild_pass(self, substitution: dict[int, int]) -> "Aig":
        result = Aig(self.num_inputs)
        mapping = {0: FALSE}
        for i in range(self.num_inputs):
            mapping[i + 1] = 2 * (i + 1)

        def translate(lit: int) -> int:
            return mapping[lit_var(lit)] ^ (lit & 1)

        for var in self.reachable():
            if var in substitution:
                mapping[var] = substitution[var]
                continue
            f0, f1 = self.fanins(var)
            mapping[var] = result.new_and(translate(f0), translate(f1))
        result.output = translate(self._output)
        return result

    def rebuild(self, substitution: Optional[dict[int, int]] = None) -> "Aig":
        """Copy keeping only the output cone, with ``substitution`` applied.

        ``substitution`` maps AND variables to constant or input literals.
        """
        result = self._rebuild_pass(substitution or {})
        if len(result.reachable()) != result.num_ands:
            result = result._rebuild_pass({})
        return result

    def compact(self) -> "Aig":
        """Copy holding only the nodes reachable from the output."""
        return self.rebuild()

    def __repr__(self) -> str:
        return f"Aig(inputs={self.num_inputs}, ands={self.num_ands}, output={self._output})"


def _complement_masks(lits: np.ndarray) -> np.ndarray:
    return np.where(lits & 1, ALL_ONES, np.uint64(0)).astype(np.uint64)[:, None]


def approximate_to_budget(
    aig: Aig,
    budget: int,
    patterns: int = DEFAULT_PATTERNS,
    level_exclusion: int = DEFAULT_LEVEL_EXCLUSION,
    seed: int = 0,
    trace: Optional[list[int]] = None,
) -> Aig:
    """Replace the most constant-like node by a constant until ``budget`` is met.

    One node is replaced per round. Nodes closer than ``level_exclusion`` AND hops
    to the output are skipped; when that leaves nothing to pick the threshold is
    lowered.
    """
    if budget < 0 or patterns < 1:
        raise ValueError("budget must be >= 0 and patterns >= 1")
    rng = make_rng(seed)
    current = aig.compact()
    mask = tail_mask(patterns)
    exclusion = max(0, level_exclusion)
    start = current.num_ands
    while current.num_ands > budget:
        blocks = random_words(rng, (current.num_inputs, num_words(patterns)))
        ones = popcount(current.simulate_nodes(blocks) & mask, axis=1)
        distance = current.output_distances()
        while True:
            candidates = np.array(
                sorted(var for var, d in distance.items() if d >= exclusion), dtype=np.int64
            )
            if candidates.size:
                break
            exclusion -= 1
            logger.debug("No candidates left, lowering level exclusion to %d", exclusion)
        cand_ones = ones[candidates]
        skew = np.maximum(cand_ones, patterns - cand_ones)
        best = int(np.argmax(skew))
        var = int(candidates[best])
        constant = TRUE if 2 * int(cand_ones[best]) > patterns else FALSE
        current = current.rebuild({var: constant})
        logger.debug("Replaced node %d by %d, %d nodes left", var, constant, current.num_ands)
        if trace is not None:
            trace.append(current.num_ands)
    if current.num_ands != start:
        logger.info(
            "Approximated AIG from %d to %d nodes (budget %d)", start, current.num_ands, budget
        )
    return current

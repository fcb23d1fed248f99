"""Lowering of learned models to And-Inverter Graphs.

Every builder works on an existing :class:`Aig` and returns a literal, so models can be
combined (trees under a majority gate, LUTs feeding LUTs). The ``*_to_aig`` functions
wrap them into a fresh graph with the result as output.
"""

import logging
from typing import Sequence

from boolearn.core.errors import ModelConfigError, WidthMismatchError
from boolearn.learners import espresso
from boolearn.learners.dtree import DecisionTree, Leaf, Node
from boolearn.learners.espresso import Cover
from boolearn.learners.forest import Forest
from boolearn.learners.lutnet import LutNetwork
from boolearn.models.aig import FALSE, TRUE, Aig, const_lit, negate_if

logger = logging.getLogger(__name__)

MAJ5_ARITY = 5


def cube_literal(aig: Aig, cube: str, lits: Sequence[int]) -> int:
    """AND of the literals selected by ``cube`` (``-`` positions are skipped)."""
    terms = [negate_if(lits[i], ch == "0") for i, ch in enumerate(cube) if ch != "-"]
    return aig.new_and_many(terms)


def sop_literal(aig: Aig, cubes: Sequence[str], lits: Sequence[int]) -> int:
    """OR of the cube products."""
    return aig.new_or_many([cube_literal(aig, cube, lits) for cube in cubes])


def sop_to_aig(cover: Cover) -> Aig:
    """OR of one AND-of-literals per onset cube; an empty onset is constant false."""
    aig = Aig(cover.num_inputs)
    aig.output = sop_literal(aig, cover.onset, aig.inputs())
    return aig


def table_literal(aig: Aig, table: Sequence[int], lits: Sequence[int]) -> int:
    """Truth table over ``lits``; entry ``addr`` has bit ``j`` set when ``lits[j]`` is true."""
    width = len(lits)
    cubes = [
        "".join("1" if (addr >> j) & 1 else "0" for j in range(width))
        for addr, bit in enumerate(table)
        if bit
    ]
    if len(cubes) == len(table):
        return TRUE
    return sop_literal(aig, cubes, lits)


# decision trees


def feature_literals(aig: Aig, tree: DecisionTree, input_lits: Sequence[int]) -> dict[int, int]:
    """Literal for every registered feature, composites built from their operands."""
    lits: dict[int, int] = {}
    registry = tree.features
    for fid in range(len(registry)):
        feature = registry[fid]
        if feature.is_input:
            lits[fid] = input_lits[feature.index]
        else:
            # operator tables are indexed 2a + b, table_literal expects bit 0 = first literal
            table = feature.op.table
            lits[fid] = table_literal(
                aig, (table[0], table[2], table[1], table[3]), (lits[feature.a], lits[feature.b])
            )
    return lits


def tree_literal(aig: Aig, tree: DecisionTree, input_lits: Sequence[int]) -> int:
    """One multiplexer per split, constants at the leaves."""
    if len(input_lits) != tree.num_inputs:
        raise WidthMismatchError(f"expected {tree.num_inputs} literals, got {len(input_lits)}")
    used = tree.used_features()
    lits = feature_literals(aig, tree, input_lits) if used else {}

    def build(node: Node) -> int:
        if isinstance(node, Leaf):
            return const_lit(node.label)
        return aig.new_mux(lits[node.feature], build(node.hi), build(node.lo))

    return build(tree.root)


def dt_to_aig(tree: DecisionTree) -> Aig:
    """Circuit computing the tree."""
    aig = Aig(tree.num_inputs)
    aig.output = tree_literal(aig, tree, aig.inputs())
    return aig


# arithmetic


def half_adder(aig: Aig, a: int, b: int) -> tuple[int, int]:
    """Sum and carry of two bits."""
    return aig.new_xor(a, b), aig.new_and(a, b)


def full_adder(aig: Aig, a: int, b: int, c: int) -> tuple[int, int]:
    """Sum and carry of three bits."""
    ab = aig.new_xor(a, b)
    total = aig.new_xor(ab, c)
    carry = aig.new_or(aig.new_and(a, b), aig.new_and(c, ab))
    return total, carry


def add_numbers(aig: Aig, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Ripple-carry sum of two LSB-first numbers; one bit wider than the wider operand."""
    width = max(len(a), len(b))
    a = list(a) + [FALSE] * (width - len(a))
    b = list(b) + [FALSE] * (width - len(b))
    result = []
    carry = FALSE
    for x, y in zip(a, b):
        bit, carry = full_adder(aig, x, y, carry)
        result.append(bit)
    result.append(carry)
    return result


def popcount_bits(aig: Aig, lits: Sequence[int]) -> list[int]:
    """Binary count of true literals, LSB first, built as a balanced adder tree."""
    lits = list(lits)
    if not lits:
        return []
    if len(lits) == 1:
        return lits
    if len(lits) == 2:
        return list(half_adder(aig, lits[0], lits[1]))
    if len(lits) == 3:
        return list(full_adder(aig, *lits))
    half = len(lits) // 2
    total = add_numbers(aig, popcount_bits(aig, lits[:half]), popcount_bits(aig, lits[half:]))
    width = len(lits).bit_length()
    return total[:width]


def greater_equal_const(aig: Aig, bits: Sequence[int], constant: int) -> int:
    """Literal for ``value(bits) >= constant`` with ``bits`` LSB first."""
    if constant <= 0:
        return TRUE
    if constant >> len(bits):
        return FALSE
    ge = TRUE
    for i, bit in enumerate(bits):
        if (constant >> i) & 1:
            ge = aig.new_and(bit, ge)
        else:
            ge = aig.new_or(bit, ge)
    return ge


def majority_literal(aig: Aig, lits: Sequence[int]) -> int:
    """Exact majority of an odd number of literals (popcount against a threshold)."""
    if len(lits) % 2 == 0:
        raise ModelConfigError(f"majority needs an odd number of inputs, got {len(lits)}")
    return greater_equal_const(aig, popcount_bits(aig, lits), len(lits) // 2 + 1)


def majority_to_aig(aig: Aig, lits: Sequence[int]) -> int:
    """Exact majority of an odd number of literals."""
    return majority_literal(aig, lits)


def approximate_majority(aig: Aig, lits: Sequence[int]) -> int:
    """Pyramid of 5-input majority gates over ``5**d`` literals.

    Approximates the wide majority; exact only for five inputs.
    """
    lits = list(lits)
    count = len(lits)
    if count < 1:
        raise ModelConfigError("majority pyramid needs at least one input")
    while count % MAJ5_ARITY == 0:
        count //= MAJ5_ARITY
    if count != 1:
        raise ModelConfigError(f"majority pyramid needs a power of five inputs, got {len(lits)}")
    while len(lits) > 1:
        lits = [
            majority_literal(aig, lits[i : i + MAJ5_ARITY]) for i in range(0, len(lits), MAJ5_ARITY)
        ]
    return lits[0]


def approximate_majority125(aig: Aig, lits: Sequence[int]) -> int:
    """MAJ5 pyramid over 125 literals."""
    if len(lits) != MAJ5_ARITY**3:
        raise ModelConfigError(f"expected 125 inputs, got {len(lits)}")
    return approximate_majority(aig, lits)


# symmetric functions


def symmetric_literal(aig: Aig, signature: str, lits: Sequence[int]) -> int:
    """``signature[popcount(lits)]`` via a multiplexer tree over the count bits."""
    if len(signature) != len(lits) + 1 or set(signature) - {"0", "1"}:
        raise WidthMismatchError(
            f"signature must be a bit string of length {len(lits) + 1}, got '{signature}'"
        )
    bits = popcount_bits(aig, lits)
    values = [int(ch) for ch in signature]

    def select(position: int, base: int) -> int:
        if base >= len(values):
            return FALSE
        if position < 0:
            return const_lit(values[base])
        lo = select(position - 1, base)
        hi = select(position - 1, base + (1 << position))
        return aig.new_mux(bits[position], hi, lo)

    return select(len(bits) - 1, 0)


def symmetric_to_aig(signature: str, num_inputs: int) -> Aig:
    """Circuit of the symmetric function with the given signature."""
    if len(signature) != num_inputs + 1:
        raise WidthMismatchError(
            f"signature length {len(signature)} does not match {num_inputs} inputs"
        )
    aig = Aig(num_inputs)
    aig.output = symmetric_literal(aig, signature, aig.inputs())
    return aig


# ensembles and LUT networks


def forest_to_aig(forest: Forest) -> Aig:
    """Every tree compiled separately, combined by an exact majority gate."""
    aig = Aig(forest.num_inputs)
    inputs = aig.inputs()
    aig.output = majority_literal(aig, [tree_literal(aig, tree, inputs) for tree in forest.trees])
    return aig


def _lut_cubes(table, width: int, minimize: bool) -> list[str]:
    minterms = [
        "".join("1" if (addr >> j) & 1 else "0" for j in range(width)) for addr in range(len(table))
    ]
    onset = [m for m, bit in zip(minterms, table) if bit]
    if not minimize or not onset:
        return onset
    offset = [m for m, bit in zip(minterms, table) if not bit]
    return espresso.minimize(Cover(width, onset, offset)).onset


def lutnet_to_aig(net: LutNetwork, minimize: bool = False) -> Aig:
    """Compile the LUTs the output depends on, from the output back to the inputs.

    With ``minimize`` each table is reduced by expand and irredundant before SOP
    construction.
    """
    aig = Aig(net.num_inputs)
    inputs = aig.inputs()
    memo: dict[tuple[int, int], int] = {}

    def lut_lit(layer: int, index: int) -> int:
        key = (layer, index)
        if key in memo:
            return memo[key]
        lut = net.layers[layer][index]
        if layer == 0:
            sources = [inputs[int(f)] for f in lut.fanins]
        else:
            sources = [lut_lit(layer - 1, int(f)) for f in lut.fanins]
        if lut.table.all():
            lit = TRUE
        else:
            lit = sop_literal(aig, _lut_cubes(lut.table, len(sources), minimize), sources)
        memo[key] = lit
        return lit

    aig.output = lut_lit(len(net.layers) - 1, 0)
    logger.debug(
        "Compiled LUT network: %d of %d LUTs used, %d AND nodes",
        len(memo),
        net.num_luts,
        aig.num_ands,
    )
    return aig


def constant_aig(num_inputs: int, value: int) -> Aig:
    """Circuit with a constant output."""
    aig = Aig(num_inputs)
    aig.output = const_lit(value)
    return aig

"""Binary decision trees over Boolean features.

Splits maximize information gain (base 2). When the best gain falls below the
decomposition threshold a functional-decomposition test may pick the split instead.
Fringe training adds composite features of two variables read off the leaves of the
previous tree and retrains.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from boolearn.core.errors import EmptyDatasetError, ModelConfigError, WidthMismatchError
from boolearn.learners.espresso import Cover
from boolearn.models.pla import Dataset
from boolearn.schemas.params import DtParams

logger = logging.getLogger(__name__)


class FringeOp(str, Enum):
    """The 12 composite operators. Tables are indexed by 2*a + b."""

    AND = "AND"
    OR = "OR"
    NAND = "NAND"
    NOR = "NOR"
    XOR = "XOR"
    XNOR = "XNOR"
    AND_NOT_L = "AND-NOT-L"
    AND_NOT_R = "AND-NOT-R"
    OR_NOT_L = "OR-NOT-L"
    OR_NOT_R = "OR-NOT-R"
    NOT_A_AND_NOT_B = "NOT-A-AND-NOT-B"
    NOT_A_OR_NOT_B = "NOT-A-OR-NOT-B"

    @property
    def table(self) -> tuple[int, int, int, int]:
        return OP_TABLES[self]

    def apply(self, a, b):
        """Vectorized evaluation on boolean arrays (or plain bits)."""
        table = np.array(self.table, dtype=bool)
        return table[2 * np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)]


OP_TABLES: dict[FringeOp, tuple[int, int, int, int]] = {
    FringeOp.AND: (0, 0, 0, 1),
    FringeOp.OR: (0, 1, 1, 1),
    FringeOp.NAND: (1, 1, 1, 0),
    FringeOp.NOR: (1, 0, 0, 0),
    FringeOp.XOR: (0, 1, 1, 0),
    FringeOp.XNOR: (1, 0, 0, 1),
    FringeOp.AND_NOT_L: (0, 1, 0, 0),
    FringeOp.AND_NOT_R: (0, 0, 1, 0),
    FringeOp.OR_NOT_L: (1, 1, 0, 1),
    FringeOp.OR_NOT_R: (1, 0, 1, 1),
    FringeOp.NOT_A_AND_NOT_B: (1, 0, 0, 0),
    FringeOp.NOT_A_OR_NOT_B: (1, 1, 1, 0),
}

# first operator in declaration order wins; the last two are aliases of NOR/NAND
_OP_BY_TABLE: dict[tuple[int, int, int, int], FringeOp] = {}
for _op in FringeOp:
    _OP_BY_TABLE.setdefault(OP_TABLES[_op], _op)


def op_for_table(table: Sequence[int]) -> Optional[FringeOp]:
    """Operator with the given truth table, None for constants and projections."""
    return _OP_BY_TABLE.get(tuple(int(bool(v)) for v in table))


def _swap_operands(table: Sequence[int]) -> tuple[int, int, int, int]:
    return (table[0], table[2], table[1], table[3])


@dataclass(frozen=True)
class Feature:
    """Either primary input ``index`` or ``op(a, b)`` over registered features."""

    index: Optional[int] = None
    op: Optional[FringeOp] = None
    a: Optional[int] = None
    b: Optional[int] = None

    @property
    def is_input(self) -> bool:
        return self.op is None


class FeatureRegistry:
    """Primary inputs (ids 0..n-1) followed by composite features in insertion order."""

    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        self.features: list[Feature] = [Feature(index=i) for i in range(num_inputs)]
        self._keys: dict[tuple[int, int, tuple[int, ...]], int] = {}

    def __len__(self) -> int:
        return len(self.features)

    def __getitem__(self, fid: int) -> Feature:
        return self.features[fid]

    @property
    def num_composites(self) -> int:
        return len(self.features) - self.num_inputs

    def copy(self) -> "FeatureRegistry":
        other = FeatureRegistry(self.num_inputs)
        other.features = list(self.features)
        other._keys = dict(self._keys)
        return other

    def add(self, op: FringeOp, a: int, b: int) -> tuple[int, bool]:
        """Register ``op(a, b)``; returns (feature id, whether it is new)."""
        if not (0 <= a < len(self) and 0 <= b < len(self)) or a == b:
            raise ModelConfigError(f"invalid composite operands ({a}, {b})")
        table = op.table
        if a > b:
            a, b, table = b, a, _swap_operands(table)
        canonical = op_for_table(table)
        if canonical is None:
            raise ModelConfigError(f"degenerate composite {op.value}")
        key = (a, b, table)
        existing = self._keys.get(key)
        if existing is not None:
            return existing, False
        self.features.append(Feature(op=canonical, a=a, b=b))
        self._keys[key] = len(self.features) - 1
        return len(self.features) - 1, True

    def add_raw(self, op: FringeOp, a: int, b: int) -> int:
        """Append exactly ``op(a, b)`` (used when loading serialized trees)."""
        if not (0 <= a < len(self) and 0 <= b < len(self)):
            raise ModelConfigError(f"invalid composite operands ({a}, {b})")
        self.features.append(Feature(op=op, a=a, b=b))
        table = op.table if a < b else _swap_operands(op.table)
        self._keys.setdefault((min(a, b), max(a, b), table), len(self.features) - 1)
        return len(self.features) - 1

    def columns(self, matrix: np.ndarray) -> np.ndarray:
        """Values of every feature for every row, shape (rows, features)."""
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.shape[1] != self.num_inputs:
            raise WidthMismatchError(f"expected {self.num_inputs} columns, got {matrix.shape[1]}")
        values = np.empty((matrix.shape[0], len(self)), dtype=bool)
        values[:, : self.num_inputs] = matrix
        for fid in range(self.num_inputs, len(self)):
            feature = self.features[fid]
            values[:, fid] = feature.op.apply(values[:, feature.a], values[:, feature.b])
        return values

    def value(self, fid: int, row: Sequence[int], memo: Optional[dict[int, bool]] = None) -> bool:
        memo = {} if memo is None else memo
        if fid in memo:
            return memo[fid]
        feature = self.features[fid]
        if feature.is_input:
            result = bool(row[feature.index])
        else:
            a = self.value(feature.a, row, memo)
            result = bool(feature.op.apply(a, self.value(feature.b, row, memo)))
        memo[fid] = result
        return result


@dataclass
class Leaf:
    label: int


@dataclass
class Split:
    feature: int
    lo: "Node"
    hi: "Node"


Node = Union[Leaf, Split]


@dataclass
class DecisionTree:
    num_inputs: int
    features: FeatureRegistry
    root: Node
    params: DtParams = field(default_factory=DtParams)

    def predict(self, row: Sequence[int]) -> int:
        if len(row) != self.num_inputs:
            raise WidthMismatchError(f"expected {self.num_inputs} inputs, got {len(row)}")
        memo: dict[int, bool] = {}
        node = self.root
        while isinstance(node, Split):
            node = node.hi if self.features.value(node.feature, row, memo) else node.lo
        return node.label

    def predict_many(self, matrix: np.ndarray) -> np.ndarray:
        values = self.features.columns(matrix)
        out = np.zeros(values.shape[0], dtype=bool)
        stack = [(self.root, np.arange(values.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if isinstance(node, Leaf):
                out[idx] = bool(node.label)
                continue
            mask = values[idx, node.feature]
            stack.append((node.lo, idx[~mask]))
            stack.append((node.hi, idx[mask]))
        return out

    def nodes(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, Split):
                stack.extend((node.hi, node.lo))

    @property
    def num_splits(self) -> int:
        return sum(1 for node in self.nodes() if isinstance(node, Split))

    @property
    def depth(self) -> int:
        def walk(node: Node) -> int:
            return 0 if isinstance(node, Leaf) else 1 + max(walk(node.lo), walk(node.hi))

        return walk(self.root)

    def used_features(self) -> set[int]:
        return {node.feature for node in self.nodes() if isinstance(node, Split)}


def binary_entropy(positives: np.ndarray, totals: np.ndarray) -> np.ndarray:
    """Entropy in bits of positives among totals, elementwise."""
    positives = np.asarray(positives, dtype=np.float64)
    totals = np.asarray(totals, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, positives / np.where(totals > 0, totals, 1.0), 0.0)
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        terms += np.where(p < 1, (1 - p) * np.log2(np.where(p < 1, 1 - p, 1.0)), 0.0)
    return -terms


def information_gain(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Gain of splitting ``labels`` on every column of ``values``; never negative."""
    total = labels.shape[0]
    positives = int(labels.sum())
    n1 = values.sum(axis=0)
    pos1 = values[labels].sum(axis=0)
    n0 = total - n1
    pos0 = positives - pos1
    parent = binary_entropy(np.array(positives), np.array(total))
    child = (n1 * binary_entropy(pos1, n1) + n0 * binary_entropy(pos0, n0)) / max(total, 1)
    return np.maximum(parent - child, 0.0)


def fdecomp_select(
    matrix: np.ndarray,
    labels: np.ndarray,
    candidates: Sequence[int],
    rule: str = "last",
) -> Optional[int]:
    """Pick a split by functional decomposition.

    A candidate input qualifies when one branch is constant, or when no pair of
    rows differing only in that input carries equal labels. With rule ``last`` the
    last qualifying candidate is returned; ``most_support`` prefers the candidate
    with the most label-flipping pairs and falls back to ``last``.
    """
    matrix = np.asarray(matrix, dtype=bool)
    labels = np.asarray(labels, dtype=bool)
    qualifying: list[tuple[int, int]] = []
    for column in candidates:
        mask = matrix[:, column]
        lo, hi = labels[~mask], labels[mask]
        constant = (lo.size == 0 or lo.min() == lo.max()) or (hi.size == 0 or hi.min() == hi.max())
        others = matrix.copy()
        others[:, column] = False
        keys = [row.tobytes() for row in np.packbits(others, axis=1)]
        lo_labels = {keys[i]: labels[i] for i in np.flatnonzero(~mask)}
        counterexample = False
        flips = 0
        for i in np.flatnonzero(mask):
            partner = lo_labels.get(keys[i])
            if partner is None:
                continue
            if partner == labels[i]:
                counterexample = True
            else:
                flips += 1
        if constant or not counterexample:
            qualifying.append((column, flips))
    if not qualifying:
        return None
    if rule == "most_support":
        best_flips = max(flips for _, flips in qualifying)
        if best_flips > 0:
            return [column for column, flips in qualifying if flips == best_flips][-1]
    return qualifying[-1][0]


class _Grower:
    def __init__(
        self,
        matrix: np.ndarray,
        labels: np.ndarray,
        registry: FeatureRegistry,
        params: DtParams,
        allowed: Optional[np.ndarray],
    ):
        self.matrix = matrix
        self.labels = labels
        self.values = registry.columns(matrix)
        self.registry = registry
        self.params = params
        self.allowed = np.ones(len(registry), dtype=bool) if allowed is None else allowed
        self.fdecomp_calls = 0

    def grow(self, idx: np.ndarray, depth: int, used: np.ndarray, fallback: int) -> Node:
        if idx.size == 0:
            return Leaf(fallback)
        labels = self.labels[idx]
        ones = int(labels.sum())
        label = int(2 * ones > idx.size)
        if ones == 0 or ones == idx.size or idx.size < self.params.min_samples:
            return Leaf(label)
        if self.params.max_depth is not None and depth >= self.params.max_depth:
            return Leaf(label)
        rows = self.matrix[idx]
        if (rows == rows[0]).all():
            return Leaf(label)
        values = self.values[idx]
        counts = values.sum(axis=0)
        candidates = self.allowed & ~used & (counts > 0) & (counts < idx.size)
        if not candidates.any():
            return Leaf(label)
        gains = np.where(candidates, information_gain(values, labels), -np.inf)
        best = int(np.argmax(gains))
        if gains[best] < self.params.fdecomp_threshold:
            inputs = [int(c) for c in np.flatnonzero(candidates[: self.registry.num_inputs])]
            if inputs:
                self.fdecomp_calls += 1
                choice = fdecomp_select(rows, labels, inputs, self.params.fdecomp_rule)
                if choice is not None:
                    best = choice
        mask = values[:, best]
        used = used.copy()
        used[best] = True
        return Split(
            feature=best,
            lo=self.grow(idx[~mask], depth + 1, used, label),
            hi=self.grow(idx[mask], depth + 1, used, label),
        )


def grow_tree(
    matrix: np.ndarray,
    labels: np.ndarray,
    params: DtParams,
    registry: Optional[FeatureRegistry] = None,
    allowed: Optional[np.ndarray] = None,
) -> DecisionTree:
    """Train on raw arrays; rows may repeat (bootstrap samples)."""
    matrix = np.asarray(matrix, dtype=bool)
    labels = np.asarray(labels, dtype=bool)
    if matrix.shape[0] == 0:
        raise EmptyDatasetError("cannot train a decision tree on an empty dataset")
    registry = FeatureRegistry(matrix.shape[1]) if registry is None else registry.copy()
    if allowed is not None and allowed.shape[0] < len(registry):
        allowed = np.concatenate([allowed, np.zeros(len(registry) - allowed.shape[0], dtype=bool)])
    grower = _Grower(matrix, labels, registry, params, allowed)
    root = grower.grow(
        np.arange(matrix.shape[0]),
        0,
        np.zeros(len(registry), dtype=bool),
        int(2 * int(labels.sum()) > labels.shape[0]),
    )
    tree = DecisionTree(matrix.shape[1], registry, root, params)
    logger.debug(
        "Grew tree: %d splits, depth %d, %d decomposition checks",
        tree.num_splits,
        tree.depth,
        grower.fdecomp_calls,
    )
    return tree


def train_dt(
    data: Dataset, params: Optional[DtParams] = None, registry: Optional[FeatureRegistry] = None
) -> DecisionTree:
    """Grow a tree over the primary inputs."""
    if len(data) == 0:
        raise EmptyDatasetError("cannot train a decision tree on an empty dataset")
    return grow_tree(data.matrix, data.labels, params or DtParams(), registry)


def extract_fringe_features(tree: DecisionTree) -> list[tuple[FringeOp, int, int]]:
    """Composite features suggested by two-leaf splits and their parent split."""
    found: list[tuple[FringeOp, int, int]] = []

    def leaf_pair(node: Node) -> Optional[tuple[int, int]]:
        if isinstance(node, Split) and isinstance(node.lo, Leaf) and isinstance(node.hi, Leaf):
            return node.lo.label, node.hi.label
        return None

    def visit(parent: Split) -> None:
        for branch, child, sibling in ((0, parent.lo, parent.hi), (1, parent.hi, parent.lo)):
            pair = leaf_pair(child)
            if pair is None or pair[0] == pair[1]:
                continue
            p, x = parent.feature, child.feature
            sib_pair = leaf_pair(sibling)
            table = []
            for pv in (0, 1):
                for xv in (0, 1):
                    on_path = pv == branch
                    if on_path:
                        table.append(pair[xv])
                    elif isinstance(sibling, Leaf):
                        table.append(sibling.label)
                    elif sib_pair is not None and sibling.feature == x and sib_pair == pair[::-1]:
                        table.append(sib_pair[xv])
                    else:
                        table.append(None)
            if None in table:
                # sibling is a subtree: keep the conjunction leading to the positive leaf
                table = [int(pv == branch and pair[xv] == 1) for pv in (0, 1) for xv in (0, 1)]
            op = op_for_table(table)
            if op is not None:
                found.append((op, p, x))

    stack = [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Split):
            visit(node)
            stack.extend((node.hi, node.lo))
    return found


def fringe_train(data: Dataset, params: Optional[DtParams] = None) -> DecisionTree:
    """Retrain on composite features read off the fringe, within the configured limits."""
    params = params or DtParams()
    if len(data) == 0:
        raise EmptyDatasetError("cannot train a decision tree on an empty dataset")
    registry = FeatureRegistry(data.num_inputs)
    tree = train_dt(data, params, registry)
    for iteration in range(params.fringe_iterations):
        added = 0
        for op, a, b in extract_fringe_features(tree):
            if registry.num_composites >= params.fringe_feature_limit:
                break
            _, new = registry.add(op, a, b)
            added += int(new)
        logger.debug("Fringe iteration %d added %d features", iteration + 1, added)
        if added == 0:
            break
        tree = train_dt(data, params, registry)
    return tree


def evaluate(tree: DecisionTree, data: Dataset) -> float:
    """Accuracy of the tree on ``data``."""
    if data.num_inputs != tree.num_inputs:
        raise WidthMismatchError(f"expected {tree.num_inputs} inputs, got {data.num_inputs}")
    if len(data) == 0:
        return 0.0
    return float(np.mean(tree.predict_many(data.matrix) == data.labels))


def tree_to_cover(tree: DecisionTree) -> Cover:
    """Onset and offset cubes, one per root-to-leaf path; inputs-only trees."""
    onset: list[str] = []
    offset: list[str] = []
    stack: list[tuple[Node, list[str]]] = [(tree.root, ["-"] * tree.num_inputs)]
    while stack:
        node, cube = stack.pop()
        if isinstance(node, Leaf):
            (onset if node.label else offset).append("".join(cube))
            continue
        feature = tree.features[node.feature]
        if not feature.is_input:
            raise ModelConfigError("trees with composite features have no direct cube form")
        for value, child in (("1", node.hi), ("0", node.lo)):
            branch = list(cube)
            branch[feature.index] = value
            stack.append((child, branch))
    return Cover(tree.num_inputs, onset, offset)


def dump_tree(tree: DecisionTree) -> str:
    """Line format: ``T n``, composite lines ``F id OP a b``, then pre-order ``S f`` / ``L b``."""
    lines = [f"T {tree.num_inputs}"]
    for fid in range(tree.num_inputs, len(tree.features)):
        feature = tree.features[fid]
        lines.append(f"F {fid} {feature.op.value} {feature.a} {feature.b}")
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            lines.append(f"L {node.label}")
        else:
            lines.append(f"S {node.feature}")
            stack.extend((node.hi, node.lo))
    return "\n".join(lines) + "\n"


def load_tree(text: str) -> DecisionTree:
    """Parse the text written by ``dump_tree``."""
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or lines[0][0] != "T":
        raise ModelConfigError("tree text must start with 'T <inputs>'")
    registry = FeatureRegistry(int(lines[0][1]))
    cursor = 1
    while cursor < len(lines) and lines[cursor][0] == "F":
        _, fid, op, a, b = lines[cursor]
        if int(fid) != len(registry):
            raise ModelConfigError(f"feature ids must be consecutive, got {fid}")
        registry.add_raw(FringeOp(op), int(a), int(b))
        cursor += 1
    body = iter(lines[cursor:])

    def read() -> Node:
        try:
            kind, value = next(body)
        except StopIteration:
            raise ModelConfigError("truncated tree text") from None
        if kind == "L":
            return Leaf(int(value))
        if kind == "S":
            feature = int(value)
            if not 0 <= feature < len(registry):
                raise ModelConfigError(f"unknown feature {feature}")
            lo = read()
            return Split(feature, lo, read())
        raise ModelConfigError(f"unknown node kind '{kind}'")

    root = read()
    return DecisionTree(registry.num_inputs, registry, root)

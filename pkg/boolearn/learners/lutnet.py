"""Layered networks of randomly wired k-input lookup tables, fit by memorization."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from boolearn.core.errors import EmptyDatasetError, ModelConfigError, WidthMismatchError
from boolearn.core.rng import make_rng
from boolearn.models.pla import Dataset
from boolearn.schemas.params import LutParams

logger = logging.getLogger(__name__)

WIRING_SCHEMES = ("random", "unique_random")


@dataclass
class Lut:
    """``fanins`` index the previous layer (or the primary inputs for layer 0).

    Table entry ``addr`` holds the output for fanin values where fanin ``j`` is bit ``j``.
    """

    fanins: np.ndarray
    table: np.ndarray

    def address(self, values: np.ndarray) -> np.ndarray:
        """Table addresses for ``values`` of shape (rows, previous width)."""
        weights = np.left_shift(1, np.arange(len(self.fanins), dtype=np.int64))
        return values[:, self.fanins].astype(np.int64) @ weights


@dataclass
class LutNetwork:
    num_inputs: int
    k: int
    scheme: str
    seed: int
    layers: list[list[Lut]] = field(default_factory=list)

    @property
    def num_luts(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def forward(self, matrix: np.ndarray, upto: Optional[int] = None) -> np.ndarray:
        """Values after ``upto`` layers (all layers by default), shape (rows, width)."""
        values = np.asarray(matrix, dtype=bool)
        if values.ndim != 2 or values.shape[1] != self.num_inputs:
            raise WidthMismatchError(f"expected {self.num_inputs} inputs")
        for layer in self.layers[: len(self.layers) if upto is None else upto]:
            values = np.stack([lut.table[lut.address(values)] for lut in layer], axis=1)
        return values

    def predict_many(self, matrix: np.ndarray) -> np.ndarray:
        return self.forward(matrix)[:, 0]


def _draw_fanins(
    rng: np.random.Generator, source_width: int, k: int, count: int, scheme: str
) -> list[np.ndarray]:
    if scheme == "random":
        return [
            rng.choice(source_width, size=k, replace=k > source_width) for _ in range(count)
        ]
    # sources are dealt from shuffled decks; a LUT never takes the same source twice
    # unless k exceeds the source width
    if k > source_width:
        needed = count * k
        stream = np.concatenate(
            [rng.permutation(source_width) for _ in range(-(-needed // source_width))]
        )
        return [stream[i * k : (i + 1) * k] for i in range(count)]
    deck: list[int] = []
    luts = []
    for _ in range(count):
        chosen: list[int] = []
        while len(chosen) < k:
            pick = next((s for s in deck if s not in chosen), None)
            if pick is None:
                deck.extend(rng.permutation(source_width).tolist())
                continue
            deck.remove(pick)
            chosen.append(pick)
        luts.append(np.array(chosen))
    return luts


def build_topology(
    num_inputs: int,
    k: int,
    layers: int,
    luts_per_layer: int,
    scheme: str = "random",
    seed: int = 0,
) -> LutNetwork:
    """Wire ``layers`` layers of k-LUTs; the last layer has a single LUT."""
    if k < 1 or layers < 1 or luts_per_layer < 1:
        raise ModelConfigError("k, layers and luts_per_layer must be positive")
    if num_inputs < 1:
        raise ModelConfigError("a LUT network needs at least one input")
    if scheme not in WIRING_SCHEMES:
        raise ModelConfigError(f"unknown wiring scheme '{scheme}'")
    rng = make_rng(seed)
    net = LutNetwork(num_inputs=num_inputs, k=k, scheme=scheme, seed=seed)
    width = num_inputs
    for index in range(layers):
        count = 1 if index == layers - 1 else luts_per_layer
        layer = [
            Lut(fanins=np.asarray(fanins, dtype=np.int64), table=np.zeros(1 << k, dtype=bool))
            for fanins in _draw_fanins(rng, width, k, count, scheme)
        ]
        net.layers.append(layer)
        width = count
    return net


def build_from_params(num_inputs: int, params: LutParams) -> LutNetwork:
    """Wire a network from an ``LutParams`` set."""
    return build_topology(
        num_inputs, params.k, params.layers, params.luts_per_layer, params.scheme, params.seed
    )


def memorize(net: LutNetwork, data: Dataset) -> LutNetwork:
    """Fit every table to the target labels, layer by layer.

    Each entry takes the majority label of the training rows reaching it; unseen
    entries and ties take the global majority label.
    """
    if len(data) == 0:
        raise EmptyDatasetError("cannot memorize an empty dataset")
    if data.num_inputs != net.num_inputs:
        raise WidthMismatchError(f"expected {net.num_inputs} inputs, got {data.num_inputs}")
    labels = data.labels
    default = bool(data.majority_label())
    size = 1 << net.k
    values = data.matrix
    for layer in net.layers:
        for lut in layer:
            address = lut.address(values)
            totals = np.bincount(address, minlength=size)
            ones = np.bincount(address, weights=labels, minlength=size)
            table = np.full(size, default, dtype=bool)
            decided = 2 * ones != totals
            table[decided] = (2 * ones > totals)[decided]
            lut.table = table
        values = np.stack([lut.table[lut.address(values)] for lut in layer], axis=1)
    logger.debug("Memorized LUT network with %d LUTs over %d rows", net.num_luts, len(data))
    return net


def train_lutnet(data: Dataset, params: Optional[LutParams] = None) -> LutNetwork:
    """Wire a network and memorize ``data``."""
    return memorize(build_from_params(data.num_inputs, params or LutParams()), data)


def predict_lutnet(net: LutNetwork, row: Sequence[int]) -> int:
    """Network output for one row."""
    if len(row) != net.num_inputs:
        raise WidthMismatchError(f"expected {net.num_inputs} inputs, got {len(row)}")
    return int(net.predict_many(np.asarray([row], dtype=bool))[0])


def evaluate_lutnet(net: LutNetwork, data: Dataset) -> float:
    """Accuracy of the network on ``data``."""
    if len(data) == 0:
        return 0.0
    return float(np.mean(net.predict_many(data.matrix) == data.labels))

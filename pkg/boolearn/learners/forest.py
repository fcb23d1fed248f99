"""Random forests: bagged depth-limited decision trees combined by a strict majority vote."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from boolearn.core.config import get_settings
from boolearn.core.errors import EmptyDatasetError, ModelConfigError, WidthMismatchError
from boolearn.core.rng import derive_seed, make_rng
from boolearn.learners.dtree import DecisionTree, grow_tree
from boolearn.models.pla import Dataset
from boolearn.schemas.params import DtParams, RfParams

logger = logging.getLogger(__name__)


@dataclass
class Forest:
    num_inputs: int
    trees: list[DecisionTree]
    feature_subsets: list[list[int]]

    def __post_init__(self):
        if len(self.trees) % 2 == 0:
            raise ModelConfigError(f"a forest needs an odd number of trees, got {len(self.trees)}")

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def votes(self, matrix: np.ndarray) -> np.ndarray:
        """Number of trees voting 1 for every row."""
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[1] != self.num_inputs:
            raise WidthMismatchError(f"expected {self.num_inputs} inputs")
        total = np.zeros(matrix.shape[0], dtype=np.int64)
        for tree in self.trees:
            total += tree.predict_many(matrix)
        return total

    def predict_many(self, matrix: np.ndarray) -> np.ndarray:
        return 2 * self.votes(matrix) > self.n_trees


def _train_member(
    matrix: np.ndarray,
    labels: np.ndarray,
    seed: int,
    bootstrap: bool,
    num_features: int,
    params: DtParams,
) -> tuple[DecisionTree, list[int]]:
    rng = make_rng(seed)
    rows = matrix.shape[0]
    if bootstrap:
        picks = rng.integers(0, rows, size=rows)
        matrix, labels = matrix[picks], labels[picks]
    subset = sorted(int(i) for i in rng.choice(matrix.shape[1], size=num_features, replace=False))
    allowed = np.zeros(matrix.shape[1], dtype=bool)
    allowed[subset] = True
    return grow_tree(matrix, labels, params, allowed=allowed), subset


def train_rf(
    data: Dataset,
    n_trees: int = 17,
    max_depth: int = 8,
    feature_fraction: float = 0.5,
    seed: int = 0,
) -> Forest:
    """Train ``n_trees`` trees on bootstrap samples and random input subsets.

    With a single tree the bootstrap is skipped so the forest equals the plain tree
    over its feature subset.
    """
    if n_trees < 1 or n_trees % 2 == 0:
        raise ModelConfigError(f"n_trees must be a positive odd number, got {n_trees}")
    if not 0.0 < feature_fraction <= 1.0:
        raise ModelConfigError(f"feature_fraction must be in (0, 1], got {feature_fraction}")
    if len(data) == 0:
        raise EmptyDatasetError("cannot train a random forest on an empty dataset")

    num_features = max(1, math.ceil(feature_fraction * data.num_inputs)) if data.num_inputs else 0
    params = DtParams(max_depth=max_depth, seed=seed)
    matrix, labels = data.matrix, data.labels
    seeds = [derive_seed(seed, index) for index in range(n_trees)]
    bootstrap = n_trees > 1
    workers = min(get_settings().threads, n_trees)

    def job(member_seed: int) -> tuple[DecisionTree, list[int]]:
        return _train_member(matrix, labels, member_seed, bootstrap, num_features, params)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            members = list(pool.map(job, seeds))
    else:
        members = [job(s) for s in seeds]

    logger.debug(
        "Trained forest of %d trees over %d of %d inputs", n_trees, num_features, data.num_inputs
    )
    return Forest(data.num_inputs, [tree for tree, _ in members], [subset for _, subset in members])


def train_rf_params(data: Dataset, params: Optional[RfParams] = None) -> Forest:
    """Train a forest from an ``RfParams`` set."""
    params = params or RfParams()
    return train_rf(data, params.n_trees, params.max_depth, params.feature_fraction, params.seed)


def predict_rf(forest: Forest, row: Sequence[int]) -> int:
    """Majority vote of the trees for one row."""
    if len(row) != forest.num_inputs:
        raise WidthMismatchError(f"expected {forest.num_inputs} inputs, got {len(row)}")
    votes = sum(tree.predict(row) for tree in forest.trees)
    return int(2 * votes > forest.n_trees)


def evaluate_rf(forest: Forest, data: Dataset) -> float:
    """Accuracy of the forest on ``data``."""
    if len(data) == 0:
        return 0.0
    return float(np.mean(forest.predict_many(data.matrix) == data.labels))

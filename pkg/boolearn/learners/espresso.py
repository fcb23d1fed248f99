"""Two-level cover minimization: one expand pass followed by one irredundant pass.

Cubes are strings over ``0``, ``1`` and ``-``. Internally they are int8 matrices
with ``DASH`` marking a raised literal. Everything outside onset and offset is a
don't-care and may be claimed by expansion.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from boolearn.core.errors import ContradictionError, WidthMismatchError
from boolearn.models.pla import Dataset

logger = logging.getLogger(__name__)

DASH = 2
_ENCODE = {"0": 0, "1": 1, "-": DASH}
_DECODE = np.array(["0", "1", "-"])


@dataclass(frozen=True)
class Cover:
    """Onset cubes to be minimized against an explicit offset."""

    num_inputs: int
    onset: list[str] = field(default_factory=list)
    offset: list[str] = field(default_factory=list)

    def __post_init__(self):
        for cube in (*self.onset, *self.offset):
            if len(cube) != self.num_inputs:
                raise WidthMismatchError(f"cube '{cube}' does not have width {self.num_inputs}")

    @classmethod
    def from_dataset(cls, data: Dataset) -> "Cover":
        chars = np.where(data.matrix, "1", "0")
        rows = ["".join(row) for row in chars]
        onset = [row for row, label in zip(rows, data.labels) if label]
        offset = [row for row, label in zip(rows, data.labels) if not label]
        return cls(data.num_inputs, onset, offset)

    def onset_matrix(self) -> np.ndarray:
        return to_matrix(self.onset, self.num_inputs)

    def offset_matrix(self) -> np.ndarray:
        return to_matrix(self.offset, self.num_inputs)


def to_matrix(cubes: Sequence[str], num_inputs: int) -> np.ndarray:
    """Ternary matrix of cube strings."""
    matrix = np.empty((len(cubes), num_inputs), dtype=np.int8)
    for i, cube in enumerate(cubes):
        matrix[i] = [_ENCODE[ch] for ch in cube]
    return matrix


def to_cubes(matrix: np.ndarray) -> list[str]:
    """Cube strings of a ternary matrix."""
    return ["".join(_DECODE[row]) for row in np.asarray(matrix, dtype=np.int64)]


def intersecting(matrix: np.ndarray, cube: np.ndarray) -> np.ndarray:
    """Mask of rows of ``matrix`` that share at least one minterm with ``cube``."""
    return ((matrix == DASH) | (cube == DASH) | (matrix == cube)).all(axis=1)


def containing(matrix: np.ndarray, cube: np.ndarray) -> np.ndarray:
    """Mask of rows of ``matrix`` that contain every minterm of ``cube``."""
    return ((matrix == DASH) | (matrix == cube)).all(axis=1)


def expand(cover: Cover) -> Cover:
    """Raise literals of every onset cube in column order while the offset stays disjoint.

    An onset cube already contained in an earlier expanded cube is absorbed by it.
    """
    offset = cover.offset_matrix()
    expanded: list[np.ndarray] = []
    for cube in cover.onset_matrix():
        if expanded and containing(np.asarray(expanded), cube).any():
            continue
        conflicts = (cube != DASH) & (offset != DASH) & (offset != cube)
        counts = conflicts.sum(axis=1)
        if (counts == 0).any():
            raise ContradictionError(f"onset cube '{to_cubes([cube])[0]}' intersects the offset")
        cube = cube.copy()
        for column in range(cover.num_inputs):
            if cube[column] == DASH:
                continue
            hits = conflicts[:, column]
            if np.all(counts > hits):
                counts = counts - hits
                cube[column] = DASH
        expanded.append(cube)
    result = np.asarray(expanded, dtype=np.int8).reshape(-1, cover.num_inputs)
    logger.debug("expand: %d onset cubes -> %d", len(cover.onset), len(result))
    return Cover(cover.num_inputs, to_cubes(result), list(cover.offset))


def is_tautology(matrix: np.ndarray) -> bool:
    """Whether the cubes in ``matrix`` cover the whole space of their columns."""
    if matrix.shape[0] == 0:
        return False
    if matrix.shape[1] == 0:
        return True
    dashes = matrix == DASH
    if dashes.all(axis=1).any():
        return True
    volume = np.exp2(dashes.sum(axis=1).astype(np.float64)).sum()
    if volume < 2.0 ** matrix.shape[1]:
        return False
    zeros = (matrix == 0).sum(axis=0)
    ones = (matrix == 1).sum(axis=0)
    binate = (zeros > 0) & (ones > 0)
    if not binate.any():
        return False
    column = int(np.argmax(np.where(binate, zeros + ones, -1)))
    for value in (0, 1):
        rows = (matrix[:, column] == value) | (matrix[:, column] == DASH)
        if not is_tautology(np.delete(matrix[rows], column, axis=1)):
            return False
    return True


def is_covered(cube: np.ndarray, others: np.ndarray) -> bool:
    """Whether every minterm of ``cube`` lies in some cube of ``others``."""
    if others.shape[0] == 0:
        return False
    free = cube == DASH
    cofactor = others[intersecting(others, cube)]
    return is_tautology(cofactor[:, free])


def irredundant(cover: Cover) -> Cover:
    """Drop, in cube order, every cube covered by the cubes still kept."""
    cubes = cover.onset_matrix()
    keep = list(range(len(cubes)))
    for index in range(len(cubes)):
        others = cubes[[k for k in keep if k != index]]
        if is_covered(cubes[index], others):
            keep.remove(index)
    logger.debug("irredundant: %d cubes -> %d", len(cubes), len(keep))
    return Cover(cover.num_inputs, to_cubes(cubes[keep]), list(cover.offset))


def minimize(cover: Cover) -> Cover:
    """expand followed by a single irredundant pass."""
    return irredundant(expand(cover))

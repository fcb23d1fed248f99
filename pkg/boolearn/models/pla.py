"""PLA care-set files and the bit-packed datasets derived from them."""

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, TextIO, Union

import numpy as np

from boolearn.core.bits import pack_bits, unpack_bits
from boolearn.core.errors import ContradictionError, PlaFormatError, WidthMismatchError

CUBE_CHARS = frozenset("01-")
SUPPORTED_TYPES = ("fr",)
IGNORED_DIRECTIVES = (".ilb", ".ob")


@dataclass(frozen=True)
class Cube:
    """One product term: input pattern over {0,1,-} and its output bit."""

    inputs: str
    output: int

    @property
    def is_minterm(self) -> bool:
        return "-" not in self.inputs


@dataclass(frozen=True)
class PlaFile:
    """Single-output PLA with cubes kept in file order."""

    num_inputs: int
    cubes: tuple[Cube, ...] = ()
    num_outputs: int = 1
    pla_type: str = "fr"

    def __post_init__(self):
        if self.num_outputs != 1:
            raise PlaFormatError(f"only single-output PLAs are supported, got {self.num_outputs}")
        if self.pla_type not in SUPPORTED_TYPES:
            raise PlaFormatError(f"unsupported .type {self.pla_type}")
        seen: dict[str, int] = {}
        for cube in self.cubes:
            if len(cube.inputs) != self.num_inputs:
                raise PlaFormatError(
                    f"cube '{cube.inputs}' has width {len(cube.inputs)}, expected {self.num_inputs}"
                )
            previous = seen.setdefault(cube.inputs, cube.output)
            if previous != cube.output:
                raise ContradictionError(f"contradictory cube '{cube.inputs}'")

    @classmethod
    def from_cubes(cls, num_inputs: int, cubes: Iterable[Cube]) -> "PlaFile":
        """Build a file, silently collapsing identical cubes."""
        unique: dict[Cube, None] = {}
        for cube in cubes:
            unique.setdefault(cube, None)
        return cls(num_inputs=num_inputs, cubes=tuple(unique))

    def __len__(self) -> int:
        return len(self.cubes)


def _int_arg(directive: str, parts: list[str], lineno: int) -> int:
    if len(parts) != 2 or not parts[1].isdigit():
        raise PlaFormatError(f"line {lineno}: malformed directive '{directive}'")
    return int(parts[1])


def parse_pla(text: Union[str, TextIO]) -> PlaFile:
    """Parse PLA text (or an open text stream)."""
    stream = io.StringIO(text) if isinstance(text, str) else text
    num_inputs: Optional[int] = None
    num_outputs: Optional[int] = None
    declared: Optional[int] = None
    pla_type = "fr"
    cubes: list[Cube] = []

    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        head = parts[0]
        if head.startswith("."):
            if head == ".i":
                num_inputs = _int_arg(line, parts, lineno)
            elif head == ".o":
                num_outputs = _int_arg(line, parts, lineno)
                if num_outputs != 1:
                    raise PlaFormatError(f"line {lineno}: .o must be 1, got {num_outputs}")
            elif head == ".p":
                declared = _int_arg(line, parts, lineno)
            elif head == ".type":
                if len(parts) != 2:
                    raise PlaFormatError(f"line {lineno}: malformed directive '{line}'")
                pla_type = parts[1]
            elif head in (".e", ".end"):
                break
            elif head in IGNORED_DIRECTIVES:
                continue
            else:
                raise PlaFormatError(f"line {lineno}: unknown directive '{head}'")
            continue

        if num_inputs is None or num_outputs is None:
            raise PlaFormatError(f"line {lineno}: cube before .i/.o directives")
        if len(parts) != 2:
            raise PlaFormatError(f"line {lineno}: expected '<inputs> <output>', got '{line}'")
        inputs, output = parts
        if len(inputs) != num_inputs:
            raise PlaFormatError(
                f"line {lineno}: cube width {len(inputs)} does not match .i {num_inputs}"
            )
        if not set(inputs) <= CUBE_CHARS or output not in ("0", "1"):
            raise PlaFormatError(f"line {lineno}: unknown character in cube '{line}'")
        cubes.append(Cube(inputs, int(output)))

    if num_inputs is None or num_outputs is None:
        raise PlaFormatError("missing .i or .o directive")
    if declared is not None and declared != len(cubes):
        raise PlaFormatError(f".p declares {declared} cubes but {len(cubes)} were found")
    if pla_type not in SUPPORTED_TYPES:
        raise PlaFormatError(f"unsupported .type {pla_type}")
    return PlaFile.from_cubes(num_inputs, cubes)


def write_pla(pla: PlaFile) -> str:
    """Serialize ``pla``; parse_pla(write_pla(p)) == p."""
    lines = [
        f".i {pla.num_inputs}",
        f".o {pla.num_outputs}",
        f".type {pla.pla_type}",
        f".p {len(pla.cubes)}",
    ]
    lines.extend(f"{cube.inputs} {cube.output}" for cube in pla.cubes)
    lines.append(".e")
    return "\n".join(lines) + "\n"


def read_pla_file(path) -> PlaFile:
    """Parse the PLA file at ``path``."""
    with open(path) as fh:
        return parse_pla(fh)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Deduplicated samples: packed rows (samples x words) and boolean labels."""

    num_inputs: int
    rows: np.ndarray
    labels: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, labels: np.ndarray) -> "Dataset":
        """Pack, deduplicate and reject contradictions."""
        matrix = np.asarray(matrix, dtype=bool)
        labels = np.asarray(labels, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != labels.shape[0]:
            raise WidthMismatchError("rows and labels must have equal length")
        packed = pack_bits(matrix)
        if len(packed):
            _, first, inverse, counts = np.unique(
                packed, axis=0, return_index=True, return_inverse=True, return_counts=True
            )
            inverse = inverse.reshape(-1)
            ones = np.bincount(inverse, weights=labels, minlength=len(counts))
            if np.any((ones > 0) & (ones < counts)):
                raise ContradictionError("dataset contains contradictory rows")
            keep = np.sort(first)
            packed, labels = packed[keep], labels[keep]
        return cls(num_inputs=matrix.shape[1], rows=packed, labels=labels)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @cached_property
    def matrix(self) -> np.ndarray:
        """Unpacked (samples, inputs) boolean view."""
        return unpack_bits(self.rows, self.num_inputs)

    def columns(self) -> np.ndarray:
        """Per-input words with samples packed along bits, shape (inputs, words)."""
        return pack_bits(self.matrix.T)

    def label_words(self) -> np.ndarray:
        return pack_bits(self.labels)

    def majority_label(self) -> int:
        """Most frequent label, ties resolved to 0."""
        return int(2 * int(self.labels.sum()) > len(self))

    def subset(self, indices: np.ndarray) -> "Dataset":
        """Dataset of the rows at ``indices``."""
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.num_inputs, self.rows[indices], self.labels[indices])

    def merge(self, other: "Dataset") -> "Dataset":
        """Union of two datasets; contradicting rows raise."""
        if other.num_inputs != self.num_inputs:
            raise WidthMismatchError(
                f"cannot merge datasets of width {self.num_inputs} and {other.num_inputs}"
            )
        return Dataset.from_matrix(
            np.vstack([self.matrix, other.matrix]), np.concatenate([self.labels, other.labels])
        )

    def to_pla(self) -> PlaFile:
        """Minterm PLA holding every row."""
        chars = np.where(self.matrix, "1", "0")
        cubes = [Cube("".join(row), int(label)) for row, label in zip(chars, self.labels)]
        return PlaFile(num_inputs=self.num_inputs, cubes=tuple(cubes))


def to_dataset(pla: PlaFile) -> Dataset:
    """Convert a minterm-only PLA into a packed dataset."""
    for cube in pla.cubes:
        if not cube.is_minterm:
            raise PlaFormatError(f"cube '{cube.inputs}' is not a minterm")
    count = len(pla.cubes)
    text = "".join(cube.inputs for cube in pla.cubes).encode("ascii")
    matrix = (np.frombuffer(text, dtype=np.uint8) == ord("1")).reshape(count, pla.num_inputs)
    labels = np.array([cube.output for cube in pla.cubes], dtype=bool)
    return Dataset.from_matrix(matrix, labels)

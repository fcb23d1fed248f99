"""Benchmark function families and care-set sampling.

For two-word families input ``i < k`` is bit ``i`` of ``a`` and input ``k + i`` is bit
``i`` of ``b`` (LSB first).
"""

import logging
import re
from typing import Sequence

import numpy as np

from boolearn.core.errors import ModelConfigError, WidthMismatchError
from boolearn.core.rng import make_rng
from boolearn.models.pla import Cube, PlaFile
from boolearn.schemas.bench import DEFAULT_SAMPLES, BenchmarkSpec, Family

logger = logging.getLogger(__name__)

SYMMETRIC_PRESETS = {
    "sym16_1": "00000000111111111",
    "sym16_2": "11111100000111111",
    "sym16_3": "00011110001111000",
    "sym16_4": "00001110101110000",
    "sym16_5": "00000011111000000",
}

_NAME = re.compile(r"^(?P<family>[a-z_0-9]+):(?P<key>k|sig)=(?P<value>[0-9]+)$")
_CODE_LIMIT = 62


def parse_benchmark(
    name: str, seed: int = 0, samples_per_split: int = DEFAULT_SAMPLES
) -> BenchmarkSpec:
    """Resolve a preset name, ``family:k=K`` or ``symmetric:sig=BITS``."""
    if name in SYMMETRIC_PRESETS:
        signature = SYMMETRIC_PRESETS[name]
        return BenchmarkSpec(
            family=Family.SYMMETRIC,
            k=len(signature) - 1,
            signature=signature,
            seed=seed,
            samples_per_split=samples_per_split,
        )
    match = _NAME.match(name.strip())
    if match is None:
        raise ModelConfigError(f"unknown benchmark '{name}'")
    try:
        family = Family(match["family"])
    except ValueError:
        raise ModelConfigError(f"unknown benchmark family '{match['family']}'") from None
    if match["key"] == "sig":
        if family != Family.SYMMETRIC:
            raise ModelConfigError("'sig=' is only valid for the symmetric family")
        signature = match["value"]
        return BenchmarkSpec(
            family=family,
            k=len(signature) - 1,
            signature=signature,
            seed=seed,
            samples_per_split=samples_per_split,
        )
    if family == Family.SYMMETRIC:
        raise ModelConfigError("the symmetric family needs 'symmetric:sig=BITS'")
    return BenchmarkSpec(
        family=family, k=int(match["value"]), seed=seed, samples_per_split=samples_per_split
    )


def _word(bits: Sequence[int], start: int, width: int) -> int:
    return sum(int(bool(bits[start + i])) << i for i in range(width))


def oracle(spec: BenchmarkSpec, bits: Sequence[int]) -> int:
    """Output of the benchmark function on one input vector."""
    if len(bits) != spec.num_inputs:
        raise WidthMismatchError(f"expected {spec.num_inputs} input bits, got {len(bits)}")
    k = spec.k
    family = spec.family
    if family == Family.PARITY:
        return sum(int(bool(b)) for b in bits) & 1
    if family == Family.SYMMETRIC:
        return int(spec.signature[sum(int(bool(b)) for b in bits)])
    a, b = _word(bits, 0, k), _word(bits, k, k)
    if family == Family.ADDER_MSB:
        return ((a + b) >> k) & 1
    if family == Family.ADDER_MSB2:
        return ((a + b) >> (k - 1)) & 1
    if family == Family.COMPARATOR:
        return int(a > b)
    if family == Family.MULTIPLIER_MSB:
        return ((a * b) >> (2 * k - 1)) & 1
    return ((a * b) >> (k - 1)) & 1


def _unique_vectors(rng: np.random.Generator, num_inputs: int, count: int) -> np.ndarray:
    """``count`` distinct uniform input vectors as a (count, num_inputs) bool matrix."""
    if num_inputs <= _CODE_LIMIT:
        codes = rng.choice(1 << num_inputs, size=count, replace=False)
        shifts = np.arange(num_inputs, dtype=np.int64)
        return ((codes[:, None] >> shifts) & 1).astype(bool)
    seen: dict[bytes, np.ndarray] = {}
    while len(seen) < count:
        for row in rng.integers(0, 2, size=(count - len(seen), num_inputs)).astype(bool):
            seen.setdefault(np.packbits(row).tobytes(), row)
    return np.array(list(seen.values())[:count])


def _to_pla(spec: BenchmarkSpec, matrix: np.ndarray) -> PlaFile:
    cubes = []
    for row in matrix:
        cubes.append(Cube("".join("1" if bit else "0" for bit in row), oracle(spec, row)))
    return PlaFile.from_cubes(spec.num_inputs, cubes)


def sample_splits(spec: BenchmarkSpec) -> tuple[PlaFile, PlaFile, PlaFile]:
    """Train, validation and test PLAs over disjoint uniformly drawn input vectors.

    When the input space is too small for three disjoint splits each split is drawn
    independently and a warning is logged.
    """
    rng = make_rng(spec.seed)
    n = spec.num_inputs
    size = spec.samples_per_split
    capacity = 1 << n if n <= _CODE_LIMIT else None
    if capacity is not None and 3 * size > capacity:
        logger.warning(
            "%s: %d samples per split exceed the %d-vector input space, splits may overlap",
            spec.name,
            size,
            capacity,
        )
        splits = [
            _unique_vectors(rng, n, size)
            if size <= capacity
            else rng.integers(0, 2, size=(size, n)).astype(bool)
            for _ in range(3)
        ]
    else:
        rows = _unique_vectors(rng, n, 3 * size)
        splits = [rows[i * size : (i + 1) * size] for i in range(3)]
    train, valid, test = (_to_pla(spec, rows) for rows in splits)
    return train, valid, test
